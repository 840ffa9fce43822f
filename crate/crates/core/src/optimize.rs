//! Minimization of the pair deficit `D(ψ) = Σ_{α<β} ‖τ_{αβ} - I/d²‖²` over
//! unit vectors in the span of a singlet basis.
//!
//! `ψ = B c` with `B` the basis as columns over its (uniform) support. Writing
//! `X_A = τ_A - I/d²`, the differential is `dD = 4 Re⟨(X_A ⊗ 1)ψ, dψ⟩` summed
//! over pairs, so the coefficient gradient is `g = 4 B^† Σ_A (X_A ⊗ 1)ψ`.
//! Steps follow the tangential gradient, are line-searched with Armijo
//! backtracking and renormalized onto the sphere.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::nogo::{certify, ExactValue};
use crate::singlet::{random_unit_vector, SingletBasis};
use crate::states::{MultiIndex, PureState};
use crate::uniformity::pair_deficit;

const ARMIJO: f64 = 1e-4;
/// Bounds on the backtracking shrink factor.
const MAX_SHRINK: f64 = 0.5;
const MIN_SHRINK: f64 = 0.1;
const INITIAL_STEP: f64 = 1.0;
const MIN_STEP: f64 = 1e-20;
/// Relative size below which a predicted decrease is lost in rounding.
const UNRESOLVED_DECREASE: f64 = 1e-13;
/// Increase tolerated when only the derivative test can resolve progress.
pub const ROUNDING_SLACK: f64 = 1e-14;
const FD_STEP: f64 = 1e-5;
const FD_DIRECTIONS: usize = 10;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop once the tangential gradient norm falls to this value.
    pub grad_tol: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 5000,
            seed: 0,
            grad_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub deficit: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gradient_norm: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    /// Unit-norm coefficients over the basis members.
    pub best_coefficients: Vec<C64>,
    /// Pair deficit of the best state, re-evaluated from its marginals.
    pub best_deficit: f64,
    pub floor: f64,
    pub floor_exact: Option<ExactValue>,
    pub best_restart: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub converged: bool,
    pub gradient_norm: f64,
    /// Objective after each accepted step of the best restart.
    pub trajectory: Vec<f64>,
    pub per_restart: Vec<RestartSummary>,
    #[serde(skip)]
    pub state: Option<PureState>,
}

/// Pair deficit as a function of basis coefficients.
pub struct DeficitObjective {
    /// `columns[j][p]`: amplitude of member `j` at support position `p`.
    columns: Vec<Vec<C64>>,
    support_len: usize,
    local_dim: usize,
    /// Per site pair: support positions grouped by the labels of the other
    /// sites, each entry carrying the pair's local index `i_α·d + i_β`.
    groups: Vec<Vec<Vec<(usize, usize)>>>,
}

impl DeficitObjective {
    pub fn new(basis: &SingletBasis) -> Result<Self> {
        let shape = basis.shape();
        if shape.n() < 2 {
            return domain("pair deficit needs at least two sites");
        }
        let support = basis.support();
        let position: BTreeMap<&MultiIndex, usize> =
            support.iter().enumerate().map(|(p, i)| (i, p)).collect();
        let columns = basis
            .members()
            .iter()
            .map(|m| {
                let mut col = vec![C64::new(0.0, 0.0); support.len()];
                for (idx, amp) in m.iter() {
                    col[position[idx]] = *amp;
                }
                col
            })
            .collect();
        let (n, d) = (shape.n(), shape.d());
        let mut groups = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let rest: Vec<usize> = (0..n).filter(|&s| s != a && s != b).collect();
                let mut by_rest: BTreeMap<Vec<u8>, Vec<(usize, usize)>> = BTreeMap::new();
                for (p, idx) in support.iter().enumerate() {
                    by_rest
                        .entry(idx.restrict(&rest))
                        .or_default()
                        .push((idx.get(a) * d + idx.get(b), p));
                }
                groups.push(by_rest.into_values().collect());
            }
        }
        Ok(Self {
            columns,
            support_len: support.len(),
            local_dim: d * d,
            groups,
        })
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    fn expand(&self, coefficients: &[C64]) -> Vec<C64> {
        let mut psi = vec![C64::new(0.0, 0.0); self.support_len];
        for (c, col) in coefficients.iter().zip(&self.columns) {
            for (p, a) in col.iter().enumerate() {
                psi[p] += c * a;
            }
        }
        psi
    }

    /// `X_A = τ_A - I/d²` for every pair, as dense row-major blocks.
    fn deviations(&self, psi: &[C64]) -> Vec<Vec<C64>> {
        let m = self.local_dim;
        let target = 1.0 / m as f64;
        self.groups
            .iter()
            .map(|pair| {
                let mut x = vec![C64::new(0.0, 0.0); m * m];
                for group in pair {
                    for &(r, p) in group {
                        for &(c, q) in group {
                            x[r * m + c] += psi[p] * psi[q].conj();
                        }
                    }
                }
                for r in 0..m {
                    x[r * m + r] -= target;
                }
                x
            })
            .collect()
    }

    pub fn value(&self, coefficients: &[C64]) -> f64 {
        let psi = self.expand(coefficients);
        self.deviations(&psi)
            .iter()
            .map(|x| x.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Value and Euclidean gradient with respect to the coefficients, in the
    /// convention `dD = Re⟨g, dc⟩`.
    pub fn value_and_gradient(&self, coefficients: &[C64]) -> (f64, Vec<C64>) {
        let psi = self.expand(coefficients);
        let devs = self.deviations(&psi);
        let m = self.local_dim;
        let mut value = 0.0;
        let mut grad_psi = vec![C64::new(0.0, 0.0); self.support_len];
        for (pair, x) in self.groups.iter().zip(&devs) {
            value += x.iter().map(|z| z.norm_sqr()).sum::<f64>();
            for group in pair {
                for &(r, p) in group {
                    let mut acc = C64::new(0.0, 0.0);
                    for &(c, q) in group {
                        acc += x[r * m + c] * psi[q];
                    }
                    grad_psi[p] += acc * 4.0;
                }
            }
        }
        let grad = self
            .columns
            .iter()
            .map(|col| col.iter().zip(&grad_psi).map(|(b, g)| b.conj() * g).sum())
            .collect();
        (value, grad)
    }
}

fn re_inner(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: Vec<C64>) -> Vec<C64> {
    let n = norm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Removes the radial component: `g - Re⟨c, g⟩ c`.
fn tangent(point: &[C64], g: &[C64]) -> Vec<C64> {
    let radial = re_inner(point, g);
    g.iter().zip(point).map(|(g, c)| g - c * radial).collect()
}

struct RestartRun {
    coefficients: Vec<C64>,
    value: f64,
    iterations: usize,
    converged: bool,
    gradient_norm: f64,
    trajectory: Vec<f64>,
}

/// One backtracking line search along `-g_t`. Returns the accepted point
/// with its value and gradient.
///
/// Trial steps start at `INITIAL_STEP`. A rejected step `t` is replaced by
/// the minimizer of the one-dimensional interpolant, clamped to
/// `[MIN_SHRINK·t, MAX_SHRINK·t]`. While the Armijo decrease is resolvable the
/// test uses function values; below that it switches to the equivalent
/// derivative test `φ'(t) ≤ (1 - 2·ARMIJO)·|φ'(0)|`, which stays accurate when
/// value differences are lost in rounding.
fn line_search(
    objective: &DeficitObjective,
    c: &[C64],
    f: f64,
    g_t: &[C64],
) -> Option<(Vec<C64>, f64, Vec<C64>)> {
    let gn2 = re_inner(g_t, g_t);
    let slope0 = -gn2;
    let scale = f.abs().max(1.0);
    let mut step = INITIAL_STEP;
    while step >= MIN_STEP {
        let raw: Vec<C64> = c.iter().zip(g_t).map(|(c, g)| c - g * step).collect();
        let raw_norm = norm(&raw);
        let trial: Vec<C64> = raw.into_iter().map(|z| z / raw_norm).collect();
        let predicted = ARMIJO * step * gn2;
        let next_step = if predicted >= UNRESOLVED_DECREASE * scale {
            let f_trial = objective.value(&trial);
            if f_trial <= f - predicted {
                let (f_trial, g) = objective.value_and_gradient(&trial);
                return Some((trial, f_trial, g));
            }
            // quadratic through φ(0), φ'(0), φ(t)
            -slope0 * step * step / (2.0 * (f_trial - f - slope0 * step))
        } else {
            let (f_trial, g) = objective.value_and_gradient(&trial);
            let dir: Vec<C64> = g_t.iter().map(|z| -z).collect();
            let slope = re_inner(&tangent(&trial, &g), &dir) / raw_norm;
            if slope <= (1.0 - 2.0 * ARMIJO) * gn2 && f_trial <= f + ROUNDING_SLACK * scale {
                return Some((trial, f_trial, g));
            }
            // secant root of φ'
            step * slope0 / (slope0 - slope)
        };
        step = if next_step.is_finite() {
            next_step.clamp(MIN_SHRINK * step, MAX_SHRINK * step)
        } else {
            MAX_SHRINK * step
        };
    }
    None
}

fn descend(objective: &DeficitObjective, start: Vec<C64>, opts: &OptimizeOptions) -> RestartRun {
    let mut c = normalize(start);
    let (mut f, g) = objective.value_and_gradient(&c);
    let mut g_t = tangent(&c, &g);
    let mut trajectory = vec![f];
    let mut iterations = 0;
    while iterations < opts.max_iters && norm(&g_t) > opts.grad_tol {
        let Some((next, f_next, g)) = line_search(objective, &c, f, &g_t) else {
            break;
        };
        iterations += 1;
        g_t = tangent(&next, &g);
        c = next;
        f = f_next;
        trajectory.push(f);
    }
    let gradient_norm = norm(&g_t);
    RestartRun {
        coefficients: c,
        value: f,
        iterations,
        converged: gradient_norm <= opts.grad_tol,
        gradient_norm,
        trajectory,
    }
}

/// Projected-gradient descent from `opts.restarts` seeded random starts.
///
/// Restarts run in parallel; restart `r` draws its start from stream `r` of
/// a ChaCha generator seeded with `opts.seed`, and the minimum is chosen with
/// ties broken by restart index, so results do not depend on scheduling.
pub fn minimize_deficit(
    basis: &SingletBasis,
    opts: &OptimizeOptions,
) -> Result<OptimizationResult> {
    if basis.is_empty() {
        return domain("cannot optimize over an empty basis");
    }
    let objective = DeficitObjective::new(basis)?;
    let certificate = certify(&basis.shape());
    let restarts = opts.restarts.max(1);

    let runs: Vec<RestartRun> = if basis.len() == 1 {
        // the feasible set is a single ray
        let c = vec![C64::new(1.0, 0.0)];
        let (value, g) = objective.value_and_gradient(&c);
        vec![RestartRun {
            gradient_norm: norm(&tangent(&c, &g)),
            coefficients: c,
            value,
            iterations: 0,
            converged: true,
            trajectory: vec![value],
        }]
    } else {
        (0..restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r as u64);
                let start = random_unit_vector(basis.len(), &mut rng);
                descend(&objective, start, opts)
            })
            .collect()
    };

    let best_restart = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let per_restart = runs
        .iter()
        .enumerate()
        .map(|(restart, run)| RestartSummary {
            restart,
            deficit: run.value,
            iterations: run.iterations,
            converged: run.converged,
            gradient_norm: run.gradient_norm,
        })
        .collect();
    let best = &runs[best_restart];
    let state = basis.combine(&best.coefficients)?;
    let best_deficit = pair_deficit(&state)?;
    Ok(OptimizationResult {
        n: basis.shape().n(),
        d: basis.shape().d(),
        seed: opts.seed,
        best_coefficients: best.coefficients.clone(),
        best_deficit,
        floor: certificate.floor_value().unwrap_or(0.0),
        floor_exact: certificate.deficit_floor,
        best_restart,
        iterations: best.iterations,
        restarts: runs.len(),
        converged: best.converged,
        gradient_norm: best.gradient_norm,
        trajectory: best.trajectory.clone(),
        per_restart,
        state: Some(state),
    })
}

/// Norm of the tangential gradient of `D` at `point`.
pub fn tangent_gradient_norm(basis: &SingletBasis, point: &[C64]) -> Result<f64> {
    let objective = DeficitObjective::new(basis)?;
    let (_, g) = objective.value_and_gradient(point);
    Ok(norm(&tangent(point, &g)))
}

/// Compares the analytic tangential derivative with central differences of
/// `D(c/‖c‖)` (step `1e-5`) along random tangent directions.
///
/// The error in each direction is scaled by `‖g_t‖·‖v‖`, the largest
/// derivative any unit direction can have, and the maximum is returned. A
/// one-member basis has no nontrivial tangent direction and returns 0.
pub fn gradient_check(basis: &SingletBasis, point: &[C64], seed: u64) -> Result<f64> {
    if basis.len() <= 1 {
        return Ok(0.0);
    }
    if point.len() != basis.len() {
        return Err(crate::Error::DimensionMismatch {
            expected: basis.len(),
            found: point.len(),
        });
    }
    let objective = DeficitObjective::new(basis)?;
    let c = normalize(point.to_vec());
    let (_, g) = objective.value_and_gradient(&c);
    let g_t = tangent(&c, &g);
    let scale = norm(&g_t);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..FD_DIRECTIONS {
        let v = normalize(tangent(&c, &random_unit_vector(c.len(), &mut rng)));
        let shifted = |sign: f64| {
            let p: Vec<C64> = c
                .iter()
                .zip(&v)
                .map(|(c, v)| c + v * (sign * FD_STEP))
                .collect();
            objective.value(&normalize(p))
        };
        let fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * FD_STEP);
        let analytic = re_inner(&g_t, &v);
        worst = worst.max((fd - analytic).abs() / scale.max(1e-14));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singlet::build_singlet_basis;
    use crate::states::SystemShape;
    use crate::DEFAULT_TOL;

    fn basis(n: usize, d: usize) -> SingletBasis {
        build_singlet_basis(SystemShape::new(n, d).unwrap(), DEFAULT_TOL)
    }

    #[test]
    fn objective_matches_marginal_route() {
        let b = basis(6, 2);
        let obj = DeficitObjective::new(&b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let (c, state) = b.random_state(&mut rng).unwrap();
            let direct = pair_deficit(&state).unwrap();
            assert!((obj.value(&c) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let b = basis(4, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for seed in 0..5 {
            let c = b.random_coefficients(&mut rng);
            assert!(gradient_check(&b, &c, seed).unwrap() <= 1e-5);
        }
    }

    #[test]
    fn single_member_basis() {
        let b = basis(2, 2);
        let r = minimize_deficit(&b, &OptimizeOptions::default()).unwrap();
        assert_eq!(r.iterations, 0);
        let direct = pair_deficit(&b.members()[0]).unwrap();
        assert_eq!(r.best_deficit, direct);
        assert!((direct - 0.75).abs() < 1e-15);
        assert_eq!(gradient_check(&b, &[C64::new(1.0, 0.0)], 0).unwrap(), 0.0);
    }

    #[test]
    fn empty_basis_rejected() {
        assert!(minimize_deficit(&basis(3, 2), &OptimizeOptions::default()).is_err());
    }

    #[test]
    fn four_qubit_minimum_respects_floor() {
        let b = basis(4, 2);
        let r = minimize_deficit(&b, &OptimizeOptions::default()).unwrap();
        assert!(r.best_deficit >= 1.0 / 12.0 - 1e-9);
        assert!(r.converged, "gradient norm {}", r.gradient_norm);
        let norm: f64 = r.best_coefficients.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(r.trajectory.windows(2).all(|w| w[1] <= w[0] + 1e-13));
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let b = basis(4, 2);
        let opts = OptimizeOptions {
            restarts: 4,
            seed: 42,
            ..Default::default()
        };
        let x = minimize_deficit(&b, &opts).unwrap();
        let y = minimize_deficit(&b, &opts).unwrap();
        assert_eq!(x.best_deficit.to_bits(), y.best_deficit.to_bits());
        assert_eq!(x.best_coefficients, y.best_coefficients);
    }
}
