//! The subspace of `(C^d)^{⊗n}` that is invariant up to a phase under
//! `U ⊗ … ⊗ U`, and checks of the structure every such state must have.
//!
//! Construction restricts to multi-indices containing every label exactly
//! `K = n/d` times, then takes the joint kernel of the collective traceless
//! generators `Σ_α g^(α)` on that support. Any vector in the kernel is
//! invariant under `SU(d)`, and the scalar part of `U(d)` only contributes
//! the phase `det(U)^K`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::perm::Permutation;
use crate::states::{
    apply_collective, apply_local, enumerate_support, LocalOperator, MultiIndex, PureState,
    SupportProfile, SystemShape,
};
use crate::DEFAULT_TOL;

/// Minimum residual norm for a projected unit vector to enter the
/// orthonormal basis.
const PIVOT_FLOOR: f64 = 1e-3;

/// Restriction of the phase function to label permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PermutationPhase {
    /// `f(π) = 1`.
    Trivial,
    /// `f(π) = sgn(π)`.
    Signum,
}

impl PermutationPhase {
    pub fn value(&self, pi: &Permutation) -> f64 {
        match self {
            Self::Trivial => 1.0,
            Self::Signum => pi.sign() as f64,
        }
    }
}

/// Orthonormal basis of the invariant subspace for one shape.
#[derive(Clone, Debug)]
pub struct SingletBasis {
    shape: SystemShape,
    members: Vec<PureState>,
    tolerance: f64,
    permutation_phase: Option<PermutationPhase>,
}

impl SingletBasis {
    /// Wraps externally supplied members (for example, read from JSON)
    /// without verifying them.
    pub fn from_members(
        shape: SystemShape,
        members: Vec<PureState>,
        tolerance: f64,
        permutation_phase: Option<PermutationPhase>,
    ) -> Result<Self> {
        if let Some(bad) = members.iter().find(|m| m.shape() != shape) {
            return domain(format!(
                "member of shape {} in a {shape} basis",
                bad.shape()
            ));
        }
        Ok(Self {
            shape,
            members,
            tolerance,
            permutation_phase,
        })
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn members(&self) -> &[PureState] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn permutation_phase(&self) -> Option<PermutationPhase> {
        self.permutation_phase
    }

    /// `G_{jk} = ⟨b_j|b_k⟩`.
    pub fn gram_matrix(&self) -> DMatrix<C64> {
        let r = self.members.len();
        DMatrix::from_fn(r, r, |j, k| self.members[j].inner(&self.members[k]))
    }

    /// Sorted union of the members' supports.
    pub fn support(&self) -> Vec<MultiIndex> {
        let mut all: Vec<MultiIndex> = self
            .members
            .iter()
            .flat_map(|m| m.iter().map(|(i, _)| i.clone()))
            .collect();
        all.sort();
        all.dedup();
        all
    }

    /// `Σ_j c_j |b_j⟩`.
    pub fn combine(&self, coefficients: &[C64]) -> Result<PureState> {
        if coefficients.len() != self.members.len() {
            return Err(Error::DimensionMismatch {
                expected: self.members.len(),
                found: coefficients.len(),
            });
        }
        let terms: Vec<(C64, &PureState)> = coefficients
            .iter()
            .copied()
            .zip(self.members.iter())
            .collect();
        PureState::linear_combination(self.shape, &terms)
    }

    /// Complex Gaussian coefficients normalized to the unit sphere.
    pub fn random_coefficients<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        random_unit_vector(self.members.len(), rng)
    }

    /// A random normalized state in the span, with its coefficients.
    pub fn random_state<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Vec<C64>, PureState)> {
        if self.is_empty() {
            return domain("empty basis has no states");
        }
        let c = self.random_coefficients(rng);
        let state = self.combine(&c)?;
        Ok((c, state))
    }

    /// Compares the numerical rank against the hook-length count.
    pub fn dimension_diagnostic(&self) -> Option<String> {
        let expected = expected_dimension(&self.shape);
        (expected != self.members.len() as u128).then(|| {
            format!(
                "numerical rank {} differs from expected dimension {expected} for {}",
                self.members.len(),
                self.shape
            )
        })
    }
}

pub(crate) fn random_unit_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..len)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Orthonormal basis of the invariant subspace of `shape`.
///
/// Each traceless generator is real (`X`, `H`) or purely imaginary (`Y`);
/// the imaginary ones are multiplied by `i`, which leaves the kernel
/// unchanged and keeps the constraint matrix real. Singular values below
/// `tol · σ_max` count as zero. The basis is made deterministic by
/// projecting unit vectors `e_i` in lexicographic order of `i` onto the
/// kernel and orthogonalizing (twice) against the members accepted so far.
pub fn build_singlet_basis(shape: SystemShape, tol: f64) -> SingletBasis {
    let empty = SingletBasis {
        shape,
        members: Vec::new(),
        tolerance: tol,
        permutation_phase: None,
    };
    let Some(uniform) = SupportProfile::uniform(&shape) else {
        return empty;
    };
    let support = enumerate_support(&shape, &uniform).expect("uniform profile sums to n");
    let cols = support.len();

    // rows are keyed by (generator, output index) so the layout is deterministic
    let generators = LocalOperator::traceless_generators(shape.d());
    let mut row_of: BTreeMap<(usize, MultiIndex), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (g_idx, g) in generators.iter().enumerate() {
        let imaginary = g.matrix().iter().all(|z| z.re == 0.0);
        for (col, idx) in support.iter().enumerate() {
            let unit = PureState::from_amplitudes(shape, [(idx.clone(), C64::new(1.0, 0.0))])
                .expect("support index fits shape");
            let image = apply_collective(&unit, g).expect("generator matches d");
            for (out, value) in image.iter() {
                let next = row_of.len();
                let row = *row_of.entry((g_idx, out.clone())).or_insert(next);
                entries.push((row, col, if imaginary { value.im } else { value.re }));
            }
        }
    }
    let mut constraint = DMatrix::<f64>::zeros(row_of.len(), cols);
    for (r, c, v) in entries {
        constraint[(r, c)] += v;
    }

    let kernel = null_space(constraint, tol).map(|x| C64::new(x, 0.0));
    let members = lexicographic_orthonormalize(&kernel, cols)
        .into_iter()
        .map(|v| {
            let entries = support.iter().cloned().zip(v.iter().copied());
            PureState::from_amplitudes(shape, entries)
                .expect("support fits shape")
                .canonical()
        })
        .collect::<Vec<_>>();

    let permutation_phase = members
        .first()
        .and_then(|m| permutation_phase_of(m, tol.max(DEFAULT_TOL).sqrt()).ok());
    SingletBasis {
        shape,
        members,
        tolerance: tol,
        permutation_phase,
    }
}

/// Columns spanning the right null space of `m`.
///
/// A tall `m` is first reduced to its square QR factor `R`, which has the
/// same singular values and right singular vectors.
fn null_space(m: DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let cols = m.ncols();
    let square = if m.nrows() > cols {
        m.qr().r()
    } else {
        m.resize_vertically(cols, 0.0)
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..sigma.len())
        .filter(|&j| sigma[j] < tol * sigma_max || sigma_max == 0.0)
        .collect();
    DMatrix::from_fn(cols, keep.len(), |r, c| v_t[(keep[c], r)])
}

fn lexicographic_orthonormalize(kernel: &DMatrix<C64>, dim: usize) -> Vec<DVector<C64>> {
    let rank = kernel.ncols();
    let mut accepted: Vec<DVector<C64>> = Vec::with_capacity(rank);
    for i in 0..dim {
        if accepted.len() == rank {
            break;
        }
        // P e_i = V V^† e_i
        let coeffs = kernel.row(i).adjoint();
        let mut v = kernel * coeffs;
        for _ in 0..2 {
            for q in &accepted {
                let overlap = q.dotc(&v);
                v -= q * overlap;
            }
        }
        let norm = v.norm();
        if norm > PIVOT_FLOOR {
            accepted.push(v / C64::new(norm, 0.0));
        }
    }
    accepted
}

/// Maximum of `‖U^{⊗n}|ψ⟩ - ξ̂|ψ⟩‖` with `ξ̂ = ⟨ψ|U^{⊗n}|ψ⟩` over `samples`
/// Haar-random `U`.
pub fn verify_invariance(state: &PureState, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return domain("at least one sample is required");
    }
    state.require_normalized(DEFAULT_TOL)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let u = LocalOperator::haar(state.shape().d(), &mut rng);
        worst = worst.max(invariance_residual(state, &u)?.0);
    }
    Ok(worst)
}

/// `(‖U^{⊗n}ψ - ξ̂ψ‖, ξ̂)` for one operator.
fn invariance_residual(state: &PureState, u: &LocalOperator) -> Result<(f64, C64)> {
    let image = apply_local(state, u)?;
    let xi = state.inner(&image);
    let residual = image.difference(&state.scaled(xi))?.norm_sqr().sqrt();
    Ok((residual, xi))
}

/// Permutation phase read off the adjacent transpositions `(k, k+1)`.
///
/// Each must map the state to `±` itself and all signs must agree.
pub fn permutation_phase_of(state: &PureState, tol: f64) -> Result<PermutationPhase> {
    let d = state.shape().d();
    let norm_sqr = state.norm_sqr();
    if norm_sqr == 0.0 {
        return domain("zero state has no phase function");
    }
    let mut sign: Option<f64> = None;
    for k in 0..d.saturating_sub(1) {
        let theta = Permutation::transposition(d, k, k + 1)?;
        let image = apply_local(state, &LocalOperator::permutation(&theta))?;
        let s = state.inner(&image) / norm_sqr;
        let observed = if (s - 1.0).norm() <= tol {
            1.0
        } else if (s + 1.0).norm() <= tol {
            -1.0
        } else {
            return Err(Error::Inconsistent(format!(
                "transposition ({k} {}) gives overlap {s}, not ±1",
                k + 1
            )));
        };
        let residual = image.difference(&state.scaled(C64::new(observed, 0.0)))?;
        if residual.norm_sqr().sqrt() > tol * norm_sqr.sqrt() {
            return Err(Error::Inconsistent(format!(
                "transposition ({k} {}) does not map the state to a multiple of itself",
                k + 1
            )));
        }
        match sign {
            None => sign = Some(observed),
            Some(prev) if prev != observed => {
                return Err(Error::Inconsistent(
                    "adjacent transpositions act with different signs".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(match sign {
        Some(s) if s < 0.0 => PermutationPhase::Signum,
        _ => PermutationPhase::Trivial,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseFunctionReport {
    pub permutation_phase: PermutationPhase,
    /// Integer `m` with `ξ(U) = det(U)^m` on every sample.
    pub det_power: i64,
    /// `max_U |ξ̂(U) - det(U)^m|`.
    pub residual: f64,
    pub samples: usize,
}

/// Measures the phase function of a singlet state.
///
/// The permutation part comes from adjacent transpositions. The
/// determinant power is fitted by trying every integer `m` with `|m| ≤ n`
/// against Haar samples whose determinant is at least 0.1 away from 1, and
/// keeping the best; the fit is accepted only if its worst-sample residual is
/// within `tol`.
pub fn extract_phase_function(
    state: &PureState,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<PhaseFunctionReport> {
    if samples == 0 {
        return domain("at least one sample is required");
    }
    state.require_normalized(DEFAULT_TOL)?;
    let permutation_phase = permutation_phase_of(state, tol)?;

    let d = state.shape().d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut measured: Vec<(C64, C64)> = Vec::with_capacity(samples);
    let mut attempts = 0;
    while measured.len() < samples {
        attempts += 1;
        if attempts > 100 * samples {
            return domain("could not draw unitaries with determinant away from 1");
        }
        let u = LocalOperator::haar(d, &mut rng);
        let det = u.determinant();
        if d > 1 && (det - 1.0).norm() < 0.1 {
            continue;
        }
        let (_, xi) = invariance_residual(state, &u)?;
        measured.push((det, xi));
    }

    let n = state.shape().n() as i64;
    let (det_power, residual) = (-n..=n)
        .map(|m| {
            let worst = measured
                .iter()
                .map(|(det, xi)| (xi - det.powi(m as i32)).norm())
                .fold(0.0, f64::max);
            (m, worst)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.abs().cmp(&b.0.abs())))
        .expect("candidate range is nonempty");
    if residual > tol {
        return Err(Error::Inconsistent(format!(
            "no determinant power fits the sampled phases (best m={det_power}, residual {residual:.3e})"
        )));
    }
    // det V(π) = sgn(π), so the two measurements must agree
    let parity_says_signum = det_power % 2 != 0;
    if d > 1 && parity_says_signum != (permutation_phase == PermutationPhase::Signum) {
        return Err(Error::Inconsistent(format!(
            "permutation phase {permutation_phase:?} disagrees with det power {det_power}"
        )));
    }
    Ok(PhaseFunctionReport {
        permutation_phase,
        det_power,
        residual,
        samples,
    })
}

/// `t_{π(i)} = f(π) t_i` for every stored amplitude, to `tol`.
pub fn check_sign_relation(
    state: &PureState,
    pi: &Permutation,
    phase: PermutationPhase,
    tol: f64,
) -> bool {
    if pi.len() != state.shape().d() {
        return false;
    }
    let f = phase.value(pi);
    state
        .iter()
        .all(|(idx, t)| (state.amplitude(&idx.relabel(pi)) - t * f).norm() <= tol)
}

/// Per-member outcome of the structural checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MemberLemmas {
    /// Consistent `±1` action of adjacent transpositions.
    pub permutation_phase: Option<PermutationPhase>,
    /// Sign relation over every label permutation.
    pub sign_relation: bool,
    pub permutations_checked: usize,
    /// All stored indices share one support profile.
    pub common_profile: Option<Vec<usize>>,
    /// That profile is `N_k = K` for every label.
    pub uniform_profile: bool,
}

impl MemberLemmas {
    pub fn all_hold(&self) -> bool {
        self.permutation_phase.is_some()
            && self.sign_relation
            && self.common_profile.is_some()
            && self.uniform_profile
    }
}

/// Runs the structural checks on a single state. Label permutations are
/// enumerated exhaustively for `d ≤ 7`; beyond that only transpositions are
/// checked.
pub fn check_lemmas(state: &PureState, tol: f64) -> MemberLemmas {
    let d = state.shape().d();
    let phase = permutation_phase_of(state, tol).ok();
    let perms: Vec<Permutation> = if d <= 7 {
        Permutation::all(d).collect()
    } else {
        (0..d)
            .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
            .map(|(a, b)| Permutation::transposition(d, a, b).expect("in range"))
            .collect()
    };
    let sign_relation = phase
        .map(|f| {
            perms
                .iter()
                .all(|pi| check_sign_relation(state, pi, f, tol))
        })
        .unwrap_or(false);
    let common = state.common_profile();
    let uniform_profile = state.has_uniform_support();
    MemberLemmas {
        permutation_phase: phase,
        sign_relation,
        permutations_checked: perms.len(),
        common_profile: common.map(|p| p.counts),
        uniform_profile,
    }
}

/// Number of standard Young tableaux of the rectangular `d × K` shape, or 0
/// if `d` does not divide `n`.
pub fn expected_dimension(shape: &SystemShape) -> u128 {
    let Some(k) = shape.k_ratio() else {
        return 0;
    };
    let d = shape.d();
    let n = shape.n();
    // hook-length formula n! / Π hooks, evaluated on prime exponents
    let mut exponents = vec![0i64; n + 1];
    let mut add = |mut x: usize, sign: i64| {
        let mut p = 2;
        while x > 1 {
            while x.is_multiple_of(p) {
                exponents[p] += sign;
                x /= p;
            }
            p += 1;
        }
    };
    for x in 2..=n {
        add(x, 1);
    }
    for row in 0..d {
        for col in 0..k {
            add((k - col - 1) + (d - row - 1) + 1, -1);
        }
    }
    let mut out: u128 = 1;
    for (p, &e) in exponents.iter().enumerate() {
        debug_assert!(e >= 0, "hook product must divide n!");
        for _ in 0..e {
            out = out.checked_mul(p as u128).expect("dimension fits in u128");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn shape(n: usize, d: usize) -> SystemShape {
        SystemShape::new(n, d).unwrap()
    }

    #[test]
    fn two_qubit_basis_is_psi_minus() {
        let b = build_singlet_basis(shape(2, 2), DEFAULT_TOL);
        assert_eq!(b.len(), 1);
        assert!(b.members()[0].eq_up_to_phase(&fixtures::psi_minus(), 1e-12));
        assert_eq!(b.permutation_phase(), Some(PermutationPhase::Signum));
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(build_singlet_basis(shape(4, 2), DEFAULT_TOL).len(), 2);
        assert_eq!(build_singlet_basis(shape(3, 2), DEFAULT_TOL).len(), 0);
        assert_eq!(build_singlet_basis(shape(4, 3), DEFAULT_TOL).len(), 0);
        assert_eq!(build_singlet_basis(shape(1, 2), DEFAULT_TOL).len(), 0);
        let b = build_singlet_basis(shape(3, 3), DEFAULT_TOL);
        assert_eq!(b.len(), 1);
        assert!(b.members()[0].eq_up_to_phase(&fixtures::psi3(), 1e-12));
    }

    #[test]
    fn degenerate_dimension_one() {
        let b = build_singlet_basis(shape(3, 1), DEFAULT_TOL);
        assert_eq!(b.len(), 1);
        assert_eq!(b.members()[0].support_len(), 1);
    }

    #[test]
    fn four_qubit_basis_contains_psi4() {
        let b = build_singlet_basis(shape(4, 2), DEFAULT_TOL);
        // ψ4 lies in the span: its projection has unit norm
        let weight: f64 = b
            .members()
            .iter()
            .map(|m| m.inner(&fixtures::psi4()).norm_sqr())
            .sum();
        assert!((weight - 1.0).abs() < 1e-12);
        let gram = b.gram_matrix();
        assert!((gram - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn basis_is_deterministic() {
        let a = build_singlet_basis(shape(6, 2), DEFAULT_TOL);
        let b = build_singlet_basis(shape(6, 2), DEFAULT_TOL);
        for (x, y) in a.members().iter().zip(b.members()) {
            assert!(x.approx_eq(y, 0.0));
        }
    }

    #[test]
    fn invariance_residuals() {
        assert!(verify_invariance(&fixtures::psi_minus(), 20, 1).unwrap() <= 1e-9);
        assert!(verify_invariance(&fixtures::psi4(), 20, 2).unwrap() <= 1e-9);
        assert!(verify_invariance(&fixtures::psi3(), 20, 3).unwrap() <= 1e-9);
        let prod = PureState::basis(shape(2, 2), &[0, 0]).unwrap();
        assert!(verify_invariance(&prod, 20, 4).unwrap() > 0.1);
        assert!(verify_invariance(&prod, 0, 4).is_err());
    }

    #[test]
    fn product_state_residual_for_hadamard() {
        // oracle: H⊗H|00⟩ = |++⟩, ξ̂ = ⟨00|++⟩ = 1/2, residual² = 1 - |ξ̂|² = 3/4
        let prod = PureState::basis(shape(2, 2), &[0, 0]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(-h, 0.0),
            ],
        );
        let u = LocalOperator::unitary(m, 1e-12).unwrap();
        let (r, xi) = invariance_residual(&prod, &u).unwrap();
        assert!((xi - 0.5).norm() < 1e-15);
        assert!((r - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn phase_functions() {
        let r = extract_phase_function(&fixtures::psi_minus(), 10, 5, DEFAULT_TOL).unwrap();
        assert_eq!(r.permutation_phase, PermutationPhase::Signum);
        assert_eq!(r.det_power, 1);
        let r = extract_phase_function(&fixtures::psi4(), 10, 5, DEFAULT_TOL).unwrap();
        assert_eq!(r.permutation_phase, PermutationPhase::Trivial);
        assert_eq!(r.det_power, 2);
        let r = extract_phase_function(&fixtures::psi3(), 10, 5, DEFAULT_TOL).unwrap();
        assert_eq!(r.permutation_phase, PermutationPhase::Signum);
        assert_eq!(r.det_power, 1);
    }

    #[test]
    fn antisymmetric_state_negated_by_label_swap() {
        // oracle: apply (0 1) to each term of ψ3 by hand
        let psi = fixtures::psi3();
        let pi = Permutation::transposition(3, 0, 1).unwrap();
        for (idx, t) in psi.iter() {
            let swapped: Vec<usize> = idx.labels().map(|l| pi.apply(l)).collect();
            let target = MultiIndex::new(&psi.shape(), swapped).unwrap();
            assert!((psi.amplitude(&target) + t).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_extraction_rejects_non_singlets() {
        let prod = PureState::basis(shape(2, 2), &[0, 0]).unwrap();
        assert!(matches!(
            extract_phase_function(&prod, 5, 0, DEFAULT_TOL),
            Err(Error::Inconsistent(_))
        ));
        // (|01⟩ + |10⟩)/√2 passes the permutation test but not the unitary fit
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let triplet =
            PureState::from_real_terms(shape(2, 2), &[(&[0, 1], h), (&[1, 0], h)]).unwrap();
        assert!(matches!(
            extract_phase_function(&triplet, 5, 0, DEFAULT_TOL),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn sign_relation_examples() {
        let swap = Permutation::transposition(2, 0, 1).unwrap();
        assert!(check_sign_relation(
            &fixtures::psi_minus(),
            &swap,
            PermutationPhase::Signum,
            1e-12
        ));
        assert!(!check_sign_relation(
            &fixtures::psi_minus(),
            &swap,
            PermutationPhase::Trivial,
            1e-12
        ));
        assert!(check_sign_relation(
            &fixtures::psi4(),
            &swap,
            PermutationPhase::Trivial,
            1e-12
        ));
        for psi in [fixtures::psi_minus(), fixtures::psi3(), fixtures::psi4()] {
            let id = Permutation::identity(psi.shape().d());
            assert!(check_sign_relation(
                &psi,
                &id,
                PermutationPhase::Signum,
                0.0
            ));
            assert!(check_lemmas(&psi, 1e-12).all_hold());
        }
    }

    #[test]
    fn hook_length_counts() {
        assert_eq!(expected_dimension(&shape(4, 2)), 2);
        assert_eq!(expected_dimension(&shape(5, 2)), 0);
        assert_eq!(expected_dimension(&shape(6, 3)), 5);
        assert_eq!(expected_dimension(&shape(6, 2)), 5);
        assert_eq!(expected_dimension(&shape(3, 3)), 1);
        // Catalan numbers for two rows
        assert_eq!(expected_dimension(&shape(20, 2)), 16796);
        assert_eq!(expected_dimension(&shape(4, 1)), 1);
        assert_eq!(expected_dimension(&shape(9, 3)), 42);
    }
}
