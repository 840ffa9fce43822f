//! k-uniformity and AME predicates built on marginals.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::states::{partial_trace, PureState};
use crate::DEFAULT_TOL;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SubsystemDeviation {
    pub sites: Vec<usize>,
    /// `‖τ_A - I/d^|A|‖²_F`.
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UniformityReport {
    pub k: usize,
    /// Sum of the per-subsystem deviations.
    pub deficit: f64,
    pub worst_subsystem: Option<Vec<usize>>,
    pub worst_deviation: f64,
    pub per_subsystem: Vec<SubsystemDeviation>,
    pub is_k_uniform: bool,
    pub tolerance: f64,
}

fn report(state: &PureState, k: usize, tol: f64) -> Result<UniformityReport> {
    let n = state.shape().n();
    let mut per_subsystem = Vec::new();
    for sites in (0..n).combinations(k) {
        let tau = partial_trace(state, &sites)?;
        per_subsystem.push(SubsystemDeviation {
            deviation: tau.deviation_from_maximally_mixed(),
            sites,
        });
    }
    let deficit: f64 = per_subsystem.iter().map(|s| s.deviation).sum();
    // first maximum in lexicographic order
    let worst = per_subsystem
        .iter()
        .fold(None::<&SubsystemDeviation>, |best, s| match best {
            Some(b) if b.deviation >= s.deviation => Some(b),
            _ => Some(s),
        });
    Ok(UniformityReport {
        k,
        deficit,
        worst_subsystem: worst.map(|w| w.sites.clone()),
        worst_deviation: worst.map_or(0.0, |w| w.deviation),
        is_k_uniform: deficit <= tol,
        per_subsystem,
        tolerance: tol,
    })
}

/// Tests every subsystem of exactly `k` sites, `1 ≤ k ≤ n - 1`. Smaller
/// subsystems follow by further tracing and are not re-tested.
pub fn is_k_uniform(state: &PureState, k: usize, tol: f64) -> Result<UniformityReport> {
    let n = state.shape().n();
    if k == 0 || k >= n {
        return domain(format!("k={k} outside 1..={}", n.saturating_sub(1)));
    }
    state.require_normalized(DEFAULT_TOL)?;
    report(state, k, tol)
}

/// k-uniformity at `k = ⌊n/2⌋`. A single site is vacuously AME.
pub fn is_ame(state: &PureState, tol: f64) -> Result<UniformityReport> {
    let n = state.shape().n();
    state.require_normalized(DEFAULT_TOL)?;
    if n < 2 {
        return Ok(UniformityReport {
            k: 0,
            deficit: 0.0,
            worst_subsystem: None,
            worst_deviation: 0.0,
            per_subsystem: Vec::new(),
            is_k_uniform: true,
            tolerance: tol,
        });
    }
    report(state, n / 2, tol)
}

/// `D(ψ) = Σ_{α<β} ‖τ_{αβ} - I/d²‖²_F`; zero exactly for two-uniform states.
pub fn pair_deficit(state: &PureState) -> Result<f64> {
    if state.shape().n() < 2 {
        return domain("pair deficit needs at least two sites");
    }
    state.require_normalized(DEFAULT_TOL)?;
    Ok(report(state, 2, DEFAULT_TOL)?.deficit)
}
