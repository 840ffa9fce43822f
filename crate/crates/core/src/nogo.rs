//! Exact counting identity for pair marginals of uniform-support states, and
//! the two-uniformity deficit floor it implies for singlets.
//!
//! For a normalized state whose every multi-index holds each of the `d`
//! labels exactly `K = n/d` times, the diagonal sum
//!
//! ```text
//! S(ψ) = Σ_{α<β} Σ_ℓ τ_{αβ}(ℓℓ; ℓℓ) = d·C(K,2)
//! ```
//!
//! because each `|t_i|²` is counted once for every pair of sites carrying the
//! same label. Two-uniformity would force every one of those `d·C(n,2)`
//! entries to equal `1/d²`, i.e. `S = C(n,2)/d`. The difference is
//! `gap = K(d-1)/2`.

use num_integer::binomial;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::singlet::{verify_invariance, SingletBasis};
use crate::states::{partial_trace, PureState, SystemShape};
use crate::uniformity::pair_deficit;

pub type Rational = Ratio<i128>;

/// Haar samples per basis member when checking basis invariance.
const INVARIANCE_SAMPLES: usize = 8;

/// Rational rendered with its decimal value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub num: i128,
    pub den: i128,
    pub decimal: f64,
}

impl From<Rational> for ExactValue {
    fn from(r: Rational) -> Self {
        Self {
            num: *r.numer(),
            den: *r.denom(),
            decimal: *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Verdict {
    /// `d` does not divide `n`, so the invariant subspace is zero.
    NoSingletStates,
    /// `d = 1`: the only state is a product state and the argument is vacuous.
    OutOfScope,
    /// `gap > 0`: no singlet is two-uniform. AME singlets remain possible
    /// only when `n ≤ 3`, where AME means one-uniform.
    NoTwoUniformSinglet { ame_possible: bool },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoGoCertificate {
    pub n: usize,
    pub d: usize,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    /// `C(n,2)/d`, forced by two-uniformity.
    pub counting_sum_required: Option<ExactValue>,
    /// `d·C(K,2)`, forced by the singlet support structure.
    pub counting_sum_actual: Option<ExactValue>,
    /// `required - actual`.
    pub gap: Option<ExactValue>,
    /// `gap² / (d·C(n,2))`.
    pub deficit_floor: Option<ExactValue>,
    pub verdict: Verdict,
    pub derivation: String,
}

impl NoGoCertificate {
    pub fn floor_value(&self) -> Option<f64> {
        self.deficit_floor.map(|f| f.decimal)
    }
}

const DERIVATION: &str = "Over the d*C(n,2) diagonal pair-marginal entries tau_ab(l,l;l,l), \
the deviations from 1/d^2 sum to actual - required = -gap. By Cauchy-Schwarz their squares \
sum to at least gap^2/(d*C(n,2)), and the squared Frobenius pair deficit dominates its \
diagonal part.";

/// Exact counting values for `(required, actual, gap, floor)`, when `d | n`.
pub fn counting_values(
    shape: &SystemShape,
) -> Option<(Rational, Rational, Rational, Option<Rational>)> {
    let k = shape.k_ratio()? as i128;
    let n = shape.n() as i128;
    let d = shape.d() as i128;
    let pairs = binomial(n, 2);
    let required = Rational::new(pairs, d);
    let actual = Rational::from_integer(d * binomial(k, 2));
    let gap = required - actual;
    let floor = (pairs > 0).then(|| gap * gap / Rational::from_integer(d * pairs));
    Some((required, actual, gap, floor))
}

/// Fills the certificate for `shape` in exact rational arithmetic.
pub fn certify(shape: &SystemShape) -> NoGoCertificate {
    let (n, d) = (shape.n(), shape.d());
    let Some((required, actual, gap, floor)) = counting_values(shape) else {
        return NoGoCertificate {
            n,
            d,
            k: None,
            counting_sum_required: None,
            counting_sum_actual: None,
            gap: None,
            deficit_floor: None,
            verdict: Verdict::NoSingletStates,
            derivation: format!(
                "{d} does not divide {n}: every singlet holds each label equally often"
            ),
        };
    };
    let verdict = if d == 1 || gap == Rational::from_integer(0) {
        Verdict::OutOfScope
    } else {
        Verdict::NoTwoUniformSinglet {
            ame_possible: n <= 3,
        }
    };
    NoGoCertificate {
        n,
        d,
        k: shape.k_ratio(),
        counting_sum_required: Some(required.into()),
        counting_sum_actual: Some(actual.into()),
        gap: Some(gap.into()),
        deficit_floor: floor.map(Into::into),
        verdict,
        derivation: DERIVATION.to_string(),
    }
}

/// `S(ψ) = Σ_{α<β} Σ_ℓ τ_{αβ}(ℓℓ;ℓℓ)`, read from the pair marginals.
///
/// Only defined for states whose support has the uniform profile.
pub fn counting_sum(state: &PureState) -> Result<f64> {
    let shape = state.shape();
    if !state.has_uniform_support() {
        return domain("counting identity needs every label exactly n/d times in every term");
    }
    let (n, d) = (shape.n(), shape.d());
    let mut total = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let tau = partial_trace(state, &[a, b])?;
            total += (0..d).map(|l| tau.entry(&[l, l], &[l, l]).re).sum::<f64>();
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericalCheckReport {
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub expected_counting_sum: f64,
    pub max_identity_residual: f64,
    pub deficit_floor: f64,
    pub min_deficit: f64,
    pub max_gram_error: f64,
    pub max_invariance_residual: f64,
}

/// Samples random normalized states in the span of `basis` and checks the
/// counting identity and the deficit floor on each.
///
/// The basis itself is checked first (orthonormality, uniform support and
/// invariance), since the guarantees only hold inside the true subspace. Any
/// failure is a [`Error::CertificateViolation`].
pub fn verify_certificate_numerically(
    basis: &SingletBasis,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<NumericalCheckReport> {
    if basis.is_empty() {
        return domain("basis is empty");
    }
    let shape = basis.shape();
    let (_, actual, _, floor) = counting_values(&shape)
        .ok_or_else(|| Error::CertificateViolation(format!("{shape} admits no singlet states")))?;
    let expected = *actual.numer() as f64 / *actual.denom() as f64;
    let floor = floor.map_or(0.0, |f| *f.numer() as f64 / *f.denom() as f64);

    let gram = basis.gram_matrix();
    let mut max_gram_error: f64 = 0.0;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            max_gram_error = max_gram_error.max((gram[(r, c)] - target).norm());
        }
    }
    if max_gram_error > tol {
        return Err(Error::CertificateViolation(format!(
            "basis is not orthonormal (Gram error {max_gram_error:.3e})"
        )));
    }
    let mut max_invariance_residual: f64 = 0.0;
    for (j, member) in basis.members().iter().enumerate() {
        if !member.has_uniform_support() {
            return Err(Error::CertificateViolation(format!(
                "basis member {j} has non-uniform support"
            )));
        }
        let r = verify_invariance(member, INVARIANCE_SAMPLES, seed.wrapping_add(j as u64))?;
        max_invariance_residual = max_invariance_residual.max(r);
    }
    // the residual scales like a norm, so compare at √tol
    if max_invariance_residual > tol.sqrt() {
        return Err(Error::CertificateViolation(format!(
            "basis member is not invariant (residual {max_invariance_residual:.3e})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_identity_residual: f64 = 0.0;
    let mut min_deficit = f64::INFINITY;
    for trial in 0..trials {
        let (_, state) = basis.random_state(&mut rng)?;
        let s = counting_sum(&state)?;
        let residual = (s - expected).abs();
        max_identity_residual = max_identity_residual.max(residual);
        if residual > tol {
            return Err(Error::CertificateViolation(format!(
                "trial {trial}: counting sum {s} differs from {expected}"
            )));
        }
        let deficit = pair_deficit(&state)?;
        min_deficit = min_deficit.min(deficit);
        if deficit < floor - tol {
            return Err(Error::CertificateViolation(format!(
                "trial {trial}: pair deficit {deficit} below floor {floor}"
            )));
        }
    }
    Ok(NumericalCheckReport {
        n: shape.n(),
        d: shape.d(),
        trials,
        seed,
        expected_counting_sum: expected,
        max_identity_residual,
        deficit_floor: floor,
        min_deficit,
        max_gram_error,
        max_invariance_residual,
    })
}
