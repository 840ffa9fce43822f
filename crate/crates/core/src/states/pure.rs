use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::{LocalOperator, MultiIndex, OperatorKind, SupportProfile, SystemShape};
use crate::error::{domain, Error, Result};
use crate::perm::Permutation;

/// Amplitudes with `|t|² ≤ PRUNE_REL² · ‖ψ‖²` are treated as zero and dropped.
const PRUNE_REL: f64 = 1e-14;

/// `|ψ⟩ = Σ_i t_i |i⟩`, stored sparsely in lexicographic index order.
///
/// Only nonzero amplitudes are kept. States are immutable; every operation
/// returns a new state.
#[derive(Clone, Debug)]
pub struct PureState {
    shape: SystemShape,
    amplitudes: BTreeMap<MultiIndex, C64>,
}

impl PureState {
    /// Builds a state from `(index, amplitude)` pairs. Repeated indices are
    /// summed. The amplitudes are taken as given: no normalization and no
    /// phase fixing.
    pub fn from_amplitudes(
        shape: SystemShape,
        entries: impl IntoIterator<Item = (MultiIndex, C64)>,
    ) -> Result<Self> {
        let mut amplitudes = BTreeMap::new();
        for (idx, amp) in entries {
            if idx.len() != shape.n() || idx.labels().any(|l| l >= shape.d()) {
                return domain(format!("multi-index {idx:?} does not fit shape {shape}"));
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return domain(format!("non-finite amplitude at {idx:?}"));
            }
            *amplitudes.entry(idx).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        Ok(Self::from_map(shape, amplitudes))
    }

    pub(crate) fn from_map(shape: SystemShape, mut amplitudes: BTreeMap<MultiIndex, C64>) -> Self {
        let norm_sqr: f64 = amplitudes.values().map(|a| a.norm_sqr()).sum();
        let cutoff = PRUNE_REL * PRUNE_REL * norm_sqr;
        amplitudes.retain(|_, a| a.norm_sqr() > cutoff);
        Self { shape, amplitudes }
    }

    /// Convenience constructor from label lists and real amplitudes.
    pub fn from_real_terms(shape: SystemShape, terms: &[(&[usize], f64)]) -> Result<Self> {
        let entries = terms
            .iter()
            .map(|(labels, amp)| {
                MultiIndex::new(&shape, labels.iter().copied()).map(|i| (i, C64::new(*amp, 0.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_amplitudes(shape, entries)
    }

    /// Product basis state `|l_1, …, l_n⟩`.
    pub fn basis(shape: SystemShape, labels: &[usize]) -> Result<Self> {
        let idx = MultiIndex::new(&shape, labels.iter().copied())?;
        Self::from_amplitudes(shape, [(idx, C64::new(1.0, 0.0))])
    }

    /// Dense vector of length `d^n` in big-endian order.
    pub fn from_dense(shape: SystemShape, dense: &[C64]) -> Result<Self> {
        if Some(dense.len()) != shape.hilbert_dim() {
            return Err(Error::DimensionMismatch {
                expected: shape.hilbert_dim().unwrap_or(usize::MAX),
                found: dense.len(),
            });
        }
        let map = dense
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(lin, &a)| (MultiIndex::from_linear(&shape, lin), a))
            .collect();
        Ok(Self::from_map(shape, map))
    }

    pub fn to_dense(&self) -> Result<Vec<C64>> {
        let dim = self
            .shape
            .hilbert_dim()
            .filter(|&dim| dim <= 1 << 26)
            .ok_or_else(|| {
                Error::Domain(format!("{} is too large for a dense vector", self.shape))
            })?;
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (idx, amp) in &self.amplitudes {
            out[idx.linear(self.shape.d())] = *amp;
        }
        Ok(out)
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, idx: &MultiIndex) -> C64 {
        self.amplitudes
            .get(idx)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr().sqrt() - 1.0).abs() <= tol
    }

    pub(crate) fn require_normalized(&self, tol: f64) -> Result<()> {
        if self.is_normalized(tol) {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm_sqr()))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return domain("cannot normalize the zero vector");
        }
        Ok(self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        let map = self
            .amplitudes
            .iter()
            .map(|(i, a)| (i.clone(), a * factor))
            .collect();
        Self::from_map(self.shape, map)
    }

    /// Global phase fixed so that the amplitude of the lexicographically
    /// smallest stored index is real and positive.
    pub fn canonical(&self) -> Self {
        match self.amplitudes.values().next() {
            Some(first) => self.scaled(first.conj() / first.norm()),
            None => self.clone(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        let (small, large, conj_small) = if self.amplitudes.len() <= other.amplitudes.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = C64::new(0.0, 0.0);
        for (idx, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(idx) {
                acc += if conj_small {
                    a.conj() * b
                } else {
                    b.conj() * a
                };
            }
        }
        acc
    }

    /// `Σ_j c_j |φ_j⟩`.
    pub fn linear_combination(shape: SystemShape, terms: &[(C64, &PureState)]) -> Result<Self> {
        let mut map: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        for (c, state) in terms {
            if state.shape != shape {
                return domain(format!(
                    "state of shape {} in a {shape} combination",
                    state.shape
                ));
            }
            for (idx, a) in &state.amplitudes {
                *map.entry(idx.clone()).or_insert(C64::new(0.0, 0.0)) += c * a;
            }
        }
        Ok(Self::from_map(shape, map))
    }

    /// `self - other`.
    pub fn difference(&self, other: &PureState) -> Result<Self> {
        Self::linear_combination(
            self.shape,
            &[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)],
        )
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        let mut worst: f64 = 0.0;
        for (idx, a) in &self.amplitudes {
            worst = worst.max((a - other.amplitude(idx)).norm());
        }
        for (idx, b) in &other.amplitudes {
            if !self.amplitudes.contains_key(idx) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        self.shape == other.shape && self.max_abs_diff(other) <= tol
    }

    /// Equality after canonical phase fixing of both sides.
    pub fn eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.canonical().approx_eq(&other.canonical(), tol)
    }

    /// The common support profile of every stored index, if there is one.
    pub fn common_profile(&self) -> Option<SupportProfile> {
        let mut profiles = self.amplitudes.keys().map(|i| i.profile(self.shape.d()));
        let first = profiles.next()?;
        profiles.all(|p| p == first).then_some(first)
    }

    /// Every stored index contains each label exactly `K = n/d` times.
    pub fn has_uniform_support(&self) -> bool {
        match SupportProfile::uniform(&self.shape) {
            Some(uniform) => self
                .amplitudes
                .keys()
                .all(|i| i.profile(self.shape.d()) == uniform),
            None => false,
        }
    }
}

fn check_dim(state: &PureState, op: &LocalOperator) -> Result<()> {
    if op.dim() != state.shape.d() {
        return Err(Error::DimensionMismatch {
            expected: state.shape.d(),
            found: op.dim(),
        });
    }
    Ok(())
}

/// `U ⊗ … ⊗ U |ψ⟩` with the same operator on every site.
///
/// Label permutations and diagonal phases are applied exactly on the sparse
/// amplitudes; other operators are contracted one site at a time. The result
/// keeps whatever global phase the operator produces.
pub fn apply_local(state: &PureState, op: &LocalOperator) -> Result<PureState> {
    check_dim(state, op)?;
    let m = op.matrix();
    match op.kind() {
        OperatorKind::BasisPermutation => {
            let pi = op
                .label_permutation()
                .ok_or_else(|| Error::Domain("malformed permutation operator".into()))?;
            let map = state
                .amplitudes
                .iter()
                .map(|(i, a)| (i.relabel(&pi), *a))
                .collect();
            Ok(PureState::from_map(state.shape, map))
        }
        OperatorKind::DiagonalPhase => {
            let map = state
                .amplitudes
                .iter()
                .map(|(i, a)| {
                    let phase: C64 = i.labels().map(|l| m[(l, l)]).product();
                    (i.clone(), a * phase)
                })
                .collect();
            Ok(PureState::from_map(state.shape, map))
        }
        OperatorKind::GeneralUnitary | OperatorKind::LieGenerator => {
            let d = state.shape.d();
            let mut current = state.amplitudes.clone();
            for site in 0..state.shape.n() {
                let mut next: BTreeMap<MultiIndex, C64> = BTreeMap::new();
                for (idx, amp) in &current {
                    let col = idx.get(site);
                    for row in 0..d {
                        let coeff = m[(row, col)];
                        if coeff.norm_sqr() == 0.0 {
                            continue;
                        }
                        let mut out = idx.clone();
                        out.raw_mut()[site] = row as u8;
                        *next.entry(out).or_insert(C64::new(0.0, 0.0)) += coeff * amp;
                    }
                }
                current = next;
            }
            Ok(PureState::from_map(state.shape, current))
        }
    }
}

/// Collective action `Σ_α g^(α) |ψ⟩` of a single-site operator.
pub fn apply_collective(state: &PureState, op: &LocalOperator) -> Result<PureState> {
    check_dim(state, op)?;
    let m = op.matrix();
    let d = state.shape.d();
    let mut out: BTreeMap<MultiIndex, C64> = BTreeMap::new();
    for (idx, amp) in &state.amplitudes {
        for site in 0..state.shape.n() {
            let col = idx.get(site);
            for row in 0..d {
                let coeff = m[(row, col)];
                if coeff.norm_sqr() == 0.0 {
                    continue;
                }
                let mut target = idx.clone();
                target.raw_mut()[site] = row as u8;
                *out.entry(target).or_insert(C64::new(0.0, 0.0)) += coeff * amp;
            }
        }
    }
    // exact cancellations leave explicit zeros behind
    out.retain(|_, a| a.norm_sqr() > 0.0);
    Ok(PureState {
        shape: state.shape,
        amplitudes: out,
    })
}

/// Site relabeling: the output amplitude at `ω(i)` equals the input amplitude
/// at `i`, where `ω(i) = (i_{ω(1)}, …, i_{ω(n)})`.
pub fn permute_particles(state: &PureState, omega: &Permutation) -> Result<PureState> {
    if omega.len() != state.shape.n() {
        return Err(Error::DimensionMismatch {
            expected: state.shape.n(),
            found: omega.len(),
        });
    }
    let map = state
        .amplitudes
        .iter()
        .map(|(i, a)| (i.permute_sites(omega), *a))
        .collect();
    Ok(PureState::from_map(state.shape, map))
}
