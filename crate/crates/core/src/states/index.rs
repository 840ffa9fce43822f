use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::perm::Permutation;

/// Particle count `n` and local dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemShape {
    n: usize,
    d: usize,
}

impl SystemShape {
    /// Labels are stored as bytes, so `d` is capped at 256.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return domain(format!("shape needs n >= 1 and d >= 1, got n={n}, d={d}"));
        }
        if d > 256 {
            return domain(format!("local dimension {d} exceeds 256"));
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn d_divides_n(&self) -> bool {
        self.n.is_multiple_of(self.d)
    }

    /// `K = n / d`, when `d` divides `n`.
    pub fn k_ratio(&self) -> Option<usize> {
        self.d_divides_n().then_some(self.n / self.d)
    }

    /// `d^n`, or `None` on overflow.
    pub fn hilbert_dim(&self) -> Option<usize> {
        u32::try_from(self.n)
            .ok()
            .and_then(|n| self.d.checked_pow(n))
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, d={})", self.n, self.d)
    }
}

/// Local basis labels of one computational basis vector.
///
/// The derived ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn new(shape: &SystemShape, labels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut entries = Vec::with_capacity(shape.n);
        for label in labels {
            if label >= shape.d {
                return domain(format!("label {label} out of range for d={}", shape.d));
            }
            entries.push(label as u8);
        }
        if entries.len() != shape.n {
            return domain(format!(
                "multi-index has {} entries, expected {}",
                entries.len(),
                shape.n
            ));
        }
        Ok(Self(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, site: usize) -> usize {
        self.0[site] as usize
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }

    /// Big-endian position in the dense `d^n` vector.
    pub fn linear(&self, d: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * d + l as usize)
    }

    pub fn from_linear(shape: &SystemShape, mut linear: usize) -> Self {
        let mut entries = vec![0u8; shape.n];
        for slot in entries.iter_mut().rev() {
            *slot = (linear % shape.d) as u8;
            linear /= shape.d;
        }
        Self(entries)
    }

    /// Entrywise action of a label permutation: `π(i) = (π(i_1), …, π(i_n))`.
    pub fn relabel(&self, pi: &Permutation) -> Self {
        Self(self.0.iter().map(|&l| pi.apply(l as usize) as u8).collect())
    }

    /// Site action: `ω(i) = (i_{ω(1)}, …, i_{ω(n)})`.
    pub fn permute_sites(&self, omega: &Permutation) -> Self {
        Self((0..self.0.len()).map(|a| self.0[omega.apply(a)]).collect())
    }

    /// Labels at the given sites, in the given order.
    pub fn restrict(&self, sites: &[usize]) -> Vec<u8> {
        sites.iter().map(|&s| self.0[s]).collect()
    }

    pub fn profile(&self, d: usize) -> SupportProfile {
        let mut counts = vec![0; d];
        for &l in &self.0 {
            counts[l as usize] += 1;
        }
        SupportProfile { counts }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (pos, l) in self.0.iter().enumerate() {
            if pos > 0 && self.0.iter().any(|&x| x > 9) {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "⟩")
    }
}

/// Occurrence counts `N_k` of each label `k` in a multi-index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportProfile {
    pub counts: Vec<usize>,
}

impl SupportProfile {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    /// The profile with every `N_k = K`, if `d` divides `n`.
    pub fn uniform(shape: &SystemShape) -> Option<Self> {
        shape.k_ratio().map(|k| Self {
            counts: vec![k; shape.d],
        })
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn is_uniform(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    /// `n! / Π_k N_k!`, computed as a product of binomials.
    pub fn multinomial(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut placed = 0u128;
        for &c in &self.counts {
            for j in 1..=c as u128 {
                placed += 1;
                acc = acc * placed / j;
            }
        }
        acc
    }
}

/// All multi-indices realizing `profile`, in lexicographic order.
pub fn enumerate_support(shape: &SystemShape, profile: &SupportProfile) -> Result<Vec<MultiIndex>> {
    if profile.counts.len() != shape.d {
        return domain(format!(
            "profile has {} counts, expected d={}",
            profile.counts.len(),
            shape.d
        ));
    }
    if profile.total() != shape.n {
        return domain(format!(
            "profile sums to {}, expected n={}",
            profile.total(),
            shape.n
        ));
    }
    let mut out = Vec::new();
    let mut remaining = profile.counts.clone();
    let mut current = Vec::with_capacity(shape.n);
    fill(&mut remaining, &mut current, shape.n, &mut out);
    Ok(out)
}

fn fill(remaining: &mut [usize], current: &mut Vec<u8>, n: usize, out: &mut Vec<MultiIndex>) {
    if current.len() == n {
        out.push(MultiIndex(current.clone()));
        return;
    }
    for label in 0..remaining.len() {
        if remaining[label] == 0 {
            continue;
        }
        remaining[label] -= 1;
        current.push(label as u8);
        fill(remaining, current, n, out);
        current.pop();
        remaining[label] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(n: usize, d: usize) -> SystemShape {
        SystemShape::new(n, d).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(SystemShape::new(0, 2).is_err());
        assert!(SystemShape::new(2, 0).is_err());
        assert_eq!(shape(6, 3).k_ratio(), Some(2));
        assert_eq!(shape(5, 2).k_ratio(), None);
        assert_eq!(shape(1, 1).k_ratio(), Some(1));
    }

    #[test]
    fn two_qubit_support() {
        let s = shape(2, 2);
        let idx = enumerate_support(&s, &SupportProfile::new(vec![1, 1])).unwrap();
        let labels: Vec<Vec<usize>> = idx.iter().map(|i| i.labels().collect()).collect();
        assert_eq!(labels, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn four_qubit_support_contains_listed_terms() {
        let s = shape(4, 2);
        let idx = enumerate_support(&s, &SupportProfile::new(vec![2, 2])).unwrap();
        assert_eq!(idx.len(), 6);
        assert!(idx.contains(&MultiIndex::new(&s, [0, 0, 1, 1]).unwrap()));
        assert!(idx.contains(&MultiIndex::new(&s, [1, 1, 0, 0]).unwrap()));
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn six_qubit_support_matches_bit_count_filter() {
        let s = shape(6, 2);
        let brute = (0u32..64).filter(|x| x.count_ones() == 3).count();
        assert_eq!(brute, 20);
        let idx = enumerate_support(&s, &SupportProfile::new(vec![3, 3])).unwrap();
        assert_eq!(idx.len(), brute);
    }

    #[test]
    fn invalid_profile() {
        let s = shape(4, 2);
        assert!(enumerate_support(&s, &SupportProfile::new(vec![2, 1])).is_err());
        assert!(enumerate_support(&s, &SupportProfile::new(vec![2, 1, 1])).is_err());
    }

    #[test]
    fn linear_roundtrip_and_order() {
        let s = shape(3, 3);
        for lin in 0..27 {
            let idx = MultiIndex::from_linear(&s, lin);
            assert_eq!(idx.linear(3), lin);
        }
        assert!(MultiIndex::from_linear(&s, 4) < MultiIndex::from_linear(&s, 5));
    }

    #[test]
    fn label_out_of_range() {
        let s = shape(2, 2);
        assert!(MultiIndex::new(&s, [0, 2]).is_err());
        assert!(MultiIndex::new(&s, [0]).is_err());
    }
}
