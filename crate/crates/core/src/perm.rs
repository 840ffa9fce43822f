//! Permutations of `{0, …, m-1}` in one-line notation.

use std::fmt;

use itertools::Itertools;

use crate::error::{domain, Result};

/// A permutation `p` stored as its image list: `p(k) = images[k]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &p in &images {
            if p >= images.len() || seen[p] {
                return domain(format!("{images:?} is not a permutation"));
            }
            seen[p] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(m: usize, a: usize, b: usize) -> Result<Self> {
        if a >= m || b >= m {
            return domain(format!(
                "transposition ({a} {b}) out of range for {m} points"
            ));
        }
        let mut images: Vec<usize> = (0..m).collect();
        images.swap(a, b);
        Ok(Self(images))
    }

    /// Every permutation of `m` points, in lexicographic order of image lists.
    pub fn all(m: usize) -> impl Iterator<Item = Permutation> {
        (0..m).permutations(m).map(Permutation)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &p) in self.0.iter().enumerate() {
            inv[p] = k;
        }
        Self(inv)
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&k| self.0[k]).collect())
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i32 {
        let mut visited = vec![false; self.0.len()];
        let mut transpositions = 0usize;
        for start in 0..self.0.len() {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !visited[k] {
                visited[k] = true;
                k = self.0[k];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.0)
    }
}
