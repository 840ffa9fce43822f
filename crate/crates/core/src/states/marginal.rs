use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::PureState;
use crate::error::{domain, Result};

/// Reduced density matrix `τ_A` on a set of sites `A`.
///
/// Rows and columns are indexed by the truncated multi-index `i_A`, read
/// big-endian with the sites of `A` in ascending order.
#[derive(Clone, Debug)]
pub struct MarginalMatrix {
    subsystem: Vec<usize>,
    d: usize,
    matrix: DMatrix<C64>,
}

impl MarginalMatrix {
    pub fn subsystem(&self) -> &[usize] {
        &self.subsystem
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `τ_A(i_A; j_A)` for label lists in ascending-site order.
    pub fn entry(&self, i_a: &[usize], j_a: &[usize]) -> C64 {
        let lin = |labels: &[usize]| labels.iter().fold(0, |acc, &l| acc * self.d + l);
        self.matrix[(lin(i_a), lin(j_a))]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let m = &self.matrix;
        (0..m.nrows()).all(|r| (0..=r).all(|c| (m[(r, c)] - m[(c, r)].conj()).norm() <= tol))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// `‖τ_A - I/d^|A|‖²_F`.
    pub fn deviation_from_maximally_mixed(&self) -> f64 {
        let dim = self.dim();
        let target = 1.0 / dim as f64;
        let mut acc = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let z = self.matrix[(r, c)];
                acc += if r == c {
                    (z - target).norm_sqr()
                } else {
                    z.norm_sqr()
                };
            }
        }
        acc
    }

    /// Partial trace over one more site of `A`.
    pub fn trace_out(&self, site: usize) -> Result<MarginalMatrix> {
        let Some(pos) = self.subsystem.iter().position(|&s| s == site) else {
            return domain(format!(
                "site {site} is not in subsystem {:?}",
                self.subsystem
            ));
        };
        if self.subsystem.len() == 1 {
            return domain("cannot trace out the last site of a marginal");
        }
        let k = self.subsystem.len();
        let d = self.d;
        let outer = d.pow(pos as u32);
        let inner = d.pow((k - pos - 1) as u32);
        let dim = outer * inner;
        let mut out = DMatrix::zeros(dim, dim);
        for (r_hi, r_lo, c_hi, c_lo) in itertools::iproduct!(0..outer, 0..inner, 0..outer, 0..inner)
        {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..d {
                let r = (r_hi * d + l) * inner + r_lo;
                let c = (c_hi * d + l) * inner + c_lo;
                acc += self.matrix[(r, c)];
            }
            out[(r_hi * inner + r_lo, c_hi * inner + c_lo)] = acc;
        }
        let mut subsystem = self.subsystem.clone();
        subsystem.remove(pos);
        Ok(MarginalMatrix {
            subsystem,
            d,
            matrix: out,
        })
    }
}

/// `τ_A(i_A; j_A) = Σ_{i_B} t_{i_A,i_B} t*_{j_A,i_B}` with `B` the complement
/// of `A`. The trace equals the squared norm of the input.
pub fn partial_trace(state: &PureState, subsystem: &[usize]) -> Result<MarginalMatrix> {
    let shape = state.shape();
    let (n, d) = (shape.n(), shape.d());
    if subsystem.is_empty() {
        return domain("subsystem must be nonempty");
    }
    let mut sites = subsystem.to_vec();
    sites.sort_unstable();
    if sites.windows(2).any(|w| w[0] == w[1]) {
        return domain(format!("subsystem {subsystem:?} repeats a site"));
    }
    if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
        return domain(format!("site {bad} out of range for n={n}"));
    }
    let complement: Vec<usize> = (0..n).filter(|s| sites.binary_search(s).is_err()).collect();
    let dim = d
        .checked_pow(sites.len() as u32)
        .filter(|&m| m <= 1 << 13)
        .ok_or_else(|| {
            crate::Error::Domain(format!("marginal on {} sites is too large", sites.len()))
        })?;

    let mut groups: BTreeMap<Vec<u8>, Vec<(usize, C64)>> = BTreeMap::new();
    for (idx, amp) in state.iter() {
        let row = sites.iter().fold(0, |acc, &s| acc * d + idx.get(s));
        groups
            .entry(idx.restrict(&complement))
            .or_default()
            .push((row, *amp));
    }

    let mut matrix = DMatrix::zeros(dim, dim);
    for members in groups.values() {
        for &(r, a) in members {
            for &(c, b) in members {
                matrix[(r, c)] += a * b.conj();
            }
        }
    }
    Ok(MarginalMatrix {
        subsystem: sites,
        d,
        matrix,
    })
}
