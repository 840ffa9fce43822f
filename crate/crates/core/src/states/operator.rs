use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    GeneralUnitary,
    /// `V(π)|k⟩ = |π(k)⟩`.
    BasisPermutation,
    /// Diagonal with unit-modulus entries.
    DiagonalPhase,
    /// Element of the local operator algebra; not necessarily unitary.
    LieGenerator,
}

/// A single-site `d × d` operator applied identically on every site.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    matrix: DMatrix<C64>,
    kind: OperatorKind,
}

impl LocalOperator {
    pub fn unitary(matrix: DMatrix<C64>, tol: f64) -> Result<Self> {
        check_square(&matrix)?;
        if !is_unitary(&matrix, tol) {
            return domain("matrix is not unitary");
        }
        Ok(Self {
            matrix,
            kind: OperatorKind::GeneralUnitary,
        })
    }

    /// The canonical representation `V(π)` of a label permutation.
    pub fn permutation(pi: &Permutation) -> Self {
        let d = pi.len();
        let mut matrix = DMatrix::zeros(d, d);
        for k in 0..d {
            matrix[(pi.apply(k), k)] = C64::new(1.0, 0.0);
        }
        Self {
            matrix,
            kind: OperatorKind::BasisPermutation,
        }
    }

    /// `diag(e^{iφ_0}, …, e^{iφ_{d-1}})`.
    pub fn diagonal_phase(angles: &[f64]) -> Self {
        let entries: Vec<C64> = angles.iter().map(|&a| C64::from_polar(1.0, a)).collect();
        Self {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(entries)),
            kind: OperatorKind::DiagonalPhase,
        }
    }

    /// `U_k = 1 + (e^{iφ} - 1)|k⟩⟨k|`.
    pub fn single_phase(d: usize, k: usize, phi: f64) -> Result<Self> {
        if k >= d {
            return domain(format!("label {k} out of range for d={d}"));
        }
        let mut angles = vec![0.0; d];
        angles[k] = phi;
        Ok(Self::diagonal_phase(&angles))
    }

    pub fn generator(matrix: DMatrix<C64>) -> Result<Self> {
        check_square(&matrix)?;
        Ok(Self {
            matrix,
            kind: OperatorKind::LieGenerator,
        })
    }

    pub fn haar<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Self {
            matrix: haar_unitary(d, rng),
            kind: OperatorKind::GeneralUnitary,
        }
    }

    /// The `d² - 1` standard traceless Hermitian generators: for each pair
    /// `j < k` the real and imaginary off-diagonal matrices, followed by the
    /// diagonal differences `|k⟩⟨k| - |k+1⟩⟨k+1|`.
    pub fn traceless_generators(d: usize) -> Vec<Self> {
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let mut out = Vec::with_capacity(d * d - 1);
        for j in 0..d {
            for k in j + 1..d {
                let mut x = DMatrix::zeros(d, d);
                x[(j, k)] = one;
                x[(k, j)] = one;
                let mut y = DMatrix::zeros(d, d);
                y[(j, k)] = -i;
                y[(k, j)] = i;
                out.push(Self {
                    matrix: x,
                    kind: OperatorKind::LieGenerator,
                });
                out.push(Self {
                    matrix: y,
                    kind: OperatorKind::LieGenerator,
                });
            }
        }
        for k in 0..d.saturating_sub(1) {
            let mut h = DMatrix::zeros(d, d);
            h[(k, k)] = one;
            h[(k + 1, k + 1)] = -one;
            out.push(Self {
                matrix: h,
                kind: OperatorKind::LieGenerator,
            });
        }
        out
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_unitary_kind(&self) -> bool {
        self.kind != OperatorKind::LieGenerator
    }

    pub fn determinant(&self) -> C64 {
        self.matrix.clone().determinant()
    }

    /// The label permutation encoded by a basis-permutation operator.
    pub(crate) fn label_permutation(&self) -> Option<Permutation> {
        if self.kind != OperatorKind::BasisPermutation {
            return None;
        }
        let d = self.dim();
        let images = (0..d)
            .map(|k| (0..d).find(|&r| self.matrix[(r, k)].re == 1.0))
            .collect::<Option<Vec<_>>>()?;
        Permutation::new(images).ok()
    }
}

fn check_square(m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return domain(format!(
            "operator must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        ));
    }
    Ok(())
}

fn is_unitary(m: &DMatrix<C64>, tol: f64) -> bool {
    let prod = m.adjoint() * m;
    let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
    (prod - id).iter().all(|z| z.norm() <= tol)
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let z = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (c, mut col) in q.column_iter_mut().enumerate() {
        let diag = r[(c, c)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        col *= phase;
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..6 {
            let u = haar_unitary(d, &mut rng);
            assert!(is_unitary(&u, 1e-12));
        }
    }

    #[test]
    fn haar_is_seeded() {
        let a = haar_unitary(3, &mut ChaCha8Rng::seed_from_u64(1));
        let b = haar_unitary(3, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E[U_00] = 0 and E[|U_00|^2] = 1/d for Haar measure
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = 3;
        let trials = 4000;
        let mut mean = C64::new(0.0, 0.0);
        let mut second = 0.0;
        for _ in 0..trials {
            let u = haar_unitary(d, &mut rng);
            mean += u[(0, 0)];
            second += u[(0, 0)].norm_sqr();
        }
        assert!((mean / trials as f64).norm() < 0.05);
        assert!((second / trials as f64 - 1.0 / d as f64).abs() < 0.02);
    }

    #[test]
    fn generators_are_traceless_and_hermitian() {
        for d in 1..5 {
            let gens = LocalOperator::traceless_generators(d);
            assert_eq!(gens.len(), d * d - 1);
            for g in gens {
                assert!(g.matrix().trace().norm() < 1e-15);
                assert_eq!(g.matrix().adjoint(), *g.matrix());
            }
        }
    }

    #[test]
    fn permutation_operator_roundtrip() {
        let pi = Permutation::new(vec![2, 0, 1]).unwrap();
        let op = LocalOperator::permutation(&pi);
        assert_eq!(op.label_permutation(), Some(pi.clone()));
        assert!((op.determinant().re - pi.sign() as f64).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(LocalOperator::unitary(m, 1e-9).is_err());
    }
}
