//! Helpers shared by integration tests: seeded state generators and an
//! exact rank oracle for the singlet space that never restricts support.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use singlet_core::{enumerate_support, MultiIndex, PureState, SupportProfile, SystemShape, C64};

pub fn shape(n: usize, d: usize) -> SystemShape {
    SystemShape::new(n, d).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized state whose support is a random subset of the full space
/// (each index kept with probability `density`, at least one kept).
pub fn random_state(shape: SystemShape, density: f64, seed: u64) -> PureState {
    let mut rng = rng(seed);
    let dim = shape.hilbert_dim().unwrap();
    let mut entries: Vec<(MultiIndex, C64)> = Vec::new();
    for lin in 0..dim {
        if rng.random::<f64>() < density {
            entries.push((MultiIndex::from_linear(&shape, lin), gaussian(&mut rng)));
        }
    }
    if entries.is_empty() {
        let lin = rng.random_range(0..dim);
        entries.push((MultiIndex::from_linear(&shape, lin), C64::new(1.0, 0.0)));
    }
    PureState::from_amplitudes(shape, entries)
        .unwrap()
        .normalized()
        .unwrap()
}

/// Normalized state with Gaussian amplitudes on the whole uniform-profile
/// support; generally not a singlet.
pub fn random_uniform_support_state(shape: SystemShape, seed: u64) -> PureState {
    let mut rng = rng(seed);
    let profile = SupportProfile::uniform(&shape).unwrap();
    let entries: Vec<_> = enumerate_support(&shape, &profile)
        .unwrap()
        .into_iter()
        .map(|idx| (idx, gaussian(&mut rng)))
        .collect();
    PureState::from_amplitudes(shape, entries)
        .unwrap()
        .normalized()
        .unwrap()
}

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn rank_mod_p(mut rows: Vec<Vec<u64>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c], P - 2);
        for v in rows[rank].iter_mut() {
            *v = mul_mod(*v, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = (*x + P - mul_mod(f, p)) % P;
            }
        }
        rank += 1;
    }
    rank
}

fn to_mod(v: i64) -> u64 {
    v.rem_euclid(P as i64) as u64
}

/// Dimension of the common kernel of all collective raising/lowering
/// operators `Σ_a E_jk^(a)` (j ≠ k) and diagonal differences
/// `Σ_a (E_kk − E_{k+1,k+1})^(a)` on the full dⁿ-dimensional space.
///
/// Computed as dⁿ minus the rank of the integer Gram matrix `Σ Cᵀ C`,
/// reduced modulo the prime 2^61 − 1.
pub fn singlet_dimension_oracle(n: usize, d: usize) -> usize {
    let s = shape(n, d);
    let dim = s.hilbert_dim().unwrap();
    let labels: Vec<Vec<usize>> = (0..dim)
        .map(|x| MultiIndex::from_linear(&s, x).labels().collect())
        .collect();
    let pow: Vec<usize> = (0..n).map(|a| d.pow((n - 1 - a) as u32)).collect();
    let mut gram = vec![vec![0i64; dim]; dim];
    for j in 0..d {
        for k in 0..d {
            if j == k {
                continue;
            }
            // Sparse columns of E_jk: x ↦ Σ_{a: x_a = k} (x with x_a := j).
            let columns: Vec<Vec<usize>> = labels
                .iter()
                .enumerate()
                .map(|(x, lab)| {
                    (0..n)
                        .filter(|&a| lab[a] == k)
                        .map(|a| x - k * pow[a] + j * pow[a])
                        .collect()
                })
                .collect();
            let mut image = vec![Vec::<(usize, i64)>::new(); dim];
            for (x, col) in columns.iter().enumerate() {
                for &y in col {
                    image[y].push((x, 1));
                }
            }
            for row in &image {
                for &(x1, v1) in row {
                    for &(x2, v2) in row {
                        gram[x1][x2] += v1 * v2;
                    }
                }
            }
        }
    }
    for k in 0..d.saturating_sub(1) {
        for (x, lab) in labels.iter().enumerate() {
            let count = |l: usize| lab.iter().filter(|&&v| v == l).count() as i64;
            let h = count(k) - count(k + 1);
            gram[x][x] += h * h;
        }
    }
    let rows = gram
        .into_iter()
        .map(|row| row.into_iter().map(to_mod).collect())
        .collect();
    dim - rank_mod_p(rows, dim)
}

/// τ_A by the double sum over all index pairs that agree off `sites`.
pub fn dense_marginal(state: &PureState, sites: &[usize]) -> Vec<Vec<C64>> {
    let s = state.shape();
    let (n, d) = (s.n(), s.d());
    let psi = state.to_dense().unwrap();
    let labels: Vec<Vec<usize>> = (0..psi.len())
        .map(|x| MultiIndex::from_linear(&s, x).labels().collect())
        .collect();
    let local = |lab: &[usize]| sites.iter().fold(0, |acc, &a| acc * d + lab[a]);
    let size = d.pow(sites.len() as u32);
    let mut tau = vec![vec![C64::new(0.0, 0.0); size]; size];
    for (x, lx) in labels.iter().enumerate() {
        for (y, ly) in labels.iter().enumerate() {
            if (0..n).all(|a| sites.contains(&a) || lx[a] == ly[a]) {
                tau[local(lx)][local(ly)] += psi[x] * psi[y].conj();
            }
        }
    }
    tau
}

/// `Σ_{a<b} ‖τ_ab − I/d²‖²_F` from [`dense_marginal`].
pub fn dense_pair_deficit(state: &PureState) -> f64 {
    let (n, d) = (state.shape().n(), state.shape().d());
    let mixed = 1.0 / (d * d) as f64;
    let mut total = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let tau = dense_marginal(state, &[a, b]);
            for (r, row) in tau.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    let target = if r == c { mixed } else { 0.0 };
                    total += (v - target).norm_sqr();
                }
            }
        }
    }
    total
}
