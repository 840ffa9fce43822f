//! Reference states with known singlet and uniformity properties.

use num_complex::Complex64 as C64;

use crate::states::{MultiIndex, PureState, SystemShape};

fn shape(n: usize, d: usize) -> SystemShape {
    SystemShape::new(n, d).expect("fixture shapes are valid")
}

/// `(|01⟩ - |10⟩)/√2`.
pub fn psi_minus() -> PureState {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    PureState::from_real_terms(shape(2, 2), &[(&[0, 1], a), (&[1, 0], -a)]).unwrap()
}

/// Totally antisymmetric state of three qutrits.
pub fn psi3() -> PureState {
    let a = 1.0 / 6f64.sqrt();
    PureState::from_real_terms(
        shape(3, 3),
        &[
            (&[0, 1, 2], a),
            (&[2, 0, 1], a),
            (&[1, 2, 0], a),
            (&[2, 1, 0], -a),
            (&[1, 0, 2], -a),
            (&[0, 2, 1], -a),
        ],
    )
    .unwrap()
}

/// `[|0011⟩ + |1100⟩ - ½(|01⟩ + |10⟩)⊗(|01⟩ + |10⟩)]/√3`.
pub fn psi4() -> PureState {
    let a = 1.0 / 3f64.sqrt();
    let h = -0.5 * a;
    PureState::from_real_terms(
        shape(4, 2),
        &[
            (&[0, 0, 1, 1], a),
            (&[1, 1, 0, 0], a),
            (&[0, 1, 0, 1], h),
            (&[0, 1, 1, 0], h),
            (&[1, 0, 0, 1], h),
            (&[1, 0, 1, 0], h),
        ],
    )
    .unwrap()
}

/// Qubit graph state `2^{-n/2} Σ_x (-1)^{Σ_{(a,b)∈E} x_a x_b} |x⟩`.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> PureState {
    let s = shape(n, 2);
    let amp = 2f64.powf(-(n as f64) / 2.0);
    let entries = (0..1usize << n).map(|lin| {
        let idx = MultiIndex::from_linear(&s, lin);
        let parity: usize = edges.iter().map(|&(a, b)| idx.get(a) * idx.get(b)).sum();
        let sign = if parity.is_multiple_of(2) { 1.0 } else { -1.0 };
        (idx, C64::new(sign * amp, 0.0))
    });
    PureState::from_amplitudes(s, entries).unwrap()
}

/// Six-qubit wheel graph state (a 5-cycle plus a hub joined to every rim
/// vertex). It is 3-uniform, hence 2-uniform.
pub fn wheel6() -> PureState {
    let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    edges.extend((0..5).map(|i| (i, 5)));
    graph_state(6, &edges)
}
