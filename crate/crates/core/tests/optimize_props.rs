mod common;

use common::{rng, shape};
use singlet_core::optimize::{tangent_gradient_norm, DeficitObjective, ROUNDING_SLACK};
use singlet_core::{
    build_singlet_basis, certify, gradient_check, minimize_deficit, pair_deficit, OptimizeOptions,
    SingletBasis, C64, DEFAULT_TOL,
};

fn basis(n: usize, d: usize) -> SingletBasis {
    build_singlet_basis(shape(n, d), DEFAULT_TOL)
}

fn re_inner(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum()
}

#[test]
fn gradient_check_at_random_points() {
    let mut r = rng(21);
    for (n, d) in [(4, 2), (6, 2), (6, 3), (8, 2)] {
        let b = basis(n, d);
        for i in 0..20 {
            let c = b.random_coefficients(&mut r);
            let err = gradient_check(&b, &c, i).unwrap();
            assert!(err <= 1e-5, "({n},{d}) point {i}: {err}");
        }
    }
}

#[test]
fn analytic_gradient_matches_differences_of_marginal_deficit() {
    // differentiates D through the states and marginals, not the objective
    let b = basis(6, 2);
    let objective = DeficitObjective::new(&b).unwrap();
    let mut r = rng(22);
    let h = 1e-6;
    for _ in 0..5 {
        let c = b.random_coefficients(&mut r);
        let (_, g) = objective.value_and_gradient(&c);
        let v = b.random_coefficients(&mut r);
        let overlap = C64::new(re_inner(&c, &v), 0.0);
        let v: Vec<C64> = v.iter().zip(&c).map(|(v, c)| v - c * overlap).collect();
        let at = |t: f64| {
            let p: Vec<C64> = c.iter().zip(&v).map(|(c, v)| c + v * t).collect();
            let norm = p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let p: Vec<C64> = p.iter().map(|z| z / norm).collect();
            pair_deficit(&b.combine(&p).unwrap()).unwrap()
        };
        let fd = (at(h) - at(-h)) / (2.0 * h);
        let analytic = re_inner(&g, &v);
        assert!(
            (fd - analytic).abs() <= 1e-6 * analytic.abs().max(1.0),
            "{fd} vs {analytic}"
        );
    }
}

#[test]
fn minima_respect_certificate_floors() {
    for (n, d) in [(2, 2), (4, 2), (6, 2), (3, 3), (6, 3)] {
        let b = basis(n, d);
        let floor = certify(&shape(n, d)).floor_value().unwrap();
        let result = minimize_deficit(&b, &OptimizeOptions::default()).unwrap();
        assert!(result.best_deficit >= floor - 1e-9, "({n},{d})");
        assert!(result.best_deficit > 1e-3);
        for summary in &result.per_restart {
            assert!(
                summary.deficit >= floor - 1e-9,
                "({n},{d}) restart {}",
                summary.restart
            );
        }
        // steps accepted on the derivative test may move f within rounding
        let slack = |f: f64| ROUNDING_SLACK * f.abs().max(1.0);
        assert!(
            result
                .trajectory
                .windows(2)
                .all(|w| w[1] <= w[0] + slack(w[0])),
            "({n},{d})"
        );
        let state = result.state.as_ref().unwrap();
        assert!((pair_deficit(state).unwrap() - result.best_deficit).abs() <= 1e-12);
    }
}

#[test]
fn stationary_points_have_small_tangent_gradient() {
    for (n, d) in [(4, 2), (6, 2), (6, 3)] {
        let b = basis(n, d);
        let result = minimize_deficit(&b, &OptimizeOptions::default()).unwrap();
        assert!(result.converged, "({n},{d})");
        let g = tangent_gradient_norm(&b, &result.best_coefficients).unwrap();
        assert!(g <= 1e-7, "({n},{d}) {g}");
    }
}

#[test]
fn restarts_agree_on_the_minimum() {
    // frozen from runs of this optimizer; every restart reaches the same value
    for ((n, d), minimum) in [((4, 2), 0.5), ((6, 2), 0.45), ((6, 3), 8.0 / 15.0)] {
        let result = minimize_deficit(&basis(n, d), &OptimizeOptions::default()).unwrap();
        assert!(
            (result.best_deficit - minimum).abs() <= 1e-8,
            "({n},{d}) {}",
            result.best_deficit
        );
        for summary in &result.per_restart {
            assert!(
                (summary.deficit - minimum).abs() <= 1e-6,
                "({n},{d}) {}",
                summary.deficit
            );
        }
    }
}

#[test]
fn results_are_bit_reproducible() {
    let b = basis(6, 3);
    let opts = OptimizeOptions {
        seed: 5,
        ..OptimizeOptions::default()
    };
    let first = minimize_deficit(&b, &opts).unwrap();
    let second = minimize_deficit(&b, &opts).unwrap();
    assert_eq!(first.best_deficit.to_bits(), second.best_deficit.to_bits());
    assert_eq!(first.best_coefficients, second.best_coefficients);
    assert_eq!(first.trajectory, second.trajectory);
}

#[test]
fn single_member_basis_needs_no_search() {
    let b = basis(3, 3);
    let result = minimize_deficit(&b, &OptimizeOptions::default()).unwrap();
    assert_eq!(result.iterations, 0);
    assert!((result.best_deficit - 2.0 / 3.0).abs() <= 1e-12);
    assert_eq!(gradient_check(&b, &[C64::new(1.0, 0.0)], 0).unwrap(), 0.0);
}
