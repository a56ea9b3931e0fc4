use std::f64::consts::PI;

use calibrated_torsion::connection::{
    covariant_derivative, metric_compatibility_defect, recover_torsion, torsion_free_defect,
    torsion_tensor,
};
use calibrated_torsion::field::Expr;
use calibrated_torsion::frame::{frame_derivative, inner, structure_coefficients};
use calibrated_torsion::{
    affine_coefficients, levi_civita_coefficients, FrameVector, Point, ScalarField, TorsionParams,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 0.05;

fn random_points(n: usize, seed: u64) -> Vec<Point<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Point::new(
                rng.random_range(EPS..PI - EPS),
                rng.random_range(0.0..2.0 * PI),
                rng.random_range(0.0..1.0),
                rng.random_range(0.0..1.0),
            )
            .unwrap()
        })
        .collect()
}

fn param_grid() -> Vec<(f64, f64)> {
    let vals = [-2.0, -1.0, 0.0, 1.0, 2.0];
    vals.iter()
        .flat_map(|&a| vals.iter().map(move |&b| (a, b)))
        .collect()
}

fn interior_point() -> impl Strategy<Value = Point<f64>> {
    (EPS..PI - EPS, 0.0..2.0 * PI, 0.0..1.0f64, 0.0..1.0f64)
        .prop_map(|(t, p, x, y)| Point::new(t, p, x, y).unwrap())
}

#[test]
fn structure_coefficients_are_antisymmetric() {
    for p in random_points(200, 1) {
        let c = structure_coefficients(&p);
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(c.get(k, i, j), -c.get(k, j, i));
                }
            }
        }
        assert!((c.get(1, 0, 1) + 1.0 / p.theta.tan()).abs() < 1e-14);
    }
}

#[test]
fn analytic_frame_derivatives_match_finite_differences() {
    let two_pi = 2.0 * PI;
    let fields: Vec<ScalarField<f64>> = vec![
        ScalarField::Analytic(Expr::cot_theta()),
        ScalarField::Analytic(Expr::sin_theta())
            * ScalarField::Analytic(Expr::cos(Expr::var(calibrated_torsion::field::Coord::Phi))),
        ScalarField::Analytic(Expr::sin(
            Expr::constant(two_pi) * Expr::var(calibrated_torsion::field::Coord::X),
        )) * ScalarField::Analytic(Expr::cos_theta()),
        ScalarField::Analytic(Expr::cos(
            Expr::constant(two_pi) * Expr::var(calibrated_torsion::field::Coord::Y),
        )),
    ];
    let pts = random_points(120, 2);
    let mut worst = 0.0f64;
    for f in &fields {
        for p in &pts {
            for i in 0..4 {
                let exact = frame_derivative(f, i, p).unwrap();
                let fd = f.frame_derivative_fd(i, p, 1e-5).unwrap();
                worst = worst.max((exact - fd).abs());
            }
        }
    }
    assert!(worst < 1e-8, "worst {worst:e}");
}

#[test]
fn frame_derivative_examples() {
    let cot = ScalarField::Analytic(Expr::<f64>::cot_theta());
    let eq = Point::equator();
    assert!((frame_derivative(&cot, 0, &eq).unwrap() + 1.0).abs() < 1e-14);
    assert_eq!(frame_derivative(&cot, 2, &eq).unwrap(), 0.0);
    assert_eq!(
        frame_derivative(&ScalarField::constant(0.5), 2, &eq).unwrap(),
        0.0
    );
    let near_pole = Point::new(0.01, 0.0, 0.0, 0.0).unwrap();
    assert!(frame_derivative(&cot, 0, &near_pole).is_err());
}

#[test]
fn inner_is_symmetric_and_positive_definite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let mut draw = || {
            FrameVector::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            )
        };
        let (u, v) = (draw(), draw());
        assert_eq!(inner(&u, &v), inner(&v, &u));
        assert!(inner(&u, &u) > 0.0);
    }
    let u = FrameVector::new(2.0, 0.0, 0.0, 1.0);
    assert_eq!(inner(&u, &FrameVector::basis(3)), 1.0);
}

#[test]
fn torsion_recovered_on_parameter_grid() {
    let pts = random_points(50, 4);
    for (a, b) in param_grid() {
        let params = TorsionParams::new(a, b);
        let conn = affine_coefficients(params);
        for p in &pts {
            for i in 0..4 {
                for j in 0..4 {
                    let diff = recover_torsion(&conn, i, j, p) - torsion_tensor(&params, i, j);
                    assert!(diff.max_abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn torsion_examples() {
    let eq = Point::equator();
    let conn = affine_coefficients(TorsionParams::new(1.0, 0.0));
    assert_eq!(recover_torsion(&conn, 0, 2, &eq), FrameVector::basis(3));
    let conn = affine_coefficients(TorsionParams::new(1.0, 2.0));
    assert_eq!(recover_torsion(&conn, 0, 1, &eq).max_abs(), 0.0);
    let lc = levi_civita_coefficients::<f64>();
    assert!(recover_torsion(&lc, 0, 1, &eq).max_abs() < 1e-15);
}

#[test]
fn covariant_derivative_examples() {
    let eq = Point::equator();
    let conn = affine_coefficients(TorsionParams::new(1.0, 1.0));
    assert_eq!(
        covariant_derivative(&conn, 2, 3, &eq),
        FrameVector::new(-0.5, -0.5, 0.0, 0.0)
    );
    assert_eq!(covariant_derivative(&conn, 3, 3, &eq).max_abs(), 0.0);
    let lc = levi_civita_coefficients::<f64>();
    let p = Point::new(PI / 4.0, 0.0, 0.0, 0.0).unwrap();
    let d = covariant_derivative(&lc, 1, 1, &p);
    assert!((d[0] + 1.0).abs() < 1e-14 && d[1] == 0.0);
    let conn = affine_coefficients(TorsionParams::new(0.0, 3.0));
    assert_eq!(conn.gamma(1, 2, 3, &eq), -1.5);
}

#[test]
fn levi_civita_is_torsion_free_and_metric() {
    let lc = levi_civita_coefficients::<f64>();
    for p in random_points(100, 5) {
        assert!(torsion_free_defect(&lc, &p) < 1e-12);
        assert!(metric_compatibility_defect(&lc, &p) < 1e-12);
    }
}

#[test]
fn metric_defect_vanishes_only_without_torsion() {
    for p in random_points(20, 6) {
        for (a, b) in param_grid() {
            let defect =
                metric_compatibility_defect(&affine_coefficients(TorsionParams::new(a, b)), &p);
            if a == 0.0 && b == 0.0 {
                assert!(defect < 1e-12);
            } else {
                assert!(defect > 0.1, "({a},{b}) defect {defect}");
            }
        }
    }
}

proptest! {
    #[test]
    fn affine_minus_levi_civita_is_half_torsion(a in -3.0..3.0f64, b in -3.0..3.0f64, p in interior_point()) {
        let params = TorsionParams::new(a, b);
        let conn = affine_coefficients(params);
        let lc = levi_civita_coefficients::<f64>();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let d_ij = conn.gamma(k, i, j, &p) - lc.gamma(k, i, j, &p);
                    let d_ji = conn.gamma(k, j, i, &p) - lc.gamma(k, j, i, &p);
                    prop_assert!((d_ij + d_ji).abs() < 1e-12);
                    prop_assert!((d_ij - 0.5 * torsion_tensor(&params, i, j)[k]).abs() < 1e-12);
                }
            }
        }
    }
}
