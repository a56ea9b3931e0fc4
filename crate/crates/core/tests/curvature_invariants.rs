use std::f64::consts::{FRAC_1_SQRT_2, PI};

use calibrated_torsion::curvature::{
    gauge_dependence_diagnostic, orthogonal_complement, riemann, riemann_general, DerivativeMode,
};
use calibrated_torsion::grassmann::{grassmannian_min, random_plane};
use calibrated_torsion::{
    affine_coefficients, levi_civita_coefficients, FrameVector, Point, RiemannTensor,
    TorsionParams, TwoPlane,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 0.05;
const PLANES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

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

fn random_vector(rng: &mut ChaCha8Rng) -> FrameVector<f64> {
    FrameVector::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

fn coordinate_sectional(a: f64, b: f64, p: &Point<f64>) -> [f64; 6] {
    let r = RiemannTensor::evaluate(
        &affine_coefficients(TorsionParams::new(a, b)),
        p,
        DerivativeMode::Analytic,
    );
    PLANES.map(|(i, j)| {
        r.sectional(&FrameVector::basis(i), &FrameVector::basis(j))
            .unwrap()
    })
}

#[test]
fn antisymmetric_in_first_pair() {
    let conn = affine_coefficients(TorsionParams::new(1.3, -0.7));
    let pts = random_points(10, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 0..1000 {
        let p = &pts[n % pts.len()];
        let (u, v, w) = (
            random_vector(&mut rng),
            random_vector(&mut rng),
            random_vector(&mut rng),
        );
        let sum = riemann_general(&conn, &u, &v, &w, p) + riemann_general(&conn, &v, &u, &w, p);
        assert!(sum.max_abs() < 1e-12);
    }
}

#[test]
fn analytic_coefficient_derivatives_match_finite_differences() {
    for (n, p) in random_points(100, 2).iter().enumerate() {
        let (a, b) = ((n % 5) as f64 - 2.0, ((n / 5) % 5) as f64 - 2.0);
        let conn = affine_coefficients(TorsionParams::new(a, b));
        let exact = RiemannTensor::evaluate(&conn, p, DerivativeMode::Analytic);
        let fd = RiemannTensor::evaluate(&conn, p, DerivativeMode::FiniteDifference(1e-5));
        for l in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        let d = (exact.component(l, i, j, k) - fd.component(l, i, j, k)).abs();
                        assert!(d < 1e-6, "R^{l}_{i}{j}{k} at theta {}: {d:e}", p.theta);
                    }
                }
            }
        }
    }
}

#[test]
fn trilinear_expansion_example() {
    let conn = affine_coefficients(TorsionParams::new(1.0, 1.0));
    let p = Point::equator();
    let u = FrameVector::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0);
    let e3 = FrameVector::basis(2);
    let got = riemann_general(&conn, &u, &e3, &e3, &p);
    let want = (riemann(&conn, 0, 2, 2, &p) + riemann(&conn, 1, 2, 2, &p)) * FRAC_1_SQRT_2;
    assert!((got - want).max_abs() < 1e-14);
}

#[test]
fn coordinate_planes_do_not_depend_on_colatitude() {
    for (a, b) in [(1.0, 1.0), (-2.0, 0.5), (0.0, 2.0)] {
        let reference = coordinate_sectional(a, b, &Point::equator());
        for n in 0..50 {
            let theta = EPS + (PI - 2.0 * EPS) * n as f64 / 49.0;
            let k = coordinate_sectional(a, b, &Point::new(theta, 0.3, 0.1, 0.7).unwrap());
            for s in 0..6 {
                assert!((k[s] - reference[s]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn coordinate_plane_examples() {
    let eq = Point::equator();
    let k = coordinate_sectional(1.0, 0.0, &eq);
    for (got, want) in k.iter().zip([1.0, 0.25, 0.25, 0.0, 0.0, 0.25]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!((coordinate_sectional(3.0, 4.0, &eq)[5] - 6.25).abs() < 1e-12);
}

#[test]
fn levi_civita_limit() {
    let lc = levi_civita_coefficients::<f64>();
    for p in random_points(20, 3) {
        let r = RiemannTensor::evaluate(&lc, &p, DerivativeMode::Analytic);
        for (slot, &(i, j)) in PLANES.iter().enumerate() {
            let k = r
                .sectional(&FrameVector::basis(i), &FrameVector::basis(j))
                .unwrap();
            let want = if slot == 0 { 1.0 } else { 0.0 };
            assert!((k - want).abs() < 1e-12);
        }
        let zero = coordinate_sectional(0.0, 0.0, &p);
        assert!((zero[0] - 1.0).abs() < 1e-12 && zero[1..].iter().all(|k| k.abs() < 1e-12));
    }
}

#[test]
fn complement_of_complement_is_the_same_plane() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let plane: TwoPlane<f64> = random_plane(&mut rng);
        let back = orthogonal_complement(&orthogonal_complement(&plane));
        assert!(plane.projector_distance(&back) < 1e-12);
    }
}

#[test]
fn torsion_induced_values_scale_quadratically() {
    let p = Point::new(1.1, 0.4, 0.2, 0.9).unwrap();
    for (a, b) in [(1.0, 1.0), (-0.5, 2.0), (2.0, 0.0)] {
        let base = coordinate_sectional(a, b, &p);
        for t in [0.5, 2.0, -3.0] {
            let scaled = coordinate_sectional(t * a, t * b, &p);
            for s in 1..6 {
                assert!((scaled[s] - t * t * base[s]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn sampled_minimum_never_exceeds_coordinate_minimum() {
    let p = Point::equator();
    for (a, b) in [(1.0, 1.0), (2.0, -1.0), (0.0, 0.5)] {
        let m = grassmannian_min(
            &affine_coefficients(TorsionParams::new(a, b)),
            &p,
            20_000,
            7,
        )
        .unwrap();
        assert!(m.value <= (a * a + b * b) / 8.0 + 1e-9);
        assert!(m.value <= m.coordinate_min);
    }
}

#[test]
fn levi_civita_sectional_is_gauge_invariant() {
    let lc = levi_civita_coefficients::<f64>();
    let p = Point::new(1.2, 0.0, 0.0, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let plane: TwoPlane<f64> = random_plane(&mut rng);
        let g = gauge_dependence_diagnostic(&lc, &plane, &p, 32, 11).unwrap();
        assert!(g.spread < 1e-12, "spread {}", g.spread);
    }
}

#[test]
fn torsion_makes_sectional_basis_dependent() {
    let p = Point::equator();
    let conn = affine_coefficients(TorsionParams::new(1.0f64, 1.0));
    let g = gauge_dependence_diagnostic(&conn, &TwoPlane::coordinate(0, 2), &p, 64, 11).unwrap();
    assert!(g.spread > 1e-3);
    // The stored pair (e1, e3) still gives the table value.
    let r = RiemannTensor::evaluate(&conn, &p, DerivativeMode::Analytic);
    assert!(
        (r.sectional(&FrameVector::basis(0), &FrameVector::basis(2))
            .unwrap()
            - 0.25)
            .abs()
            < 1e-12
    );
    assert!(gauge_dependence_diagnostic(&conn, &TwoPlane::coordinate(0, 2), &p, 1, 11).is_err());
}

proptest! {
    #[test]
    fn levi_civita_biorthogonal_is_complement_symmetric(seed in 0u64..10_000, theta in 0.2..(PI - 0.2)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let plane: TwoPlane<f64> = random_plane(&mut rng);
        let p = Point::new(theta, 0.0, 0.0, 0.0).unwrap();
        let r = RiemannTensor::evaluate(&levi_civita_coefficients(), &p, DerivativeMode::Analytic);
        let k = r.biorthogonal(&plane).unwrap();
        let k_perp = r.biorthogonal(&orthogonal_complement(&plane)).unwrap();
        prop_assert!((k - k_perp).abs() < 1e-10);
    }
}
