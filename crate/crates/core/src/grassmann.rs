//! Sampled minimization of biorthogonal curvature over Gr(2,4).
//!
//! Candidates are the six coordinate planes, the `f(θ)` reduction family on a
//! 181-point grid, and Gaussian-sampled planes (rotation-invariant measure).
//! Sampling runs in fixed-size batches, each with its own ChaCha stream, and
//! batches are merged in index order so the argmin does not depend on the
//! number of worker threads. The best candidate is then polished by
//! coordinate descent over the four angles that tilt the plane towards its
//! complement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::connection::ConnectionCoefficients;
use crate::curvature::{
    orthogonal_complement, reduction_family_plane, reduction_grid, DerivativeMode, RiemannTensor,
    TwoPlane, COORDINATE_PLANES, REDUCTION_GRID_POINTS,
};
use crate::error::Result;
use crate::frame::{FrameVector, Point};
use crate::scalar::Scalar;

/// Planes drawn per batch (one RNG stream per batch).
pub const BATCH_SIZE: usize = 4096;
pub const REFINE_ITERATIONS: usize = 200;
pub const REFINE_MIN_STEP: f64 = 1e-10;
const REFINE_INITIAL_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CandidateOrigin {
    Coordinate { i: usize, j: usize },
    ReductionFamily { index: usize },
    Sampled { index: usize },
    Refined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrassmannMinimum<T> {
    /// Overall minimum (after refinement).
    pub value: T,
    pub argmin: TwoPlane<T>,
    pub origin: CandidateOrigin,
    pub coordinate_min: T,
    pub family_min: T,
    /// Minimum over the random samples alone.
    pub sampled_min: T,
    pub samples: usize,
    pub refine_iterations: usize,
}

/// Draws a uniformly distributed plane from a pair of Gaussian 4-vectors.
pub fn random_plane<T: Scalar, R: rand::Rng>(rng: &mut R) -> TwoPlane<T> {
    loop {
        let mut draw = || -> FrameVector<T> {
            FrameVector(std::array::from_fn(|_| {
                let g: f64 = StandardNormal.sample(rng);
                T::lit(g)
            }))
        };
        let (u, v) = (draw(), draw());
        if let Ok(plane) = TwoPlane::from_span(&u, &v) {
            return plane;
        }
    }
}

/// Deterministic RNG for sampling batch `batch` under `seed`.
pub fn batch_rng(seed: u64, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    rng
}

/// Random planes `0..n` in sample order (same sequence the minimizer sees).
pub fn sample_planes<T: Scalar>(n: usize, seed: u64) -> Vec<TwoPlane<T>> {
    let batches = n.div_ceil(BATCH_SIZE);
    (0..batches)
        .flat_map(|b| {
            let mut rng = batch_rng(seed, b);
            let count = BATCH_SIZE.min(n - b * BATCH_SIZE);
            (0..count).map(move |_| random_plane::<T, _>(&mut rng))
        })
        .collect()
}

fn consider<T: Scalar>(
    best: &mut Option<(T, TwoPlane<T>, CandidateOrigin)>,
    value: T,
    plane: TwoPlane<T>,
    origin: CandidateOrigin,
) {
    if best.as_ref().is_none_or(|(v, _, _)| value < *v) {
        *best = Some((value, plane, origin));
    }
}

fn tilt<T: Scalar>(plane: &TwoPlane<T>, move_index: usize, angle: T) -> TwoPlane<T> {
    let perp = orthogonal_complement(plane);
    let (s, c) = angle.sin_cos();
    let (mut u, mut v) = (plane.u, plane.v);
    match move_index {
        0 => u = u * c + perp.u * s,
        1 => u = u * c + perp.v * s,
        2 => v = v * c + perp.u * s,
        _ => v = v * c + perp.v * s,
    }
    // Re-orthonormalize to stop drift across many small moves.
    TwoPlane::from_span(&u, &v).unwrap_or(*plane)
}

/// Coordinate descent over the four tilt angles with step halving.
pub fn refine<T: Scalar>(
    tensor: &RiemannTensor<T>,
    start: &TwoPlane<T>,
) -> Result<(T, TwoPlane<T>, usize)> {
    let mut plane = *start;
    let mut value = tensor.biorthogonal(&plane)?;
    let mut step = T::lit(REFINE_INITIAL_STEP);
    let min_step = T::lit(REFINE_MIN_STEP);
    let mut iterations = 0;
    while iterations < REFINE_ITERATIONS && step >= min_step {
        iterations += 1;
        let mut improved = false;
        for move_index in 0..4 {
            for sign in [T::one(), -T::one()] {
                let candidate = tilt(&plane, move_index, step * sign);
                let k = tensor.biorthogonal(&candidate)?;
                if k < value {
                    value = k;
                    plane = candidate;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step = step * T::half();
        }
    }
    Ok((value, plane, iterations))
}

/// Value, plane and global sample index of a batch's best plane.
type BatchBest<T> = (T, TwoPlane<T>, usize);

pub fn grassmannian_min<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    p: &Point<T>,
    n_samples: usize,
    seed: u64,
) -> Result<GrassmannMinimum<T>> {
    let tensor = RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic);
    let mut best: Option<(T, TwoPlane<T>, CandidateOrigin)> = None;

    let mut coordinate_min = T::infinity();
    for &(i, j) in COORDINATE_PLANES.iter() {
        let plane = TwoPlane::coordinate(i, j);
        let k = tensor.biorthogonal(&plane)?;
        coordinate_min = coordinate_min.min(k);
        consider(&mut best, k, plane, CandidateOrigin::Coordinate { i, j });
    }

    let mut family_min = T::infinity();
    for (index, t) in reduction_grid::<T>(REDUCTION_GRID_POINTS)
        .into_iter()
        .enumerate()
    {
        let plane = reduction_family_plane(t);
        let k = tensor.biorthogonal(&plane)?;
        family_min = family_min.min(k);
        consider(
            &mut best,
            k,
            plane,
            CandidateOrigin::ReductionFamily { index },
        );
    }

    let batches = n_samples.div_ceil(BATCH_SIZE);
    let batch_best: Vec<Result<Option<BatchBest<T>>>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = batch_rng(seed, b);
            let count = BATCH_SIZE.min(n_samples - b * BATCH_SIZE);
            let mut local: Option<BatchBest<T>> = None;
            for offset in 0..count {
                let plane = random_plane::<T, _>(&mut rng);
                let k = tensor.biorthogonal(&plane)?;
                if local.as_ref().is_none_or(|(v, _, _)| k < *v) {
                    local = Some((k, plane, b * BATCH_SIZE + offset));
                }
            }
            Ok(local)
        })
        .collect();

    let mut sampled_min = T::infinity();
    for entry in batch_best {
        if let Some((k, plane, index)) = entry? {
            sampled_min = sampled_min.min(k);
            consider(&mut best, k, plane, CandidateOrigin::Sampled { index });
        }
    }

    let (value, argmin, origin) = best.expect("coordinate planes are always candidates");
    let (refined_value, refined_plane, refine_iterations) = refine(&tensor, &argmin)?;
    let (value, argmin, origin) = if refined_value < value {
        (refined_value, refined_plane, CandidateOrigin::Refined)
    } else {
        (value, argmin, origin)
    };

    Ok(GrassmannMinimum {
        value,
        argmin,
        origin,
        coordinate_min,
        family_min,
        sampled_min,
        samples: n_samples,
        refine_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{affine_coefficients, TorsionParams};
    use crate::frame::{E3, E4};

    #[test]
    fn levi_civita_limit_minimum_is_zero() {
        let conn = affine_coefficients(TorsionParams::<f64>::new(0.0, 0.0));
        let p = Point::new(1.2, 0.0, 0.0, 0.0).unwrap();
        let m = grassmannian_min(&conn, &p, 2000, 3).unwrap();
        assert!(m.value.abs() < 1e-12);
        assert!(m.coordinate_min.abs() < 1e-12);
        // First zero in candidate order is a coordinate plane containing a flat direction.
        assert!(matches!(m.origin, CandidateOrigin::Coordinate { .. }));
        let flat = TwoPlane::coordinate(E3, E4);
        let b = RiemannTensor::evaluate(&conn, &p, DerivativeMode::Analytic)
            .biorthogonal(&flat)
            .unwrap();
        assert!((b - 0.5).abs() < 1e-12);
    }

    #[test]
    fn coordinate_min_is_quarter_strength() {
        let conn = affine_coefficients(TorsionParams::<f64>::new(1.0, 1.0));
        let p = Point::equator();
        let m = grassmannian_min(&conn, &p, 100, 42).unwrap();
        assert!((m.coordinate_min - 0.25).abs() < 1e-12);
        assert!((m.family_min - 0.25).abs() < 1e-12);
        assert!(m.value <= 0.25 + 1e-9);
    }

    #[test]
    fn deterministic_for_seed_and_independent_of_threads() {
        let conn = affine_coefficients(TorsionParams::new(1.0, -0.5));
        let p = Point::new(0.9, 0.0, 0.0, 0.0).unwrap();
        let a = grassmannian_min(&conn, &p, 3 * BATCH_SIZE + 17, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| grassmannian_min(&conn, &p, 3 * BATCH_SIZE + 17, 9).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn sample_planes_match_minimizer_stream() {
        let conn = affine_coefficients(TorsionParams::new(0.3, 0.8));
        let p = Point::new(2.0, 0.0, 0.0, 0.0).unwrap();
        let n = BATCH_SIZE + 5;
        let planes = sample_planes::<f64>(n, 11);
        let tensor = RiemannTensor::evaluate(&conn, &p, DerivativeMode::Analytic);
        let brute = planes
            .iter()
            .map(|pl| tensor.biorthogonal(pl).unwrap())
            .fold(f64::INFINITY, f64::min);
        let m = grassmannian_min(&conn, &p, n, 11).unwrap();
        assert_eq!(m.sampled_min, brute);
    }

    #[test]
    fn refinement_never_increases() {
        let conn = affine_coefficients(TorsionParams::new(1.0, 1.0));
        let p = Point::equator();
        let tensor = RiemannTensor::evaluate(&conn, &p, DerivativeMode::Analytic);
        for plane in sample_planes::<f64>(20, 5) {
            let start = tensor.biorthogonal(&plane).unwrap();
            let (v, refined, iters) = refine(&tensor, &plane).unwrap();
            assert!(v <= start);
            assert!(iters <= REFINE_ITERATIONS);
            assert!(TwoPlane::new(refined.u, refined.v).is_ok());
        }
    }
}
