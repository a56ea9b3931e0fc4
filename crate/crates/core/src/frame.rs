//! Chart points, the orthonormal frame `{∂θ, (1/sinθ)∂φ, ∂x, ∂y}` and its
//! commutators.
//!
//! Frame indices are 0-based throughout the crate; the constants [`E1`]..[`E4`]
//! name them.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::field::{Coord, Expr, ScalarField};
use crate::scalar::Scalar;

pub const DIM: usize = 4;

pub const E1: usize = 0;
pub const E2: usize = 1;
pub const E3: usize = 2;
pub const E4: usize = 3;

/// Default distance kept from the poles θ = 0, π.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// A point `(θ, φ, x, y)` of the product chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<T> {
    pub theta: T,
    pub phi: T,
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    /// Builds a point, reducing `φ` mod 2π and `x, y` mod 1.
    pub fn new(theta: T, phi: T, x: T, y: T) -> Result<Self> {
        if !(theta > T::zero() && theta < T::PI()) {
            return Err(GeometryError::OutsideChart {
                theta: theta.to_f64_lossy(),
            });
        }
        let two_pi = T::PI() + T::PI();
        Ok(Point {
            theta,
            phi: rem_euclid(phi, two_pi),
            x: rem_euclid(x, T::one()),
            y: rem_euclid(y, T::one()),
        })
    }

    /// Point on the equator at the torus origin.
    pub fn equator() -> Self {
        Point {
            theta: T::FRAC_PI_2(),
            phi: T::zero(),
            x: T::zero(),
            y: T::zero(),
        }
    }

    pub fn coord(&self, c: Coord) -> T {
        match c {
            Coord::Theta => self.theta,
            Coord::Phi => self.phi,
            Coord::X => self.x,
            Coord::Y => self.y,
        }
    }

    /// Raw coordinate shift without period reduction (finite-difference stencils).
    pub fn shifted(&self, c: Coord, h: T) -> Self {
        let mut q = *self;
        match c {
            Coord::Theta => q.theta = q.theta + h,
            Coord::Phi => q.phi = q.phi + h,
            Coord::X => q.x = q.x + h,
            Coord::Y => q.y = q.y + h,
        }
        q
    }

    pub fn ensure_interior(&self, epsilon: T) -> Result<()> {
        if self.theta < epsilon || self.theta > T::PI() - epsilon {
            return Err(GeometryError::PoleProximity {
                theta: self.theta.to_f64_lossy(),
                epsilon: epsilon.to_f64_lossy(),
            });
        }
        Ok(())
    }
}

fn rem_euclid<T: Scalar>(v: T, period: T) -> T {
    let r = v % period;
    if r < T::zero() {
        r + period
    } else {
        r
    }
}

/// Components of a tangent vector in the orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameVector<T>(pub [T; DIM]);

impl<T: Scalar> FrameVector<T> {
    pub fn zero() -> Self {
        FrameVector([T::zero(); DIM])
    }

    pub fn new(c1: T, c2: T, c3: T, c4: T) -> Self {
        FrameVector([c1, c2, c3, c4])
    }

    /// The frame vector `e_{i+1}`.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }

    pub fn components(&self) -> &[T; DIM] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> T {
        inner(self, other)
    }

    pub fn norm(&self) -> T {
        inner(self, self).sqrt()
    }

    pub fn normalized(&self) -> Self {
        *self * (T::one() / self.norm())
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    pub fn map<F: Fn(T) -> T>(&self, f: F) -> Self {
        FrameVector(self.0.map(f))
    }
}

impl<T: Scalar> Index<usize> for FrameVector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Scalar> IndexMut<usize> for FrameVector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T: Scalar> Add for FrameVector<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        FrameVector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<T: Scalar> AddAssign for FrameVector<T> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..DIM {
            self.0[i] = self.0[i] + rhs.0[i];
        }
    }
}

impl<T: Scalar> Sub for FrameVector<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        FrameVector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<T: Scalar> Neg for FrameVector<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.map(|c| -c)
    }
}

impl<T: Scalar> Mul<T> for FrameVector<T> {
    type Output = Self;

    fn mul(self, s: T) -> Self {
        self.map(|c| c * s)
    }
}

/// The metric in the orthonormal frame: the Euclidean dot product.
pub fn inner<T: Scalar>(u: &FrameVector<T>, v: &FrameVector<T>) -> T {
    (0..DIM).fold(T::zero(), |acc, i| acc + u.0[i] * v.0[i])
}

/// Gram determinant `|u|²|v|² − ⟨u,v⟩²`.
pub fn wedge_norm_sq<T: Scalar>(u: &FrameVector<T>, v: &FrameVector<T>) -> T {
    let uv = inner(u, v);
    inner(u, u) * inner(v, v) - uv * uv
}

/// Commutator coefficients `[eᵢ, eⱼ] = cᵏᵢⱼ eₖ` evaluated at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureCoefficients<T> {
    table: [[[T; DIM]; DIM]; DIM],
}

impl<T: Scalar> StructureCoefficients<T> {
    /// `cᵏᵢⱼ`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> T {
        self.table[k][i][j]
    }

    /// `[eᵢ, eⱼ]` as a frame vector.
    pub fn bracket(&self, i: usize, j: usize) -> FrameVector<T> {
        FrameVector(std::array::from_fn(|k| self.table[k][i][j]))
    }
}

/// Symbolic `cᵏᵢⱼ`. The only independent nonzero entry is `c²₁₂ = −cot θ`.
pub fn structure_coefficient_field<T: Scalar>(k: usize, i: usize, j: usize) -> ScalarField<T> {
    match (k, i, j) {
        (E2, E1, E2) => ScalarField::Analytic(-Expr::cot_theta()),
        (E2, E2, E1) => ScalarField::Analytic(Expr::cot_theta()),
        _ => ScalarField::zero(),
    }
}

pub fn structure_coefficients<T: Scalar>(p: &Point<T>) -> StructureCoefficients<T> {
    let mut table = [[[T::zero(); DIM]; DIM]; DIM];
    for (k, plane) in table.iter_mut().enumerate() {
        for (i, row) in plane.iter_mut().enumerate() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = structure_coefficient_field::<T>(k, i, j).eval(p);
            }
        }
    }
    StructureCoefficients { table }
}

/// `eᵢ f` at `p`, rejecting points within `epsilon` of a pole.
pub fn frame_derivative_with<T: Scalar>(
    f: &ScalarField<T>,
    i: usize,
    p: &Point<T>,
    epsilon: T,
) -> Result<T> {
    p.ensure_interior(epsilon)?;
    Ok(f.frame_derivative(i)?.eval(p))
}

/// `eᵢ f` at `p` with the default pole cutoff.
pub fn frame_derivative<T: Scalar>(f: &ScalarField<T>, i: usize, p: &Point<T>) -> Result<T> {
    frame_derivative_with(f, i, p, T::lit(DEFAULT_EPSILON))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn e(i: usize) -> FrameVector<f64> {
        FrameVector::basis(i)
    }

    #[test]
    fn inner_on_frame() {
        assert_eq!(inner(&e(E1), &e(E1)), 1.0);
        assert_eq!(inner(&e(E1), &e(E3)), 0.0);
        assert_eq!(inner(&(e(E1) * 2.0 + e(E4)), &e(E4)), 1.0);
    }

    #[test]
    fn gram_determinant() {
        assert_eq!(wedge_norm_sq(&e(E1), &e(E2)), 1.0);
        assert_eq!(wedge_norm_sq(&e(E1), &e(E1)), 0.0);
        // |e1+e2|² |e2|² − ⟨e1+e2, e2⟩² = 2·1 − 1
        assert_eq!(wedge_norm_sq(&(e(E1) + e(E2)), &e(E2)), 1.0);
    }

    #[test]
    fn commutator_values() {
        let eq = Point::<f64>::new(PI / 2.0, 0.0, 0.0, 0.0).unwrap();
        assert!(structure_coefficients(&eq).get(E2, E1, E2).abs() < 1e-15);
        let p = Point::<f64>::new(PI / 4.0, 1.0, 0.1, 0.2).unwrap();
        let c = structure_coefficients(&p);
        assert!((c.get(E2, E1, E2) + 1.0).abs() < 1e-14);
        assert_eq!(c.get(E4, E1, E3), 0.0);
    }

    #[test]
    fn commutator_matches_coordinate_oracle() {
        // [∂θ, (1/sinθ)∂φ] = ∂θ(1/sinθ) ∂φ = −cotθ · (1/sinθ)∂φ
        for &t in &[0.2, 0.7, 1.3, 2.9] {
            let p = Point::<f64>::new(t, 0.0, 0.0, 0.0).unwrap();
            let coordinate = -t.cos() / (t.sin() * t.sin());
            let in_frame = coordinate * t.sin();
            assert!((structure_coefficients(&p).get(E2, E1, E2) - in_frame).abs() < 1e-12);
        }
    }

    #[test]
    fn point_reduces_periodic_coordinates() {
        let p = Point::<f64>::new(1.0, -0.5, 1.25, -0.25).unwrap();
        assert!((p.phi - (2.0 * PI - 0.5)).abs() < 1e-15);
        assert!((p.x - 0.25).abs() < 1e-15);
        assert!((p.y - 0.75).abs() < 1e-15);
        assert!(Point::<f64>::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(Point::<f64>::new(PI, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn frame_derivative_examples() {
        let eq = Point::<f64>::equator();
        let cot = ScalarField::Analytic(Expr::cot_theta());
        assert!((frame_derivative(&cot, E1, &eq).unwrap() + 1.0).abs() < 1e-14);
        assert_eq!(frame_derivative(&cot, E3, &eq).unwrap(), 0.0);
        let half_a = ScalarField::constant(0.5 * 1.7);
        for i in 0..DIM {
            assert_eq!(frame_derivative(&half_a, i, &eq).unwrap(), 0.0);
        }
    }

    #[test]
    fn frame_derivative_rejects_poles() {
        let cot = ScalarField::<f64>::Analytic(Expr::cot_theta());
        let near = Point::new(0.01, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            frame_derivative(&cot, E1, &near),
            Err(GeometryError::PoleProximity { .. })
        ));
        let far = Point::new(PI - 0.01, 0.0, 0.0, 0.0).unwrap();
        assert!(frame_derivative(&cot, E2, &far).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let p = Point::<f32>::new(std::f32::consts::FRAC_PI_4, 0.0, 0.0, 0.0).unwrap();
        assert!((structure_coefficients(&p).get(E2, E1, E2) + 1.0).abs() < 1e-6);
        let u = FrameVector::<f32>::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(wedge_norm_sq(&u, &FrameVector::basis(E2)), 1.0);
    }
}
