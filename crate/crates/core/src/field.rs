//! Point-dependent scalar coefficients.
//!
//! Coefficients that appear in connection tables and differential forms are
//! closed-form functions of the chart coordinates (`cot θ`, `sin θ`, constants,
//! products of these). They are carried as small expression trees so that
//! frame derivatives of any order stay exact. Fields defined only through a
//! closure fall back to centered finite differences.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{GeometryError, Result};
use crate::frame::{Point, DIM};
use crate::scalar::Scalar;

/// Step used when a derivative has to be taken by centered differences.
pub const FD_STEP: f64 = 1e-5;

/// Chart coordinate on S² × T².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Theta,
    Phi,
    X,
    Y,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::Theta, Coord::Phi, Coord::X, Coord::Y];
}

/// Expression tree in the chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr<T> {
    Const(T),
    Var(Coord),
    Sin(Box<Expr<T>>),
    Cos(Box<Expr<T>>),
    Sum(Vec<Expr<T>>),
    Product(Vec<Expr<T>>),
    Quotient(Box<Expr<T>>, Box<Expr<T>>),
}

impl<T: Scalar> Expr<T> {
    pub fn zero() -> Self {
        Expr::Const(T::zero())
    }

    pub fn one() -> Self {
        Expr::Const(T::one())
    }

    pub fn constant(value: T) -> Self {
        Expr::Const(value)
    }

    pub fn var(c: Coord) -> Self {
        Expr::Var(c)
    }

    pub fn sin(arg: Expr<T>) -> Self {
        match arg {
            Expr::Const(v) => Expr::Const(v.sin()),
            other => Expr::Sin(Box::new(other)),
        }
    }

    pub fn cos(arg: Expr<T>) -> Self {
        match arg {
            Expr::Const(v) => Expr::Const(v.cos()),
            other => Expr::Cos(Box::new(other)),
        }
    }

    /// `cot θ` as `cos θ / sin θ`.
    pub fn cot_theta() -> Self {
        Expr::cos(Expr::var(Coord::Theta)) / Expr::sin(Expr::var(Coord::Theta))
    }

    pub fn sin_theta() -> Self {
        Expr::sin(Expr::var(Coord::Theta))
    }

    pub fn cos_theta() -> Self {
        Expr::cos(Expr::var(Coord::Theta))
    }

    pub fn as_const(&self) -> Option<T> {
        match self {
            Expr::Const(v) => Some(*v),
            _ => None,
        }
    }

    /// Structural zero; does not attempt to prove identities.
    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(v) if v.is_zero())
    }

    pub fn eval(&self, p: &Point<T>) -> T {
        match self {
            Expr::Const(v) => *v,
            Expr::Var(c) => p.coord(*c),
            Expr::Sin(u) => u.eval(p).sin(),
            Expr::Cos(u) => u.eval(p).cos(),
            Expr::Sum(terms) => terms.iter().fold(T::zero(), |acc, t| acc + t.eval(p)),
            Expr::Product(factors) => factors.iter().fold(T::one(), |acc, f| acc * f.eval(p)),
            Expr::Quotient(n, d) => n.eval(p) / d.eval(p),
        }
    }

    /// Partial derivative with respect to a chart coordinate.
    pub fn partial(&self, c: Coord) -> Expr<T> {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(v) => {
                if *v == c {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Sin(u) => Expr::cos((**u).clone()) * u.partial(c),
            Expr::Cos(u) => -(Expr::sin((**u).clone()) * u.partial(c)),
            Expr::Sum(terms) => terms
                .iter()
                .map(|t| t.partial(c))
                .fold(Expr::zero(), |acc, t| acc + t),
            Expr::Product(factors) => {
                let mut total = Expr::zero();
                for (i, f) in factors.iter().enumerate() {
                    let df = f.partial(c);
                    if df.is_zero() {
                        continue;
                    }
                    let rest = factors
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .fold(Expr::one(), |acc, (_, g)| acc * g.clone());
                    total = total + df * rest;
                }
                total
            }
            Expr::Quotient(n, d) => {
                let dn = n.partial(c);
                let dd = d.partial(c);
                if dd.is_zero() {
                    return dn / (**d).clone();
                }
                let numerator = dn * (**d).clone() - (**n).clone() * dd;
                numerator / ((**d).clone() * (**d).clone())
            }
        }
    }
}

impl<T: Scalar> Add for Expr<T> {
    type Output = Expr<T>;

    fn add(self, rhs: Expr<T>) -> Expr<T> {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (lhs, rhs) if lhs.is_zero() => rhs,
            (lhs, rhs) if rhs.is_zero() => lhs,
            (Expr::Sum(mut a), Expr::Sum(b)) => {
                a.extend(b);
                Expr::Sum(a)
            }
            (Expr::Sum(mut a), other) => {
                a.push(other);
                Expr::Sum(a)
            }
            (other, Expr::Sum(mut b)) => {
                b.insert(0, other);
                Expr::Sum(b)
            }
            (lhs, rhs) => Expr::Sum(vec![lhs, rhs]),
        }
    }
}

impl<T: Scalar> Mul for Expr<T> {
    type Output = Expr<T>;

    fn mul(self, rhs: Expr<T>) -> Expr<T> {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            (lhs, rhs) if lhs.is_zero() || rhs.is_zero() => Expr::zero(),
            (Expr::Const(a), rhs) if a == T::one() => rhs,
            (lhs, Expr::Const(b)) if b == T::one() => lhs,
            (Expr::Product(mut a), Expr::Product(b)) => {
                a.extend(b);
                Expr::Product(a)
            }
            (Expr::Product(mut a), other) => {
                a.push(other);
                Expr::Product(a)
            }
            (other, Expr::Product(mut b)) => {
                b.insert(0, other);
                Expr::Product(b)
            }
            (lhs, rhs) => Expr::Product(vec![lhs, rhs]),
        }
    }
}

impl<T: Scalar> Div for Expr<T> {
    type Output = Expr<T>;

    fn div(self, rhs: Expr<T>) -> Expr<T> {
        match (self, rhs) {
            (lhs, _) if lhs.is_zero() => Expr::zero(),
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a / b),
            (lhs, Expr::Const(b)) if b == T::one() => lhs,
            (lhs, rhs) => Expr::Quotient(Box::new(lhs), Box::new(rhs)),
        }
    }
}

impl<T: Scalar> Neg for Expr<T> {
    type Output = Expr<T>;

    fn neg(self) -> Expr<T> {
        match self {
            Expr::Const(v) => Expr::Const(-v),
            other => Expr::Const(-T::one()) * other,
        }
    }
}

impl<T: Scalar> Sub for Expr<T> {
    type Output = Expr<T>;

    fn sub(self, rhs: Expr<T>) -> Expr<T> {
        self + (-rhs)
    }
}

type FieldFn<T> = Arc<dyn Fn(&Point<T>) -> T + Send + Sync>;

/// A scalar field on the chart.
///
/// `Analytic` fields differentiate symbolically. `Sampled` fields only know
/// how to evaluate; their derivatives are centered differences with step
/// [`FD_STEP`].
#[derive(Clone)]
pub enum ScalarField<T> {
    Analytic(Expr<T>),
    Sampled(FieldFn<T>),
}

impl<T: fmt::Debug> fmt::Debug for ScalarField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Analytic(e) => f.debug_tuple("Analytic").field(e).finish(),
            ScalarField::Sampled(_) => f.write_str("Sampled(<fn>)"),
        }
    }
}

impl<T: Scalar> From<Expr<T>> for ScalarField<T> {
    fn from(e: Expr<T>) -> Self {
        ScalarField::Analytic(e)
    }
}

impl<T: Scalar> ScalarField<T> {
    pub fn zero() -> Self {
        ScalarField::Analytic(Expr::zero())
    }

    pub fn constant(value: T) -> Self {
        ScalarField::Analytic(Expr::constant(value))
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&Point<T>) -> T + Send + Sync + 'static,
    {
        ScalarField::Sampled(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScalarField::Analytic(e) if e.is_zero())
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, ScalarField::Analytic(_))
    }

    /// Drops the symbolic form, keeping only evaluation.
    pub fn to_sampled(&self) -> Self {
        match self {
            ScalarField::Analytic(e) => {
                let e = e.clone();
                ScalarField::from_fn(move |p| e.eval(p))
            }
            ScalarField::Sampled(f) => ScalarField::Sampled(f.clone()),
        }
    }

    pub fn eval(&self, p: &Point<T>) -> T {
        match self {
            ScalarField::Analytic(e) => e.eval(p),
            ScalarField::Sampled(f) => f(p),
        }
    }

    pub fn partial(&self, c: Coord) -> ScalarField<T> {
        match self {
            ScalarField::Analytic(e) => ScalarField::Analytic(e.partial(c)),
            ScalarField::Sampled(f) => {
                let f = f.clone();
                let h = T::lit(FD_STEP);
                ScalarField::from_fn(move |p| centered_difference(&*f, p, c, h))
            }
        }
    }

    /// The field `eᵢ f` for frame index `i` (0-based).
    pub fn frame_derivative(&self, i: usize) -> Result<ScalarField<T>> {
        let coord = frame_coord(i)?;
        let d = self.partial(coord);
        if i != 1 {
            return Ok(d);
        }
        Ok(match d {
            ScalarField::Analytic(e) => ScalarField::Analytic(e / Expr::sin_theta()),
            ScalarField::Sampled(f) => ScalarField::from_fn(move |p| f(p) / p.theta.sin()),
        })
    }

    /// `eᵢ f` at a point, computed from centered differences of `eval` alone.
    pub fn frame_derivative_fd(&self, i: usize, p: &Point<T>, h: T) -> Result<T> {
        let coord = frame_coord(i)?;
        let d = centered_difference(&|q: &Point<T>| self.eval(q), p, coord, h);
        Ok(if i == 1 { d / p.theta.sin() } else { d })
    }
}

/// Chart coordinate differentiated by frame vector `i`.
pub(crate) fn frame_coord(i: usize) -> Result<Coord> {
    if i >= DIM {
        return Err(GeometryError::FrameIndex(i));
    }
    Ok(Coord::ALL[i])
}

fn centered_difference<T: Scalar>(f: &dyn Fn(&Point<T>) -> T, p: &Point<T>, c: Coord, h: T) -> T {
    // Five-point stencil: truncation error O(h⁴), which matters for cotθ near the poles.
    let two_h = h + h;
    let near = f(&p.shifted(c, h)) - f(&p.shifted(c, -h));
    let far = f(&p.shifted(c, two_h)) - f(&p.shifted(c, -two_h));
    (T::lit(8.0) * near - far) / (T::lit(6.0) * two_h)
}

impl<T: Scalar> Add for ScalarField<T> {
    type Output = ScalarField<T>;

    fn add(self, rhs: ScalarField<T>) -> ScalarField<T> {
        match (self, rhs) {
            (ScalarField::Analytic(a), ScalarField::Analytic(b)) => ScalarField::Analytic(a + b),
            (lhs, rhs) if rhs.is_zero() => lhs,
            (lhs, rhs) if lhs.is_zero() => rhs,
            (lhs, rhs) => ScalarField::from_fn(move |p| lhs.eval(p) + rhs.eval(p)),
        }
    }
}

impl<T: Scalar> Mul for ScalarField<T> {
    type Output = ScalarField<T>;

    fn mul(self, rhs: ScalarField<T>) -> ScalarField<T> {
        match (self, rhs) {
            (ScalarField::Analytic(a), ScalarField::Analytic(b)) => ScalarField::Analytic(a * b),
            (lhs, rhs) if lhs.is_zero() || rhs.is_zero() => ScalarField::zero(),
            (lhs, rhs) => ScalarField::from_fn(move |p| lhs.eval(p) * rhs.eval(p)),
        }
    }
}

impl<T: Scalar> Neg for ScalarField<T> {
    type Output = ScalarField<T>;

    fn neg(self) -> ScalarField<T> {
        match self {
            ScalarField::Analytic(e) => ScalarField::Analytic(-e),
            ScalarField::Sampled(f) => ScalarField::from_fn(move |p| -f(p)),
        }
    }
}

impl<T: Scalar> Sub for ScalarField<T> {
    type Output = ScalarField<T>;

    fn sub(self, rhs: ScalarField<T>) -> ScalarField<T> {
        self + (-rhs)
    }
}

impl<T: Scalar> ScalarField<T> {
    pub fn scale(self, factor: T) -> ScalarField<T> {
        self * ScalarField::constant(factor)
    }

    pub fn divide(self, rhs: ScalarField<T>) -> ScalarField<T> {
        match (self, rhs) {
            (ScalarField::Analytic(a), ScalarField::Analytic(b)) => ScalarField::Analytic(a / b),
            (lhs, _) if lhs.is_zero() => ScalarField::zero(),
            (lhs, rhs) => ScalarField::from_fn(move |p| lhs.eval(p) / rhs.eval(p)),
        }
    }
}
