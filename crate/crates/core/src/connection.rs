//! Levi-Civita and torsion-deformed connection coefficients in the
//! orthonormal frame.
//!
//! Convention: `∇_{eᵢ} eⱼ = Γᵏᵢⱼ eₖ`, stored as `gamma(k, i, j)`.

use serde::{Deserialize, Serialize};

use crate::field::{Expr, ScalarField};
use crate::frame::{structure_coefficients, FrameVector, Point, DIM, E1, E2, E3, E4};
use crate::scalar::Scalar;

/// Torsion strengths `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsionParams<T> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> TorsionParams<T> {
    pub fn new(a: T, b: T) -> Self {
        TorsionParams { a, b }
    }

    pub fn strength_sq(&self) -> T {
        self.a * self.a + self.b * self.b
    }

    /// `(0, 0)`: the connection collapses to Levi-Civita.
    pub fn is_levi_civita_limit(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scaled(&self, t: T) -> Self {
        TorsionParams::new(self.a * t, self.b * t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    LeviCivita,
    AffineWithTorsion,
}

/// Frame connection coefficients with their analytic frame derivatives.
#[derive(Debug, Clone)]
pub struct ConnectionCoefficients<T> {
    flavor: Flavor,
    params: TorsionParams<T>,
    table: Vec<ScalarField<T>>,
    derivatives: Vec<ScalarField<T>>,
}

fn slot(k: usize, i: usize, j: usize) -> usize {
    (k * DIM + i) * DIM + j
}

impl<T: Scalar> ConnectionCoefficients<T> {
    fn from_table(flavor: Flavor, params: TorsionParams<T>, table: Vec<ScalarField<T>>) -> Self {
        let mut derivatives = Vec::with_capacity(DIM * table.len());
        for d in 0..DIM {
            for field in &table {
                derivatives.push(field.frame_derivative(d).expect("frame index in range"));
            }
        }
        ConnectionCoefficients {
            flavor,
            params,
            table,
            derivatives,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn params(&self) -> TorsionParams<T> {
        self.params
    }

    pub fn gamma_field(&self, k: usize, i: usize, j: usize) -> &ScalarField<T> {
        &self.table[slot(k, i, j)]
    }

    /// `Γᵏᵢⱼ(p)`.
    pub fn gamma(&self, k: usize, i: usize, j: usize, p: &Point<T>) -> T {
        self.table[slot(k, i, j)].eval(p)
    }

    /// `e_d(Γᵏᵢⱼ)(p)` from the registered analytic derivative.
    pub fn gamma_derivative(&self, d: usize, k: usize, i: usize, j: usize, p: &Point<T>) -> T {
        self.derivatives[d * DIM * DIM * DIM + slot(k, i, j)].eval(p)
    }

    /// `e_d(Γᵏᵢⱼ)(p)` by centered differences of the coefficient values.
    pub fn gamma_derivative_fd(
        &self,
        d: usize,
        k: usize,
        i: usize,
        j: usize,
        p: &Point<T>,
        h: T,
    ) -> T {
        self.table[slot(k, i, j)]
            .frame_derivative_fd(d, p, h)
            .expect("frame index in range")
    }

    /// All coefficients at `p`, indexed `[k][i][j]`.
    pub fn evaluate(&self, p: &Point<T>) -> [[[T; DIM]; DIM]; DIM] {
        std::array::from_fn(|k| {
            std::array::from_fn(|i| std::array::from_fn(|j| self.gamma(k, i, j, p)))
        })
    }
}

/// Levi-Civita connection of the product metric, solved from torsion-freeness
/// and metric compatibility in the non-holonomic frame.
///
/// Nonzero entries: `Γ²₂₁ = cot θ`, `Γ¹₂₂ = −cot θ`.
pub fn levi_civita_coefficients<T: Scalar>() -> ConnectionCoefficients<T> {
    let mut table = vec![ScalarField::zero(); DIM * DIM * DIM];
    table[slot(E2, E2, E1)] = ScalarField::Analytic(Expr::cot_theta());
    table[slot(E1, E2, E2)] = ScalarField::Analytic(-Expr::cot_theta());
    ConnectionCoefficients::from_table(
        Flavor::LeviCivita,
        TorsionParams::new(T::zero(), T::zero()),
        table,
    )
}

/// `T(eᵢ, eⱼ)` for the constant torsion table.
pub fn torsion_tensor<T: Scalar>(params: &TorsionParams<T>, i: usize, j: usize) -> FrameVector<T> {
    let TorsionParams { a, b } = *params;
    let z = T::zero();
    let upper = |i: usize, j: usize| -> FrameVector<T> {
        match (i, j) {
            (E1, E3) => FrameVector::new(z, z, z, a),
            (E1, E4) => FrameVector::new(z, z, -a, z),
            (E2, E3) => FrameVector::new(z, z, z, b),
            (E2, E4) => FrameVector::new(z, z, -b, z),
            (E3, E4) => FrameVector::new(-a, -b, z, z),
            _ => FrameVector::zero(),
        }
    };
    if i <= j {
        upper(i, j)
    } else {
        -upper(j, i)
    }
}

/// `Γ = Γᴸᶜ + ½T`: half of each torsion component on each index order.
pub fn affine_coefficients<T: Scalar>(params: TorsionParams<T>) -> ConnectionCoefficients<T> {
    let lc = levi_civita_coefficients::<T>();
    let mut table = lc.table.clone();
    for i in 0..DIM {
        for j in 0..DIM {
            let t = torsion_tensor(&params, i, j);
            for k in 0..DIM {
                if !t[k].is_zero() {
                    let s = slot(k, i, j);
                    table[s] = table[s].clone() + ScalarField::constant(t[k] * T::half());
                }
            }
        }
    }
    ConnectionCoefficients::from_table(Flavor::AffineWithTorsion, params, table)
}

/// `∇_{eᵢ} eⱼ = Γᵏᵢⱼ eₖ`.
pub fn covariant_derivative<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    i: usize,
    j: usize,
    p: &Point<T>,
) -> FrameVector<T> {
    FrameVector(std::array::from_fn(|k| conn.gamma(k, i, j, p)))
}

/// `∇_{eᵢ}eⱼ − ∇_{eⱼ}eᵢ − [eᵢ, eⱼ]`.
pub fn recover_torsion<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    i: usize,
    j: usize,
    p: &Point<T>,
) -> FrameVector<T> {
    let c = structure_coefficients(p);
    covariant_derivative(conn, i, j, p) - covariant_derivative(conn, j, i, p) - c.bracket(i, j)
}

/// `max |(∇g)(eᵢ; eⱼ, eₖ)| = max |Γʲᵢₖ + Γᵏᵢⱼ|` (frame metric is the identity).
pub fn metric_compatibility_defect<T: Scalar>(conn: &ConnectionCoefficients<T>, p: &Point<T>) -> T {
    let g = conn.evaluate(p);
    let mut worst = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                worst = worst.max((g[j][i][k] + g[k][i][j]).abs());
            }
        }
    }
    worst
}

/// Checks `Γᵏᵢⱼ − Γᵏⱼᵢ = cᵏᵢⱼ` at `p`; returns the largest violation.
pub fn torsion_free_defect<T: Scalar>(conn: &ConnectionCoefficients<T>, p: &Point<T>) -> T {
    let mut worst = T::zero();
    for i in 0..DIM {
        for j in 0..DIM {
            let r = recover_torsion(conn, i, j, p);
            worst = worst.max(r.max_abs());
        }
    }
    worst
}
