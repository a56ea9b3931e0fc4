//! Riemann tensor of a frame connection, sectional and biorthogonal
//! curvature of tangent 2-planes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connection::{ConnectionCoefficients, TorsionParams};
use crate::error::{GeometryError, Result};
use crate::frame::{inner, structure_coefficients, wedge_norm_sq, FrameVector, Point, DIM};
use crate::scalar::Scalar;

/// Planes whose Gram determinant falls below this are rejected.
pub const DEGENERATE_WEDGE: f64 = 1e-12;

/// The six coordinate planes in the order `(12, 13, 14, 23, 24, 34)`.
pub const COORDINATE_PLANES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Plane/complement pairings among the coordinate planes.
pub const COORDINATE_PAIRINGS: [((usize, usize), (usize, usize)); 3] =
    [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))];

/// How frame derivatives of the connection coefficients are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeMode<T> {
    Analytic,
    FiniteDifference(T),
}

/// `R(eᵢ, eⱼ)eₖ` at one point, stored as `[l][i][j][k]` (component `l`).
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor<T> {
    r: [[[[T; DIM]; DIM]; DIM]; DIM],
}

impl<T: Scalar> RiemannTensor<T> {
    /// Expands `∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]} Z` on frame fields:
    ///
    /// `R(eᵢ,eⱼ)eₖ = (eᵢΓˡⱼₖ − eⱼΓˡᵢₖ + ΓᵐⱼₖΓˡᵢₘ − ΓᵐᵢₖΓˡⱼₘ − cᵐᵢⱼΓˡₘₖ) eₗ`.
    pub fn evaluate(
        conn: &ConnectionCoefficients<T>,
        p: &Point<T>,
        mode: DerivativeMode<T>,
    ) -> Self {
        let g = conn.evaluate(p);
        let c = structure_coefficients(p);
        let deriv = |d: usize, l: usize, i: usize, k: usize| match mode {
            DerivativeMode::Analytic => conn.gamma_derivative(d, l, i, k, p),
            DerivativeMode::FiniteDifference(h) => conn.gamma_derivative_fd(d, l, i, k, p, h),
        };
        let mut r = [[[[T::zero(); DIM]; DIM]; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for (l, r_l) in r.iter_mut().enumerate() {
                        let mut value = deriv(i, l, j, k) - deriv(j, l, i, k);
                        for m in 0..DIM {
                            value = value + g[m][j][k] * g[l][i][m]
                                - g[m][i][k] * g[l][j][m]
                                - c.get(m, i, j) * g[l][m][k];
                        }
                        r_l[i][j][k] = value;
                    }
                }
            }
        }
        RiemannTensor { r }
    }

    pub fn component(&self, l: usize, i: usize, j: usize, k: usize) -> T {
        self.r[l][i][j][k]
    }

    pub fn on_frame(&self, i: usize, j: usize, k: usize) -> FrameVector<T> {
        FrameVector(std::array::from_fn(|l| self.r[l][i][j][k]))
    }

    /// `R(u, v)w` by trilinearity.
    pub fn apply(
        &self,
        u: &FrameVector<T>,
        v: &FrameVector<T>,
        w: &FrameVector<T>,
    ) -> FrameVector<T> {
        let mut out = FrameVector::zero();
        for i in 0..DIM {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                let uv = u[i] * v[j];
                if uv.is_zero() {
                    continue;
                }
                for k in 0..DIM {
                    let coeff = uv * w[k];
                    if coeff.is_zero() {
                        continue;
                    }
                    for l in 0..DIM {
                        out[l] = out[l] + coeff * self.r[l][i][j][k];
                    }
                }
            }
        }
        out
    }

    /// `⟨R(u,v)w, z⟩`.
    pub fn form(
        &self,
        u: &FrameVector<T>,
        v: &FrameVector<T>,
        w: &FrameVector<T>,
        z: &FrameVector<T>,
    ) -> T {
        inner(&self.apply(u, v, w), z)
    }

    /// `⟨R(u,v)v,u⟩ / ‖u∧v‖²` for the given spanning pair.
    pub fn sectional(&self, u: &FrameVector<T>, v: &FrameVector<T>) -> Result<T> {
        let w = wedge_norm_sq(u, v);
        if w < T::lit(DEGENERATE_WEDGE) {
            return Err(GeometryError::DegeneratePlane {
                wedge_norm_sq: w.to_f64_lossy(),
                threshold: DEGENERATE_WEDGE,
            });
        }
        Ok(self.form(u, v, v, u) / w)
    }

    pub fn biorthogonal(&self, plane: &TwoPlane<T>) -> Result<T> {
        let perp = orthogonal_complement(plane);
        let k = self.sectional(&plane.u, &plane.v)?;
        let k_perp = self.sectional(&perp.u, &perp.v)?;
        Ok(T::half() * (k + k_perp))
    }

    /// `½[⟨R(v₁,v₂)v₂,v₁⟩ + ⟨R(v₁,v₂)v₁,v₂⟩]` on the stored orthonormal pair.
    pub fn auxiliary_biorthogonal(&self, plane: &TwoPlane<T>) -> T {
        let (u, v) = (&plane.u, &plane.v);
        T::half() * (self.form(u, v, v, u) + self.form(u, v, u, v))
    }
}

/// `R(eᵢ, eⱼ)eₖ` at `p`.
pub fn riemann<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    i: usize,
    j: usize,
    k: usize,
    p: &Point<T>,
) -> FrameVector<T> {
    RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic).on_frame(i, j, k)
}

/// `R(u, v)w` at `p` for frame-constant vectors.
pub fn riemann_general<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    u: &FrameVector<T>,
    v: &FrameVector<T>,
    w: &FrameVector<T>,
    p: &Point<T>,
) -> FrameVector<T> {
    RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic).apply(u, v, w)
}

/// An oriented 2-plane stored as an orthonormal pair `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPlane<T> {
    pub u: FrameVector<T>,
    pub v: FrameVector<T>,
}

fn orthonormal_tolerance<T: Scalar>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

impl<T: Scalar> TwoPlane<T> {
    /// Accepts an already orthonormal pair.
    pub fn new(u: FrameVector<T>, v: FrameVector<T>) -> Result<Self> {
        let defect = (inner(&u, &u) - T::one())
            .abs()
            .max((inner(&v, &v) - T::one()).abs())
            .max(inner(&u, &v).abs());
        if defect > orthonormal_tolerance::<T>() {
            return Err(GeometryError::NotOrthonormal {
                defect: defect.to_f64_lossy(),
            });
        }
        Ok(TwoPlane { u, v })
    }

    /// Gram-Schmidt on an arbitrary spanning pair; orientation `u ∧ v` kept.
    pub fn from_span(u: &FrameVector<T>, v: &FrameVector<T>) -> Result<Self> {
        let w = wedge_norm_sq(u, v);
        let scale = inner(u, u) * inner(v, v);
        if w.is_nan() || w <= T::lit(DEGENERATE_WEDGE) * scale.max(T::one()) {
            return Err(GeometryError::DegeneratePlane {
                wedge_norm_sq: w.to_f64_lossy(),
                threshold: DEGENERATE_WEDGE,
            });
        }
        let e = u.normalized();
        let f = (*v - e * inner(&e, v)).normalized();
        Ok(TwoPlane { u: e, v: f })
    }

    /// `span(eᵢ, eⱼ)` with `(eᵢ, eⱼ)` as the stored pair.
    pub fn coordinate(i: usize, j: usize) -> Self {
        TwoPlane {
            u: FrameVector::basis(i),
            v: FrameVector::basis(j),
        }
    }

    /// Unit bivector `u ∧ v` as the antisymmetric matrix `u vᵀ − v uᵀ`.
    pub fn bivector(&self) -> [[T; DIM]; DIM] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| self.u[i] * self.v[j] - self.v[i] * self.u[j])
        })
    }

    /// Recovers an orthonormal pair from a unit simple bivector.
    ///
    /// The first vector is the normalized projection of the lowest-index frame
    /// vector whose projection exceeds `√ε` of the scalar type; the second
    /// is `−W u`, which keeps the bivector's orientation.
    pub fn from_bivector(w: &[[T; DIM]; DIM]) -> Self {
        let apply = |x: &FrameVector<T>| -> FrameVector<T> {
            FrameVector(std::array::from_fn(|i| {
                (0..DIM).fold(T::zero(), |acc, j| acc + w[i][j] * x[j])
            }))
        };
        // W x = u⟨v,x⟩ − v⟨u,x⟩; the projector onto the plane is −W².
        // Some frame vector always projects with norm ≥ 1/√2.
        let threshold = T::epsilon().sqrt();
        let mut fallback: Option<(T, FrameVector<T>)> = None;
        let mut chosen = None;
        for k in 0..DIM {
            let proj = -apply(&apply(&FrameVector::basis(k)));
            let n = proj.norm();
            if n > threshold {
                chosen = Some(proj);
                break;
            }
            if fallback.as_ref().is_none_or(|(m, _)| n > *m) {
                fallback = Some((n, proj));
            }
        }
        let proj = chosen.unwrap_or_else(|| fallback.expect("four candidates").1);
        let u = proj.normalized();
        let v = -apply(&u);
        TwoPlane {
            u,
            v: v.normalized(),
        }
    }

    /// Orthogonal projector `u uᵀ + v vᵀ`.
    pub fn projector(&self) -> [[T; DIM]; DIM] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| self.u[i] * self.u[j] + self.v[i] * self.v[j])
        })
    }

    /// Max-entry distance between the two projectors (zero iff same subspace).
    pub fn projector_distance(&self, other: &Self) -> T {
        let (p, q) = (self.projector(), other.projector());
        let mut worst = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                worst = worst.max((p[i][j] - q[i][j]).abs());
            }
        }
        worst
    }

    /// Same plane, basis rotated by `angle` within it.
    pub fn rotated(&self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        TwoPlane {
            u: self.u * c + self.v * s,
            v: self.v * c - self.u * s,
        }
    }

    pub fn contains(&self, x: &FrameVector<T>) -> bool {
        let residual = *x - self.u * inner(&self.u, x) - self.v * inner(&self.v, x);
        residual.norm() <= T::lit(1e-9) * x.norm().max(T::one())
    }
}

fn levi_civita_sign(idx: [usize; 4]) -> i8 {
    let mut sign = 1;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if idx[a] == idx[b] {
                return 0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `σ⊥` as the Hodge dual of the plane's unit bivector (orientation `e₁e₂e₃e₄`).
pub fn orthogonal_complement<T: Scalar>(plane: &TwoPlane<T>) -> TwoPlane<T> {
    let w = plane.bivector();
    let mut dual = [[T::zero(); DIM]; DIM];
    for (k, row) in dual.iter_mut().enumerate() {
        for (l, entry) in row.iter_mut().enumerate() {
            let mut acc = T::zero();
            for i in 0..DIM {
                for j in 0..DIM {
                    match levi_civita_sign([i, j, k, l]) {
                        1 => acc = acc + w[i][j],
                        -1 => acc = acc - w[i][j],
                        _ => {}
                    }
                }
            }
            *entry = acc * T::half();
        }
    }
    TwoPlane::from_bivector(&dual)
}

pub fn sectional<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    plane: &TwoPlane<T>,
    p: &Point<T>,
) -> Result<T> {
    RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic).sectional(&plane.u, &plane.v)
}

/// `½(K(σ) + K(σ⊥))`.
pub fn biorthogonal<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    plane: &TwoPlane<T>,
    p: &Point<T>,
) -> Result<T> {
    RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic).biorthogonal(plane)
}

/// `f(θ) = (½ + s)cos²θ + s·sin²θ` with `s = (a² + b²)/8`.
pub fn f_theta<T: Scalar>(params: &TorsionParams<T>, angle: T) -> T {
    let s = params.strength_sq() / T::lit(8.0);
    let (sn, cs) = angle.sin_cos();
    (T::half() + s) * cs * cs + s * sn * sn
}

/// `f'(θ) = −sinθ cosθ`, independent of the torsion strength.
pub fn f_theta_derivative<T: Scalar>(angle: T) -> T {
    let (sn, cs) = angle.sin_cos();
    -sn * cs
}

/// `span(e₁, cos t·e₂ + sin t·e₃)`: at `t = 0` the pure sphere plane, at
/// `t = π/2` the mixed plane `span(e₁, e₃)`.
pub fn reduction_family_plane<T: Scalar>(t: T) -> TwoPlane<T> {
    let (s, c) = t.sin_cos();
    TwoPlane {
        u: FrameVector::basis(0),
        v: FrameVector::new(T::zero(), c, s, T::zero()),
    }
}

/// Points of the uniform grid on `[0, π/2]` used for the `f(θ)` family.
pub fn reduction_grid<T: Scalar>(n: usize) -> Vec<T> {
    let last = T::from_count(n.max(2) - 1);
    (0..n)
        .map(|i| T::FRAC_PI_2() * T::from_count(i) / last)
        .collect()
}

/// Sectional curvature in `n_bases` random orthonormal bases of one plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeDiagnostic<T> {
    pub spread: T,
    pub values: Vec<T>,
}

pub fn gauge_dependence_diagnostic<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    plane: &TwoPlane<T>,
    p: &Point<T>,
    n_bases: usize,
    seed: u64,
) -> Result<GaugeDiagnostic<T>> {
    if n_bases < 2 {
        return Err(GeometryError::InvalidConfig(format!(
            "gauge diagnostic needs at least two bases, got {n_bases}"
        )));
    }
    let tensor = RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(n_bases);
    for _ in 0..n_bases {
        let angle = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
        let basis = plane.rotated(angle);
        values.push(tensor.sectional(&basis.u, &basis.v)?);
    }
    let lo = values.iter().copied().fold(T::infinity(), T::min);
    let hi = values.iter().copied().fold(T::neg_infinity(), T::max);
    Ok(GaugeDiagnostic {
        spread: hi - lo,
        values,
    })
}

/// A computed value next to its closed-form expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checked<T> {
    pub computed: T,
    pub expected: T,
    pub abs_error: T,
    pub tolerance: T,
}

impl<T: Scalar> Checked<T> {
    pub fn new(computed: T, expected: T, tolerance: T) -> Self {
        Checked {
            computed,
            expected,
            abs_error: (computed - expected).abs(),
            tolerance,
        }
    }

    pub fn passes(&self) -> bool {
        self.abs_error <= self.tolerance
    }
}

/// Closed-form sectional values of the coordinate planes, in `COORDINATE_PLANES` order.
pub fn analytic_sectional<T: Scalar>(params: &TorsionParams<T>) -> [T; 6] {
    let four = T::lit(4.0);
    let (a2, b2) = (params.a * params.a / four, params.b * params.b / four);
    [T::one(), a2, a2, b2, b2, a2 + b2]
}

/// Closed-form biorthogonal values of the three coordinate pairings.
pub fn analytic_biorthogonal<T: Scalar>(params: &TorsionParams<T>) -> [T; 3] {
    let s = params.strength_sq() / T::lit(8.0);
    [s + T::half(), s, s]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrassmannSummary<T> {
    pub samples: usize,
    pub seed: u64,
    pub minimum: T,
    pub argmin: TwoPlane<T>,
    pub tolerance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeSummary<T> {
    pub plane: TwoPlane<T>,
    pub spread: T,
    pub tolerance: T,
}

/// Coordinate-plane curvature at one point, plus optional sampler and gauge results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport<T> {
    pub params: TorsionParams<T>,
    pub point: Point<T>,
    pub sectional: [Checked<T>; 6],
    pub biorthogonal: [Checked<T>; 3],
    pub auxiliary_biorthogonal: [T; 3],
    pub f_minimum: Checked<T>,
    pub f_argmin: T,
    pub grassmann: Option<GrassmannSummary<T>>,
    pub gauge: Option<GaugeSummary<T>>,
}

impl<T: Scalar> CurvatureReport<T> {
    pub fn all_coordinate_checks_pass(&self) -> bool {
        self.sectional
            .iter()
            .chain(self.biorthogonal.iter())
            .all(Checked::passes)
            && self.f_minimum.passes()
    }
}

/// Number of points in the `f(θ)` grid.
pub const REDUCTION_GRID_POINTS: usize = 181;

pub fn coordinate_plane_report<T: Scalar>(
    conn: &ConnectionCoefficients<T>,
    p: &Point<T>,
    params: &TorsionParams<T>,
    tolerance: T,
) -> Result<CurvatureReport<T>> {
    let tensor = RiemannTensor::evaluate(conn, p, DerivativeMode::Analytic);
    let expected_k = analytic_sectional(params);
    let mut sectional = [Checked::new(T::zero(), T::zero(), tolerance); 6];
    for (slot, &(i, j)) in COORDINATE_PLANES.iter().enumerate() {
        let plane = TwoPlane::coordinate(i, j);
        sectional[slot] = Checked::new(
            tensor.sectional(&plane.u, &plane.v)?,
            expected_k[slot],
            tolerance,
        );
    }
    let expected_b = analytic_biorthogonal(params);
    let mut biorth = [Checked::new(T::zero(), T::zero(), tolerance); 3];
    let mut auxiliary = [T::zero(); 3];
    for (slot, &((i, j), _)) in COORDINATE_PAIRINGS.iter().enumerate() {
        let plane = TwoPlane::coordinate(i, j);
        biorth[slot] = Checked::new(tensor.biorthogonal(&plane)?, expected_b[slot], tolerance);
        auxiliary[slot] = tensor.auxiliary_biorthogonal(&plane);
    }
    let grid = reduction_grid::<T>(REDUCTION_GRID_POINTS);
    let (f_argmin, f_min) = grid.iter().map(|&t| (t, f_theta(params, t))).fold(
        (T::zero(), T::infinity()),
        |best, cand| if cand.1 < best.1 { cand } else { best },
    );
    Ok(CurvatureReport {
        params: *params,
        point: *p,
        sectional,
        biorthogonal: biorth,
        auxiliary_biorthogonal: auxiliary,
        f_minimum: Checked::new(f_min, expected_b[1], tolerance),
        f_argmin,
        grassmann: None,
        gauge: None,
    })
}
