//! The torsion 3-form, its harmonic candidate and residual, and period
//! integrals against the Künneth cycles `S² × S¹ₓ`, `S² × S¹ᵧ`.

use serde::{Deserialize, Serialize};

use crate::connection::{torsion_tensor, TorsionParams};
use crate::error::{GeometryError, Result};
use crate::field::{Expr, ScalarField};
use crate::forms::{
    codifferential, codifferential_oracle, exterior_derivative,
    exterior_derivative_coordinate_oracle, KForm,
};
use crate::frame::{inner, FrameVector, Point, DEFAULT_EPSILON, DIM};
use crate::quadrature::{gauss_legendre_on, pairwise_sum, periodic_trapezoid};
use crate::scalar::Scalar;

/// `T♭ = a e₁*∧e₃*∧e₄* + b e₂*∧e₃*∧e₄*`.
pub fn torsion_three_form<T: Scalar>(params: &TorsionParams<T>) -> KForm<T> {
    let a = KForm::basis(&[0, 2, 3]).scale(params.a);
    let b = KForm::basis(&[1, 2, 3]).scale(params.b);
    a.add(&b).expect("both degree 3")
}

/// `ω = a e₁*∧e₂*∧e₃* + b e₁*∧e₂*∧e₄*`.
pub fn harmonic_candidate<T: Scalar>(params: &TorsionParams<T>) -> KForm<T> {
    let a = KForm::basis(&[0, 1, 2]).scale(params.a);
    let b = KForm::basis(&[0, 1, 3]).scale(params.b);
    a.add(&b).expect("both degree 3")
}

/// One triple where `g(T(eᵢ,eⱼ),eₖ)` differs from the 3-form component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoweringMismatch<T> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub from_torsion: T,
    pub from_form: T,
}

/// Compares `g(T(eᵢ,eⱼ),eₖ)` with the alternating component `T♭(eᵢ,eⱼ,eₖ)`
/// on all 64 index triples.
pub fn torsion_lowering_crosscheck<T: Scalar>(
    params: &TorsionParams<T>,
    tolerance: T,
) -> Vec<LoweringMismatch<T>> {
    let form = torsion_three_form(params);
    let p = Point::equator();
    let mut out = Vec::new();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                let from_torsion = inner(&torsion_tensor(params, i, j), &FrameVector::basis(k));
                let from_form = alternating_component(&form, [i, j, k], &p);
                if (from_torsion - from_form).abs() > tolerance {
                    out.push(LoweringMismatch {
                        i,
                        j,
                        k,
                        from_torsion,
                        from_form,
                    });
                }
            }
        }
    }
    out
}

fn alternating_component<T: Scalar>(form: &KForm<T>, idx: [usize; 3], p: &Point<T>) -> T {
    if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
        return T::zero();
    }
    let mut sorted = idx;
    let mut sign = T::one();
    for a in 0..3 {
        for b in 0..(2 - a) {
            if sorted[b] > sorted[b + 1] {
                sorted.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    sign * form.component_at(&sorted, p)
}

/// `n³` grid over `θ ∈ [ε, π−ε]`, `φ ∈ [0, 2π)`, `x ∈ [0, 1)` at `y = 0`.
pub fn interior_grid<T: Scalar>(n: usize, epsilon: T) -> Vec<Point<T>> {
    let n = n.max(2);
    let span = T::PI() - epsilon - epsilon;
    let last = T::from_count(n - 1);
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        let theta = epsilon + span * T::from_count(i) / last;
        for j in 0..n {
            let phi = (T::PI() + T::PI()) * T::from_count(j) / T::from_count(n);
            for k in 0..n {
                let x = T::from_count(k) / T::from_count(n);
                out.push(Point::new(theta, phi, x, T::zero()).expect("theta inside chart"));
            }
        }
    }
    out
}

/// Sup-norms of `dω`, `δω` (frame route) over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HarmonicityNorms<T> {
    pub d_norm: T,
    pub delta_norm: T,
    pub d_norm_oracle: T,
    pub delta_norm_oracle: T,
}

pub fn harmonicity_norms<T: Scalar>(
    params: &TorsionParams<T>,
    grid: &[Point<T>],
    epsilon: T,
) -> Result<HarmonicityNorms<T>> {
    let omega = harmonic_candidate(params);
    Ok(HarmonicityNorms {
        d_norm: exterior_derivative(&omega)?.sup_norm(grid, epsilon)?,
        delta_norm: codifferential(&omega)?.sup_norm(grid, epsilon)?,
        d_norm_oracle: exterior_derivative_coordinate_oracle(&omega)?.sup_norm(grid, epsilon)?,
        delta_norm_oracle: codifferential_oracle(&omega)?.sup_norm(grid, epsilon)?,
    })
}

/// Numbers reported for `Φ = T♭ − ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms<T> {
    pub phi_norm: T,
    pub d_phi_norm: T,
    pub d_phi_norm_oracle: T,
    pub delta_phi_norm: T,
    pub delta_phi_norm_oracle: T,
    /// Reference colatitude for the coefficient comparison below.
    pub reference_theta: T,
    /// `dΦ / vol` from the engine at the reference point (`b·cotθ`).
    pub d_phi_coefficient: T,
    /// `b·cosθ` at the reference point.
    pub d_phi_coefficient_cos_claim: T,
    /// `δΦ / (e₃*∧e₄*)` from the engine at the reference point (`−a·cotθ`).
    pub delta_phi_coefficient: T,
    /// `a·cosθ` at the reference point.
    pub delta_phi_coefficient_cos_claim: T,
    pub period_x: T,
    pub period_y: T,
}

#[derive(Debug, Clone)]
pub struct ResidualReport<T> {
    pub phi: KForm<T>,
    pub d_phi: KForm<T>,
    pub delta_phi: KForm<T>,
    pub norms: ResidualNorms<T>,
}

/// Fixed colatitude where the `cosθ` and `cotθ` readings are compared.
pub const REFERENCE_THETA: f64 = std::f64::consts::FRAC_PI_3;

pub fn hodge_residual_report<T: Scalar>(
    params: &TorsionParams<T>,
    grid: &[Point<T>],
    epsilon: T,
    quadrature: &CycleSpec,
) -> Result<ResidualReport<T>> {
    let phi = torsion_three_form(params).sub(&harmonic_candidate(params))?;
    let d_phi = exterior_derivative(&phi)?;
    let delta_phi = codifferential(&phi)?;
    let d_phi_oracle = exterior_derivative_coordinate_oracle(&phi)?;
    let delta_phi_oracle = codifferential_oracle(&phi)?;
    let reference = Point::new(T::lit(REFERENCE_THETA), T::zero(), T::zero(), T::zero())?;
    let cos_ref = reference.theta.cos();
    let x_cycle = CycleSpec {
        kind: CycleKind::SphereCrossX,
        ..*quadrature
    };
    let y_cycle = CycleSpec {
        kind: CycleKind::SphereCrossY,
        ..*quadrature
    };
    let norms = ResidualNorms {
        phi_norm: phi.sup_norm(grid, epsilon)?,
        d_phi_norm: d_phi.sup_norm(grid, epsilon)?,
        d_phi_norm_oracle: d_phi_oracle.sup_norm(grid, epsilon)?,
        delta_phi_norm: delta_phi.sup_norm(grid, epsilon)?,
        delta_phi_norm_oracle: delta_phi_oracle.sup_norm(grid, epsilon)?,
        reference_theta: reference.theta,
        d_phi_coefficient: d_phi.component_at(&[0, 1, 2, 3], &reference),
        d_phi_coefficient_cos_claim: params.b * cos_ref,
        delta_phi_coefficient: delta_phi.component_at(&[2, 3], &reference),
        delta_phi_coefficient_cos_claim: params.a * cos_ref,
        period_x: period_integral(&phi, &x_cycle)?,
        period_y: period_integral(&phi, &y_cycle)?,
    };
    Ok(ResidualReport {
        phi,
        d_phi,
        delta_phi,
        norms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    SphereCrossX,
    SphereCrossY,
}

impl CycleKind {
    /// Frame index of the circle direction.
    fn circle_index(self) -> usize {
        match self {
            CycleKind::SphereCrossX => 2,
            CycleKind::SphereCrossY => 3,
        }
    }
}

/// A 3-cycle `S² × S¹` with its quadrature sizes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub kind: CycleKind,
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_circle: usize,
    /// Split point between the main θ rule and the polar caps.
    pub epsilon: f64,
}

pub const MIN_GRID: usize = 8;
pub const DEFAULT_GRID: (usize, usize, usize) = (64, 64, 64);

impl CycleSpec {
    pub fn new(kind: CycleKind, n_theta: usize, n_phi: usize, n_circle: usize) -> Result<Self> {
        let spec = CycleSpec {
            kind,
            n_theta,
            n_phi,
            n_circle,
            epsilon: DEFAULT_EPSILON,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_default_grid(kind: CycleKind) -> Self {
        let (a, b, c) = DEFAULT_GRID;
        CycleSpec::new(kind, a, b, c).expect("default grid is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_theta < MIN_GRID || self.n_phi < MIN_GRID || self.n_circle < MIN_GRID {
            return Err(GeometryError::GridTooSmall(format!(
                "{}x{}x{}",
                self.n_theta, self.n_phi, self.n_circle
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(GeometryError::InvalidConfig(format!(
                "cap split epsilon {} not in (0, 0.5)",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Period integral split into the main band and the polar-cap correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodBreakdown<T> {
    pub value: T,
    pub band: T,
    pub caps: T,
    /// `sup|f| · 2π · L · ε²` from `sinθ ≤ θ` on both caps, with the sup
    /// taken over the cap quadrature nodes.
    pub cap_bound: T,
}

/// `∫ α` over the cycle, pulled back with the round area element `sinθ dθ dφ`.
///
/// θ uses Gauss-Legendre on `[ε, π−ε]` plus separate Gauss-Legendre rules on
/// the two caps; φ and the circle use the periodic trapezoid rule.
pub fn period_integral_detailed<T: Scalar>(
    alpha: &KForm<T>,
    cycle: &CycleSpec,
) -> Result<PeriodBreakdown<T>> {
    cycle.validate()?;
    if alpha.degree() != 3 {
        return Err(GeometryError::WrongDegree {
            expected: "degree 3",
            found: alpha.degree(),
        });
    }
    let circle = cycle.kind.circle_index();
    let Some(component) =
        alpha.component(crate::forms::MultiIndex::from_indices(&[0, 1, circle]).expect("distinct"))
    else {
        return Ok(PeriodBreakdown {
            value: T::zero(),
            band: T::zero(),
            caps: T::zero(),
            cap_bound: T::zero(),
        });
    };
    let eps = T::lit(cycle.epsilon);
    let pi = T::PI();
    let phi_rule = periodic_trapezoid::<T>(cycle.n_phi, pi + pi);
    let circle_rule = periodic_trapezoid::<T>(cycle.n_circle, T::one());

    let integrate = |theta_rule: &[(T, T)], sup: &mut T| -> Result<T> {
        let mut rows = Vec::with_capacity(theta_rule.len());
        for &(theta, wt) in theta_rule {
            let mut inner_terms = Vec::with_capacity(phi_rule.len() * circle_rule.len());
            for &(phi, wp) in &phi_rule {
                for &(s, wc) in &circle_rule {
                    let (x, y) = if circle == 2 {
                        (s, T::zero())
                    } else {
                        (T::zero(), s)
                    };
                    let p = Point::new(theta, phi, x, y)?;
                    let f = component.eval(&p);
                    *sup = (*sup).max(f.abs());
                    inner_terms.push(f * wp * wc);
                }
            }
            rows.push(pairwise_sum(&inner_terms) * theta.sin() * wt);
        }
        Ok(pairwise_sum(&rows))
    };

    let mut band_sup = T::zero();
    let band = integrate(
        &gauss_legendre_on(cycle.n_theta, eps, pi - eps),
        &mut band_sup,
    )?;
    let mut cap_sup = T::zero();
    let north = integrate(
        &gauss_legendre_on(cycle.n_theta, T::zero(), eps),
        &mut cap_sup,
    )?;
    let south = integrate(
        &gauss_legendre_on(cycle.n_theta, pi - eps, pi),
        &mut cap_sup,
    )?;
    let caps = north + south;
    let cap_bound = cap_sup * (pi + pi) * eps * eps;
    if !band.is_finite() || !caps.is_finite() {
        return Err(GeometryError::Numerical {
            claim: "period integral".into(),
            detail: "non-finite quadrature sum".into(),
        });
    }
    Ok(PeriodBreakdown {
        value: band + caps,
        band,
        caps,
        cap_bound,
    })
}

pub fn period_integral<T: Scalar>(alpha: &KForm<T>, cycle: &CycleSpec) -> Result<T> {
    Ok(period_integral_detailed(alpha, cycle)?.value)
}

/// `∫_{S²} e₁*∧e₂*` through the same quadrature (expected `4π`).
pub fn sphere_area<T: Scalar>(n_theta: usize, n_phi: usize, epsilon: f64) -> Result<T> {
    let cycle = CycleSpec {
        kind: CycleKind::SphereCrossX,
        n_theta,
        n_phi,
        n_circle: MIN_GRID,
        epsilon,
    };
    period_integral(&KForm::basis(&[0, 1, 2]), &cycle)
}

/// Class coefficients `(∫_{S²×S¹ₓ} ω, ∫_{S²×S¹ᵧ} ω) / 4π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KunnethClass<T> {
    pub a: T,
    pub b: T,
    pub trivial: bool,
}

pub fn kunneth_class<T: Scalar>(
    params: &TorsionParams<T>,
    grid: (usize, usize, usize),
    tolerance: T,
) -> Result<KunnethClass<T>> {
    let omega = harmonic_candidate(params);
    let four_pi = T::lit(4.0) * T::PI();
    let x = CycleSpec::new(CycleKind::SphereCrossX, grid.0, grid.1, grid.2)?;
    let y = CycleSpec::new(CycleKind::SphereCrossY, grid.0, grid.1, grid.2)?;
    let a = period_integral(&omega, &x)? / four_pi;
    let b = period_integral(&omega, &y)? / four_pi;
    Ok(KunnethClass {
        a,
        b,
        trivial: a.abs() <= tolerance && b.abs() <= tolerance,
    })
}

/// `cotθ` as a field, for callers building test forms.
pub fn cot_theta_field<T: Scalar>() -> ScalarField<T> {
    ScalarField::Analytic(Expr::cot_theta())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tp(a: f64, b: f64) -> TorsionParams<f64> {
        TorsionParams::new(a, b)
    }

    #[test]
    fn torsion_form_examples() {
        let p = Point::equator();
        let t = torsion_three_form(&tp(1.0, 0.0));
        assert_eq!(t.component_at(&[0, 2, 3], &p), 1.0);
        assert!(t
            .component(crate::forms::MultiIndex::from_indices(&[1, 2, 3]).unwrap())
            .is_none());
        assert!(torsion_three_form(&tp(0.0, 0.0)).is_structurally_zero());
        assert_eq!(
            torsion_three_form(&tp(5.0, 7.0)).component_at(&[1, 2, 3], &p),
            7.0
        );
        assert_eq!(
            harmonic_candidate(&tp(1.0, 0.0)).component_at(&[0, 1, 2], &p),
            1.0
        );
    }

    #[test]
    fn lowering_crosscheck_flags_only_the_flat_pair() {
        // g(T(e3,e4), e1) = −a while the alternating form gives T♭(e3,e4,e1) = +a.
        let mism = torsion_lowering_crosscheck(&tp(1.5, -2.0), 1e-12);
        assert!(!mism.is_empty());
        for m in &mism {
            let pair = [m.i.min(m.j), m.i.max(m.j)];
            assert_eq!(pair, [2, 3]);
            assert!((m.from_torsion + m.from_form).abs() < 1e-12);
        }
        assert_eq!(mism.len(), 4);
        assert!(torsion_lowering_crosscheck(&tp(0.0, 0.0), 1e-12).is_empty());
    }

    #[test]
    fn omega_is_harmonic() {
        let grid = interior_grid::<f64>(6, 0.05);
        let n = harmonicity_norms(&tp(1.3, -0.8), &grid, 0.05).unwrap();
        assert!(n.d_norm < 1e-12 && n.delta_norm < 1e-12);
        assert!(n.d_norm_oracle < 1e-12 && n.delta_norm_oracle < 1e-12);
    }

    #[test]
    fn residual_coefficients() {
        let grid = interior_grid::<f64>(6, 0.05);
        let q = CycleSpec::new(CycleKind::SphereCrossX, 16, 16, 8).unwrap();
        let r = hodge_residual_report(&tp(0.0, 1.0), &grid, 0.05, &q).unwrap();
        assert!(r.norms.d_phi_norm > 1e-3);
        assert!(r.norms.delta_phi_norm < 1e-9);
        let t = PI / 3.0;
        assert!((r.norms.d_phi_coefficient - t.cos() / t.sin()).abs() < 1e-12);
        assert!((r.norms.d_phi_coefficient_cos_claim - 0.5).abs() < 1e-12);
        let r = hodge_residual_report(&tp(1.0, 0.0), &grid, 0.05, &q).unwrap();
        assert!(r.norms.delta_phi_norm > 1e-3);
        assert!(r.norms.d_phi_norm < 1e-9);
        assert!((r.norms.delta_phi_coefficient + t.cos() / t.sin()).abs() < 1e-12);
        let r = hodge_residual_report(&tp(0.0, 0.0), &grid, 0.05, &q).unwrap();
        assert_eq!(r.norms.phi_norm, 0.0);
        assert_eq!(r.norms.d_phi_norm, 0.0);
        assert_eq!(r.norms.delta_phi_norm, 0.0);
    }

    #[test]
    fn period_examples() {
        let x = CycleSpec::with_default_grid(CycleKind::SphereCrossX);
        let y = CycleSpec::with_default_grid(CycleKind::SphereCrossY);
        let omega = harmonic_candidate(&tp(1.0, 0.0));
        assert!((period_integral(&omega, &x).unwrap() - 4.0 * PI).abs() < 1e-6);
        assert_eq!(period_integral(&omega, &y).unwrap(), 0.0);
        let t = torsion_three_form(&tp(2.0, -1.0));
        assert_eq!(period_integral(&t, &x).unwrap(), 0.0);
        assert_eq!(period_integral(&t, &y).unwrap(), 0.0);
    }

    #[test]
    fn cap_correction_is_within_analytic_bound() {
        let x = CycleSpec::with_default_grid(CycleKind::SphereCrossX);
        let b = period_integral_detailed(&harmonic_candidate(&tp(1.0, 0.0)), &x).unwrap();
        assert!(b.caps > 0.0 && b.caps <= b.cap_bound);
        // 2π · 2(1 − cos ε)
        assert!((b.caps - 4.0 * PI * (1.0 - 0.05f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn grid_and_degree_validation() {
        assert!(matches!(
            CycleSpec::new(CycleKind::SphereCrossX, 7, 64, 64),
            Err(GeometryError::GridTooSmall(_))
        ));
        let x = CycleSpec::with_default_grid(CycleKind::SphereCrossX);
        assert!(period_integral(&KForm::<f64>::basis(&[0, 1]), &x).is_err());
    }

    #[test]
    fn class_examples() {
        let c = kunneth_class(&tp(1.0, 2.0), DEFAULT_GRID, 1e-6).unwrap();
        assert!((c.a - 1.0).abs() < 1e-6 && (c.b - 2.0).abs() < 1e-6 && !c.trivial);
        let c = kunneth_class(&tp(0.0, 0.0), DEFAULT_GRID, 1e-6).unwrap();
        assert!(c.trivial && c.a == 0.0 && c.b == 0.0);
        let c = kunneth_class(&tp(3.0, 0.0), DEFAULT_GRID, 1e-6).unwrap();
        assert!((c.a - 3.0).abs() < 1e-6 && c.b.abs() < 1e-12);
    }

    #[test]
    fn sphere_area_calibration() {
        assert!((sphere_area::<f64>(64, 64, 0.05).unwrap() - 4.0 * PI).abs() < 1e-6);
    }
}
