//! Run configuration, verdicts and the report-producing commands behind the CLI.
//!
//! Every command returns a [`ReportDocument`] with exactly three top-level
//! fields: `config`, `verdicts` and `timings`. Timings are only filled in when
//! asked for, so that the default JSON output is byte-stable for a fixed
//! configuration.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cohomology::{
    harmonicity_norms, hodge_residual_report, interior_grid, kunneth_class, sphere_area,
    torsion_lowering_crosscheck, CycleKind, CycleSpec, MIN_GRID, REFERENCE_THETA,
};
use crate::connection::{
    affine_coefficients, metric_compatibility_defect, recover_torsion, torsion_tensor,
    ConnectionCoefficients, TorsionParams,
};
use crate::curvature::{
    analytic_biorthogonal, analytic_sectional, f_theta, gauge_dependence_diagnostic,
    orthogonal_complement, reduction_family_plane, reduction_grid, DerivativeMode, RiemannTensor,
    TwoPlane, COORDINATE_PAIRINGS, COORDINATE_PLANES, REDUCTION_GRID_POINTS,
};
use crate::error::{GeometryError, Result};
use crate::forms::{coframe_derivative, exterior_derivative_coordinate_oracle, KForm};
use crate::frame::{Point, DIM};
use crate::grassmann::grassmannian_min;

/// Colatitudes swept for the coordinate-plane checks.
pub const THETA_SWEEP_POINTS: usize = 9;
/// Side of the interior grid used for harmonicity and residual norms.
pub const FORM_GRID: usize = 20;
/// A residual norm above this counts as nonzero.
pub const RESIDUAL_THRESHOLD: f64 = 1e-3;
/// Agreement required between a sampled minimum and the closed form.
pub const SAMPLED_MINIMUM_TOLERANCE: f64 = 1e-4;
/// Bases drawn for the gauge diagnostic on the argmin plane.
pub const GAUGE_BASES: usize = 64;

const CONVENTIONS: [&str; 5] = [
    "frame e1 = d/dtheta, e2 = (1/sin theta) d/dphi, e3 = d/dx, e4 = d/dy",
    "nabla_{e_i} e_j = Gamma^k_{ij} e_k, Gamma = Gamma^LC + T/2",
    "orientation e1*^e2*^e3*^e4*, *e_I = s e_J with e_I ^ e_J = s vol",
    "codifferential delta = -*d* in every degree",
    "sectional curvature <R(u,v)v,u> on the stored orthonormal pair; complement pair from the Hodge dual",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "json")]
    Json,
    #[serde(rename = "md")]
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            other => Err(GeometryError::InvalidConfig(format!(
                "unknown format {other:?} (json or md)"
            ))),
        }
    }
}

/// Quadrature sizes `n_theta x n_phi x n_circle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub n_circle: usize,
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid {
            n_theta: 64,
            n_phi: 64,
            n_circle: 64,
        }
    }
}

impl QuadratureGrid {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.n_theta, self.n_phi, self.n_circle)
    }
}

impl FromStr for QuadratureGrid {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GeometryError::InvalidConfig(format!("grid {s:?} is not of the form NxMxK"));
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut n = [0usize; 3];
        for (slot, part) in n.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|_| bad())?;
        }
        Ok(QuadratureGrid {
            n_theta: n[0],
            n_phi: n[1],
            n_circle: n[2],
        })
    }
}

impl fmt::Display for QuadratureGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.n_theta, self.n_phi, self.n_circle)
    }
}

impl Serialize for QuadratureGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadratureGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Stdout sentinel for `output_path`.
pub const STDOUT: &str = "-";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub seed: u64,
    pub samples: usize,
    pub epsilon: f64,
    pub grid: QuadratureGrid,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub output_path: String,
    pub allow_trivial: bool,
    /// Record wall-clock stage timings (makes the output run-dependent).
    pub record_timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            a: 1.0,
            b: 1.0,
            seed: 42,
            samples: 100_000,
            epsilon: 0.05,
            grid: QuadratureGrid::default(),
            tolerance: 1e-6,
            format: OutputFormat::Json,
            output_path: STDOUT.to_string(),
            allow_trivial: false,
            record_timings: false,
        }
    }
}

impl RunConfig {
    pub fn params(&self) -> TorsionParams<f64> {
        TorsionParams::new(self.a, self.b)
    }

    pub fn with_params(&self, a: f64, b: f64) -> Self {
        RunConfig {
            a,
            b,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(GeometryError::InvalidConfig(m));
        if !self.a.is_finite() || !self.b.is_finite() {
            return invalid(format!(
                "torsion parameters must be finite, got ({}, {})",
                self.a, self.b
            ));
        }
        if self.samples < 1 {
            return invalid("samples must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return invalid(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return invalid(format!(
                "epsilon must lie in (0, 0.5), got {}",
                self.epsilon
            ));
        }
        let g = self.grid;
        if g.n_theta < MIN_GRID || g.n_phi < MIN_GRID || g.n_circle < MIN_GRID {
            return Err(GeometryError::GridTooSmall(g.to_string()));
        }
        self.check_params(self.a, self.b)
    }

    fn check_params(&self, a: f64, b: f64) -> Result<()> {
        if a == 0.0 && b == 0.0 && !self.allow_trivial {
            return Err(GeometryError::InvalidConfig(
                "(a, b) = (0, 0) has no torsion and the positivity statement needs a^2 + b^2 > 0; \
                 pass --allow-trivial to run it anyway"
                    .into(),
            ));
        }
        Ok(())
    }

    fn cycle(&self, kind: CycleKind) -> CycleSpec {
        CycleSpec {
            kind,
            n_theta: self.grid.n_theta,
            n_phi: self.grid.n_phi,
            n_circle: self.grid.n_circle,
            epsilon: self.epsilon,
        }
    }

    fn reference_point(&self) -> Point<f64> {
        Point::new(REFERENCE_THETA, 0.0, 0.0, 0.0).expect("reference colatitude is interior")
    }

    /// `THETA_SWEEP_POINTS` colatitudes spread over `[ε, π−ε]`, with the other
    /// coordinates varied so no chart coordinate stays fixed.
    fn sweep_points(&self) -> Vec<Point<f64>> {
        let n = THETA_SWEEP_POINTS;
        let span = std::f64::consts::PI - 2.0 * self.epsilon;
        (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                Point::new(
                    self.epsilon + span * s,
                    0.7 * i as f64,
                    0.13 * i as f64,
                    0.29 * i as f64,
                )
                .expect("sweep stays inside the chart")
            })
            .collect()
    }
}

/// The `config` block of a report: what was run and under which conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub command: String,
    pub a: f64,
    pub b: f64,
    pub seed: u64,
    pub samples: usize,
    pub epsilon: f64,
    pub grid: QuadratureGrid,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub allow_trivial: bool,
    pub reference_theta: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<(f64, f64)>,
    pub conventions: Vec<String>,
}

impl ConfigRecord {
    fn new(command: &str, cfg: &RunConfig) -> Self {
        ConfigRecord {
            command: command.to_string(),
            a: cfg.a,
            b: cfg.b,
            seed: cfg.seed,
            samples: cfg.samples,
            epsilon: cfg.epsilon,
            grid: cfg.grid,
            tolerance: cfg.tolerance,
            format: cfg.format,
            allow_trivial: cfg.allow_trivial,
            reference_theta: REFERENCE_THETA,
            sweep: Vec::new(),
            conventions: CONVENTIONS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    Mismatch,
    DocumentedDiscrepancy,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Match => "match",
            Status::Mismatch => "mismatch",
            Status::DocumentedDiscrepancy => "documented_discrepancy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationVerdict {
    pub claim: String,
    /// The statement being checked, as a formula.
    pub anchor: String,
    pub computed: Value,
    pub expected: Value,
    pub tolerance: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl VerificationVerdict {
    fn scalar(
        claim: impl Into<String>,
        anchor: &str,
        computed: f64,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        let status = if (computed - expected).abs() <= tolerance {
            Status::Match
        } else {
            Status::Mismatch
        };
        VerificationVerdict {
            claim: claim.into(),
            anchor: anchor.to_string(),
            computed: json!(computed),
            expected: json!(expected),
            tolerance,
            status,
            note: String::new(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub config: ConfigRecord,
    pub verdicts: Vec<VerificationVerdict>,
    /// Stage name to seconds; empty unless timings were requested.
    pub timings: BTreeMap<String, f64>,
}

impl ReportDocument {
    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }

    pub fn verdict(&self, claim: &str) -> Option<&VerificationVerdict> {
        self.verdicts.iter().find(|v| v.claim == claim)
    }

    /// 0 when nothing mismatches, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Mismatch) == 0 {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| GeometryError::InvalidConfig(format!("report does not parse: {e}")))
    }

    pub fn to_markdown(&self) -> String {
        render_markdown(self)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }
}

struct Timings {
    enabled: bool,
    stages: BTreeMap<String, f64>,
}

impl Timings {
    fn new(enabled: bool) -> Self {
        Timings {
            enabled,
            stages: BTreeMap::new(),
        }
    }

    fn stage<R>(&mut self, name: &str, f: impl FnOnce() -> Result<R>) -> Result<R> {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.stages
                .insert(name.to_string(), start.elapsed().as_secs_f64());
        }
        out
    }
}

fn tag(claim: &str) -> impl Fn(GeometryError) -> GeometryError + '_ {
    move |e| match e {
        GeometryError::Numerical { .. } => e,
        other => GeometryError::Numerical {
            claim: claim.to_string(),
            detail: other.to_string(),
        },
    }
}

fn ensure_finite(claim: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(GeometryError::Numerical {
            claim: claim.to_string(),
            detail: format!("non-finite value in {values:?}"),
        })
    }
}

fn plane_label(i: usize, j: usize) -> String {
    format!("e{}e{}", i + 1, j + 1)
}

const SECTIONAL_ANCHORS: [&str; 6] = [
    "K(span(e1,e2)) = 1",
    "K(span(e1,e3)) = a^2/4",
    "K(span(e1,e4)) = a^2/4",
    "K(span(e2,e3)) = b^2/4",
    "K(span(e2,e4)) = b^2/4",
    "K(span(e3,e4)) = (a^2+b^2)/4",
];

const PAIRING_ANCHORS: [&str; 3] = [
    "K_biort(span(e1,e2)) = (a^2+b^2+4)/8",
    "K_biort(span(e1,e3)) = (a^2+b^2)/8",
    "K_biort(span(e1,e4)) = (a^2+b^2)/8",
];

/// Coordinate-plane sectional values, the three pairings and the `f(θ)` minimum.
fn curvature_verdicts(
    cfg: &RunConfig,
    conn: &ConnectionCoefficients<f64>,
) -> Result<Vec<VerificationVerdict>> {
    let params = cfg.params();
    let tensors: Vec<(Point<f64>, RiemannTensor<f64>)> = cfg
        .sweep_points()
        .into_iter()
        .map(|p| {
            (
                p,
                RiemannTensor::evaluate(conn, &p, DerivativeMode::Analytic),
            )
        })
        .collect();
    let mut out = Vec::new();

    let expected_k = analytic_sectional(&params);
    for (slot, &(i, j)) in COORDINATE_PLANES.iter().enumerate() {
        let claim = format!("coordinate_plane.{}.sectional", plane_label(i, j));
        let plane = TwoPlane::coordinate(i, j);
        let mut worst = (-1.0, f64::NAN, 0.0);
        for (p, r) in &tensors {
            let k = r.sectional(&plane.u, &plane.v).map_err(tag(&claim))?;
            let err = (k - expected_k[slot]).abs();
            if err > worst.0 || err.is_nan() {
                worst = (err, k, p.theta);
            }
        }
        ensure_finite(&claim, &[worst.1])?;
        out.push(
            VerificationVerdict::scalar(
                &claim,
                SECTIONAL_ANCHORS[slot],
                worst.1,
                expected_k[slot],
                cfg.tolerance,
            )
            .with_note(format!(
                "worst of {THETA_SWEEP_POINTS} colatitudes in [eps, pi - eps], at theta = {:.6}",
                worst.2
            )),
        );
    }

    let expected_b = analytic_biorthogonal(&params);
    for (slot, &((i, j), (k, l))) in COORDINATE_PAIRINGS.iter().enumerate() {
        let claim = format!("biorthogonal.{}_{}", plane_label(i, j), plane_label(k, l));
        let plane = TwoPlane::coordinate(i, j);
        let mut worst = (-1.0, f64::NAN, 0.0);
        for (_, r) in &tensors {
            let value = r.biorthogonal(&plane).map_err(tag(&claim))?;
            let err = (value - expected_b[slot]).abs();
            if err > worst.0 || err.is_nan() {
                worst = (err, value, r.auxiliary_biorthogonal(&plane));
            }
        }
        ensure_finite(&claim, &[worst.1])?;
        out.push(
            VerificationVerdict::scalar(
                &claim,
                PAIRING_ANCHORS[slot],
                worst.1,
                expected_b[slot],
                cfg.tolerance,
            )
            .with_note(format!(
                "mean over the plane and its complement; the single-plane expression \
                     (<R(u,v)v,u> + <R(u,v)u,v>)/2 gives {:.12}",
                worst.2
            )),
        );
    }

    // f(θ) evaluated on the engine's curvature along the reduction family.
    let claim = "reduction.f_minimum";
    let p = cfg.reference_point();
    let tensor = RiemannTensor::evaluate(conn, &p, DerivativeMode::Analytic);
    let grid = reduction_grid::<f64>(REDUCTION_GRID_POINTS);
    let mut best = (f64::INFINITY, 0.0);
    let mut family_error = 0.0f64;
    for &t in &grid {
        let value = tensor
            .biorthogonal(&reduction_family_plane(t))
            .map_err(tag(claim))?;
        family_error = family_error.max((value - f_theta(&params, t)).abs());
        if value < best.0 {
            best = (value, t);
        }
    }
    ensure_finite(claim, &[best.0])?;
    let mut v = VerificationVerdict::scalar(
        claim,
        "min f(theta) on [0, pi/2] = f(pi/2) = (a^2+b^2)/8",
        best.0,
        expected_b[1],
        cfg.tolerance,
    )
    .with_note(format!(
        "{REDUCTION_GRID_POINTS}-point grid on span(e1, cos t e2 + sin t e3); argmin t = {:.12}; \
             max |K_biort - f| along the family = {family_error:.3e}",
        best.1
    ));
    // The argmin has to sit at the endpoint π/2 unless the torsion vanishes.
    let at_endpoint = (best.1 - std::f64::consts::FRAC_PI_2).abs() < 1e-12;
    if !params.is_levi_civita_limit() && !at_endpoint {
        v.status = Status::Mismatch;
    }
    out.push(v);
    Ok(out)
}

/// Sampled-plus-refined minimum of `K_biort` over Gr(2,4) against `(a²+b²)/8`.
fn grassmann_verdicts(
    cfg: &RunConfig,
    conn: &ConnectionCoefficients<f64>,
) -> Result<Vec<VerificationVerdict>> {
    let claim = "grassmannian.global_minimum";
    let params = cfg.params();
    let p = cfg.reference_point();
    let m = grassmannian_min(conn, &p, cfg.samples, cfg.seed).map_err(tag(claim))?;
    ensure_finite(claim, &[m.value, m.sampled_min])?;
    let expected = params.strength_sq() / 8.0;
    let tensor = RiemannTensor::evaluate(conn, &p, DerivativeMode::Analytic);
    let gauge = gauge_dependence_diagnostic(conn, &m.argmin, &p, GAUGE_BASES, cfg.seed)
        .map_err(tag(claim))?;
    let complement = orthogonal_complement(&m.argmin);
    let k_plane = tensor
        .sectional(&m.argmin.u, &m.argmin.v)
        .map_err(tag(claim))?;
    let k_perp = tensor
        .sectional(&complement.u, &complement.v)
        .map_err(tag(claim))?;
    let status = if (m.value - expected).abs() <= SAMPLED_MINIMUM_TOLERANCE {
        Status::Match
    } else {
        Status::Mismatch
    };
    let origin = serde_json::to_string(&m.origin).expect("origin serializes");
    Ok(vec![VerificationVerdict {
        claim: claim.to_string(),
        anchor: "min over all 2-planes of K_biort = (a^2+b^2)/8".to_string(),
        computed: json!({
            "minimum": m.value,
            "argmin": { "u": m.argmin.u.0, "v": m.argmin.v.0 },
            "sectional_plane": k_plane,
            "sectional_complement": k_perp,
        }),
        expected: json!(expected),
        tolerance: SAMPLED_MINIMUM_TOLERANCE,
        status,
        note: format!(
            "{} samples (seed {}) plus coordinate planes and the {REDUCTION_GRID_POINTS}-point reduction family, \
             then coordinate-descent refinement ({} iterations); coordinate min {:.12}, family min {:.12}, \
             sampled min {:.12}, best candidate {origin}; sectional spread over {GAUGE_BASES} bases of the \
             argmin plane {:.6}; single-plane expression at the argmin {:.12}",
            m.samples,
            cfg.seed,
            m.refine_iterations,
            m.coordinate_min,
            m.family_min,
            m.sampled_min,
            gauge.spread,
            tensor.auxiliary_biorthogonal(&m.argmin),
        ),
    }])
}

/// Torsion recovery, the metric-compatibility defect and the frame Γ²₁₂ entry.
fn connection_verdicts(
    cfg: &RunConfig,
    conn: &ConnectionCoefficients<f64>,
) -> Result<Vec<VerificationVerdict>> {
    let params = cfg.params();
    let points = cfg.sweep_points();
    let mut out = Vec::new();

    let claim = "connection.torsion_recovery";
    let mut worst = 0.0f64;
    for p in &points {
        for i in 0..DIM {
            for j in 0..DIM {
                let err =
                    (recover_torsion(conn, i, j, p) - torsion_tensor(&params, i, j)).max_abs();
                worst = worst.max(err);
            }
        }
    }
    ensure_finite(claim, &[worst])?;
    out.push(
        VerificationVerdict::scalar(
            claim,
            "nabla_X Y - nabla_Y X - [X,Y] = T(X,Y) on all 16 frame pairs",
            worst,
            0.0,
            cfg.tolerance,
        )
        .with_note(format!(
            "max component error over {THETA_SWEEP_POINTS} points"
        )),
    );

    let claim = "connection.metric_compatibility_defect";
    let defect = points
        .iter()
        .map(|p| metric_compatibility_defect(conn, p))
        .fold(0.0f64, f64::max);
    ensure_finite(claim, &[defect])?;
    let torsionful = !params.is_levi_civita_limit();
    let nonzero = defect > cfg.tolerance;
    let lowering = torsion_lowering_crosscheck(&params, 1e-12);
    out.push(VerificationVerdict {
        claim: claim.to_string(),
        anchor: "nabla g != 0 when a^2 + b^2 > 0".to_string(),
        computed: json!(defect),
        expected: if torsionful { json!("> 0") } else { json!(0.0) },
        tolerance: cfg.tolerance,
        status: if nonzero == torsionful { Status::Match } else { Status::Mismatch },
        note: format!(
            "max |Gamma^j_ik + Gamma^k_ij| over {THETA_SWEEP_POINTS} points; g(T(ei,ej),ek) differs from the \
             3-form a e134 + b e234 on {} index triples, all with {{i,j}} = {{3,4}}; that sign is the only \
             source of the defect",
            lowering.len()
        ),
    });

    out.push(gamma_discrepancy(cfg, conn));
    Ok(out)
}

fn gamma_discrepancy(cfg: &RunConfig, conn: &ConnectionCoefficients<f64>) -> VerificationVerdict {
    let p = cfg.reference_point();
    let cot = p.theta.cos() / p.theta.sin();
    // Indices are 0-based: Γ²₁₂ is (k, i, j) = (1, 0, 1).
    let g212 = conn.gamma(1, 0, 1, &p);
    let g221 = conn.gamma(1, 1, 0, &p);
    let status = if (g212 - cot).abs() <= cfg.tolerance {
        Status::Match
    } else {
        Status::DocumentedDiscrepancy
    };
    VerificationVerdict {
        claim: "connection.frame_gamma_2_12".to_string(),
        anchor: "Gamma^2_12 = Gamma^2_21 = cot(theta)".to_string(),
        computed: json!({ "gamma_2_12": g212, "gamma_2_21": g221 }),
        expected: json!({ "gamma_2_12": cot, "gamma_2_21": cot }),
        tolerance: cfg.tolerance,
        status,
        note: format!(
            "at theta = {:.6}; the listed table gives Gamma^2_12 - Gamma^2_21 = 0 while the frame commutator \
             needs c^2_12 = -cot(theta) = {:.12}; the engine solves the torsion-free and metric conditions in \
             the frame, and K(span(e1,e2)) = 1 confirms it",
            p.theta, -cot
        ),
    }
}

/// Harmonicity of ω, residual norms and periods, class recovery and the
/// `cosθ` versus `cotθ` coefficients.
fn cohomology_verdicts(cfg: &RunConfig) -> Result<Vec<VerificationVerdict>> {
    let params = cfg.params();
    let grid = interior_grid::<f64>(FORM_GRID, cfg.epsilon);
    let mut out = Vec::new();

    let claim = "harmonic.d_omega";
    let h = harmonicity_norms(&params, &grid, cfg.epsilon).map_err(tag(claim))?;
    let d_norm = h.d_norm.max(h.d_norm_oracle);
    let delta_norm = h.delta_norm.max(h.delta_norm_oracle);
    ensure_finite(claim, &[d_norm, delta_norm])?;
    let grid_note = format!("sup over a {FORM_GRID}^3 interior grid, frame and coordinate routes");
    out.push(
        VerificationVerdict::scalar(
            claim,
            "d omega = 0, omega = a e123 + b e124",
            d_norm,
            0.0,
            cfg.tolerance,
        )
        .with_note(&grid_note),
    );
    out.push(
        VerificationVerdict::scalar(
            "harmonic.delta_omega",
            "delta omega = -*d*omega = 0",
            delta_norm,
            0.0,
            cfg.tolerance,
        )
        .with_note(&grid_note),
    );

    let claim = "residual.d_phi";
    let residual = hodge_residual_report(
        &params,
        &grid,
        cfg.epsilon,
        &cfg.cycle(CycleKind::SphereCrossX),
    )
    .map_err(tag(claim))?;
    let n = residual.norms;
    ensure_finite(
        claim,
        &[
            n.d_phi_norm_oracle,
            n.delta_phi_norm_oracle,
            n.period_x,
            n.period_y,
        ],
    )?;
    out.push(threshold_verdict(
        claim,
        "d Phi != 0 iff b != 0, Phi = T_flat - omega",
        n.d_phi_norm_oracle,
        params.b != 0.0,
        format!("coordinate route; frame route gives {:.12}", n.d_phi_norm),
    ));
    out.push(threshold_verdict(
        "residual.delta_phi",
        "delta Phi != 0 iff a != 0",
        n.delta_phi_norm_oracle,
        params.a != 0.0,
        format!(
            "coordinate route; frame route gives {:.12}",
            n.delta_phi_norm
        ),
    ));

    // For constant-in-torus components the L² projection of Φ onto the
    // harmonic forms e123, e124 equals its two periods divided by 4π.
    let claim = "residual.harmonic_part";
    let four_pi = 4.0 * std::f64::consts::PI;
    let coeffs = [n.period_x / four_pi, n.period_y / four_pi];
    let worst = coeffs[0].abs().max(coeffs[1].abs());
    out.push(VerificationVerdict {
        claim: claim.to_string(),
        anchor: "Phi = T_flat - omega has no harmonic component (Phi in im d + im delta)".to_string(),
        computed: json!(coeffs),
        expected: json!([0.0, 0.0]),
        tolerance: cfg.tolerance,
        status: if worst <= cfg.tolerance { Status::Match } else { Status::Mismatch },
        note: format!(
            "L2 projection of Phi onto the harmonic 3-forms (e123, e124); periods over S2 x S1_x and \
             S2 x S1_y are ({:.12}, {:.12}); T_flat has zero periods, so its harmonic part is 0 rather than omega",
            n.period_x, n.period_y
        ),
    });

    let claim = "cohomology.class_recovery";
    let class = kunneth_class(&params, cfg.grid.as_tuple(), cfg.tolerance).map_err(tag(claim))?;
    let area: f64 =
        sphere_area(cfg.grid.n_theta, cfg.grid.n_phi, cfg.epsilon).map_err(tag(claim))?;
    ensure_finite(claim, &[class.a, class.b, area])?;
    let err = (class.a - params.a).abs().max((class.b - params.b).abs());
    out.push(VerificationVerdict {
        claim: claim.to_string(),
        anchor: "[T] = [omega] = (a, b) in H2(S2) x H1(T2)".to_string(),
        computed: json!([class.a, class.b]),
        expected: json!([params.a, params.b]),
        tolerance: cfg.tolerance,
        status: if err <= cfg.tolerance {
            Status::Match
        } else {
            Status::Mismatch
        },
        note: format!(
            "periods over S2 x S1_x and S2 x S1_y divided by 4 pi on a {} grid; sphere area {:.15} \
             (4 pi = {:.15}){}",
            cfg.grid,
            area,
            4.0 * std::f64::consts::PI,
            if class.trivial { "; trivial class" } else { "" }
        ),
    });

    out.push(coefficient_discrepancy(cfg, &n)?);
    Ok(out)
}

fn threshold_verdict(
    claim: &str,
    anchor: &str,
    norm: f64,
    should_be_nonzero: bool,
    note: String,
) -> VerificationVerdict {
    let nonzero = norm > RESIDUAL_THRESHOLD;
    VerificationVerdict {
        claim: claim.to_string(),
        anchor: anchor.to_string(),
        computed: json!(norm),
        expected: if should_be_nonzero {
            json!("> 0")
        } else {
            json!(0.0)
        },
        tolerance: RESIDUAL_THRESHOLD,
        status: if nonzero == should_be_nonzero {
            Status::Match
        } else {
            Status::Mismatch
        },
        note,
    }
}

fn coefficient_discrepancy(
    cfg: &RunConfig,
    n: &crate::cohomology::ResidualNorms<f64>,
) -> Result<VerificationVerdict> {
    let claim = "exterior.cos_vs_cot_coefficients";
    let p = cfg.reference_point();
    let oracle =
        exterior_derivative_coordinate_oracle(&KForm::<f64>::basis(&[1])).map_err(tag(claim))?;
    let de2 = oracle.component_at(&[0, 1], &p);
    let frame = coframe_derivative::<f64>(1).component_at(&[0, 1], &p);
    let cos = p.theta.cos();
    let computed = [de2, n.d_phi_coefficient, n.delta_phi_coefficient];
    let expected = [
        cos,
        n.d_phi_coefficient_cos_claim,
        n.delta_phi_coefficient_cos_claim,
    ];
    ensure_finite(claim, &computed)?;
    let agree = computed
        .iter()
        .zip(&expected)
        .all(|(c, e)| (c - e).abs() <= cfg.tolerance);
    Ok(VerificationVerdict {
        claim: claim.to_string(),
        anchor: "d e2* = cos(theta) e12, d Phi = b cos(theta) vol, delta Phi = a cos(theta) e34".to_string(),
        computed: json!({
            "d_e2": de2,
            "d_phi_vol": n.d_phi_coefficient,
            "delta_phi_e34": n.delta_phi_coefficient,
        }),
        expected: json!({
            "d_e2": expected[0],
            "d_phi_vol": expected[1],
            "delta_phi_e34": expected[2],
        }),
        tolerance: cfg.tolerance,
        status: if agree { Status::Match } else { Status::DocumentedDiscrepancy },
        note: format!(
            "at theta = {:.6}: coordinate computation gives d e2* = cot(theta) e12 (frame route {frame:.12}), \
             d Phi = b cot(theta) vol and delta Phi = -a cot(theta) e34; both readings are reported",
            p.theta
        ),
    })
}

fn check_config(cfg: &RunConfig) -> Result<()> {
    cfg.validate()
}

fn document(
    command: &str,
    cfg: &RunConfig,
    verdicts: Vec<VerificationVerdict>,
    timings: Timings,
) -> ReportDocument {
    ReportDocument {
        config: ConfigRecord::new(command, cfg),
        verdicts,
        timings: timings.stages,
    }
}

/// The full pipeline: one verdict per claim.
pub fn cmd_reproduce(cfg: &RunConfig) -> Result<ReportDocument> {
    check_config(cfg)?;
    let mut timings = Timings::new(cfg.record_timings);
    let conn = affine_coefficients(cfg.params());
    let mut verdicts = timings.stage("curvature", || curvature_verdicts(cfg, &conn))?;
    verdicts.extend(timings.stage("grassmannian", || grassmann_verdicts(cfg, &conn))?);
    verdicts.extend(timings.stage("connection", || connection_verdicts(cfg, &conn))?);
    verdicts.extend(timings.stage("cohomology", || cohomology_verdicts(cfg))?);
    Ok(document("reproduce", cfg, verdicts, timings))
}

pub fn cmd_curvature_table(cfg: &RunConfig) -> Result<ReportDocument> {
    check_config(cfg)?;
    let mut timings = Timings::new(cfg.record_timings);
    let conn = affine_coefficients(cfg.params());
    let mut verdicts = timings.stage("curvature", || curvature_verdicts(cfg, &conn))?;
    verdicts.push(gamma_discrepancy(cfg, &conn));
    Ok(document("curvature-table", cfg, verdicts, timings))
}

pub fn cmd_grassmann_min(cfg: &RunConfig) -> Result<ReportDocument> {
    check_config(cfg)?;
    let mut timings = Timings::new(cfg.record_timings);
    let conn = affine_coefficients(cfg.params());
    let verdicts = timings.stage("grassmannian", || grassmann_verdicts(cfg, &conn))?;
    Ok(document("grassmann-min", cfg, verdicts, timings))
}

pub fn cmd_cohomology_check(cfg: &RunConfig) -> Result<ReportDocument> {
    check_config(cfg)?;
    let mut timings = Timings::new(cfg.record_timings);
    let verdicts = timings.stage("cohomology", || cohomology_verdicts(cfg))?;
    Ok(document("cohomology-check", cfg, verdicts, timings))
}

/// The 5×5 grid over `[−2, 2]²`, without `(0, 0)` unless trivial runs are allowed.
pub fn default_sweep(allow_trivial: bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let (a, b) = (i as f64 - 2.0, j as f64 - 2.0);
            if allow_trivial || a != 0.0 || b != 0.0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Parses `a:b,a:b,...`.
pub fn parse_sweep_points(s: &str) -> Result<Vec<(f64, f64)>> {
    let bad = |item: &str| {
        GeometryError::InvalidConfig(format!("sweep point {item:?} is not of the form a:b"))
    };
    s.split(',')
        .filter(|item| !item.trim().is_empty())
        .map(|item| {
            let (a, b) = item.split_once(':').ok_or_else(|| bad(item))?;
            let a: f64 = a.trim().parse().map_err(|_| bad(item))?;
            let b: f64 = b.trim().parse().map_err(|_| bad(item))?;
            Ok((a, b))
        })
        .collect()
}

/// Per-(a,b) analytic minimum, sampled minimum and class coefficients.
pub fn cmd_sweep(cfg: &RunConfig, points: &[(f64, f64)]) -> Result<ReportDocument> {
    if points.is_empty() {
        return Err(GeometryError::InvalidConfig(
            "sweep needs at least one (a, b) point".into(),
        ));
    }
    let first = cfg.with_params(points[0].0, points[0].1);
    first.validate()?;
    for &(a, b) in points {
        if !a.is_finite() || !b.is_finite() {
            return Err(GeometryError::InvalidConfig(format!(
                "sweep point ({a}, {b}) is not finite"
            )));
        }
        cfg.check_params(a, b)?;
    }
    let mut timings = Timings::new(cfg.record_timings);
    let mut verdicts = Vec::new();
    let mut analytic_column = Vec::with_capacity(points.len());
    for &(a, b) in points {
        let row = cfg.with_params(a, b);
        let params = row.params();
        let label = format!("sweep[a={a},b={b}]");
        let conn = affine_coefficients(params);
        let p = row.reference_point();
        let expected = params.strength_sq() / 8.0;

        let claim = format!("{label}.analytic_minimum");
        let tensor = RiemannTensor::evaluate(&conn, &p, DerivativeMode::Analytic);
        let mut analytic = f64::INFINITY;
        for &((i, j), _) in COORDINATE_PAIRINGS.iter() {
            analytic = analytic.min(
                tensor
                    .biorthogonal(&TwoPlane::coordinate(i, j))
                    .map_err(tag(&claim))?,
            );
        }
        ensure_finite(&claim, &[analytic])?;
        analytic_column.push((params.strength_sq(), analytic));
        verdicts.push(
            VerificationVerdict::scalar(
                &claim,
                "min over coordinate pairings = (a^2+b^2)/8",
                analytic,
                expected,
                cfg.tolerance,
            )
            .with_note("engine curvature on the three coordinate pairings"),
        );

        let claim = format!("{label}.sampled_minimum");
        let m = timings.stage(&claim, || {
            grassmannian_min(&conn, &p, row.samples, row.seed).map_err(tag(&claim))
        })?;
        ensure_finite(&claim, &[m.value])?;
        let mut v = VerificationVerdict::scalar(
            &claim,
            "min over all 2-planes of K_biort = (a^2+b^2)/8",
            m.value,
            expected,
            SAMPLED_MINIMUM_TOLERANCE,
        )
        .with_note(format!(
            "{} samples, seed {}, refined",
            row.samples, row.seed
        ));
        v.tolerance = SAMPLED_MINIMUM_TOLERANCE;
        verdicts.push(v);

        let claim = format!("{label}.class");
        let class =
            kunneth_class(&params, row.grid.as_tuple(), row.tolerance).map_err(tag(&claim))?;
        ensure_finite(&claim, &[class.a, class.b])?;
        let err = (class.a - a).abs().max((class.b - b).abs());
        verdicts.push(VerificationVerdict {
            claim,
            anchor: "[T] = (a, b)".to_string(),
            computed: json!([class.a, class.b]),
            expected: json!([a, b]),
            tolerance: cfg.tolerance,
            status: if err <= cfg.tolerance {
                Status::Match
            } else {
                Status::Mismatch
            },
            note: if class.trivial {
                "trivial class".to_string()
            } else {
                String::new()
            },
        });
    }

    let mut sorted = analytic_column.clone();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let violations = sorted
        .windows(2)
        .filter(|w| w[1].0 > w[0].0 && w[1].1 + cfg.tolerance < w[0].1)
        .count();
    verdicts.push(VerificationVerdict {
        claim: "sweep.analytic_monotone".to_string(),
        anchor: "(a^2+b^2)/8 is increasing in a^2+b^2".to_string(),
        computed: json!(violations),
        expected: json!(0),
        tolerance: cfg.tolerance,
        status: if violations == 0 {
            Status::Match
        } else {
            Status::Mismatch
        },
        note: format!(
            "{} rows ordered by a^2+b^2; count of decreasing steps",
            sorted.len()
        ),
    });

    let mut doc = document("sweep", cfg, verdicts, timings);
    doc.config.sweep = points.to_vec();
    Ok(doc)
}

fn format_value(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.12}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "({})",
            items
                .iter()
                .map(format_value)
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Value::Object(map) => map
            .iter()
            .filter(|(_, v)| !v.is_object())
            .map(|(k, v)| format!("{k} = {}", format_value(v)))
            .collect::<Vec<_>>()
            .join("; "),
        other => other.to_string(),
    }
}

fn section_title(claim: &str) -> &'static str {
    match claim.split('.').next().unwrap_or("") {
        "coordinate_plane" => "Sectional curvature of the coordinate planes",
        "biorthogonal" => "Biorthogonal curvature of the coordinate pairings",
        "reduction" | "grassmannian" => "Minimum of the biorthogonal curvature",
        "connection" => "Connection",
        "harmonic" | "residual" | "cohomology" | "exterior" => "Torsion 3-form and cohomology",
        c if c.starts_with("sweep") => "Parameter sweep",
        _ => "Other",
    }
}

fn render_markdown(doc: &ReportDocument) -> String {
    let c = &doc.config;
    let mut s = String::new();
    let _ = writeln!(s, "# `{}` report\n", c.command);
    let _ = writeln!(s, "| setting | value |\n|---|---|");
    let _ = writeln!(s, "| (a, b) | ({}, {}) |", c.a, c.b);
    let _ = writeln!(s, "| samples | {} |", c.samples);
    let _ = writeln!(s, "| seed | {} |", c.seed);
    let _ = writeln!(s, "| epsilon | {} |", c.epsilon);
    let _ = writeln!(s, "| quadrature grid | {} |", c.grid);
    let _ = writeln!(s, "| tolerance | {:e} |", c.tolerance);
    let _ = writeln!(s, "| reference theta | {:.6} |", c.reference_theta);
    if !c.sweep.is_empty() {
        let pts: Vec<String> = c.sweep.iter().map(|(a, b)| format!("({a}, {b})")).collect();
        let _ = writeln!(s, "| sweep | {} |", pts.join(" "));
    }
    let _ = writeln!(s, "\nConventions:\n");
    for line in &c.conventions {
        let _ = writeln!(s, "- {line}");
    }

    let mut current = "";
    for v in &doc.verdicts {
        let title = section_title(&v.claim);
        if title != current {
            current = title;
            let _ = writeln!(s, "\n## {title}\n");
            let _ = writeln!(
                s,
                "| claim | statement | computed | expected | tolerance | status |"
            );
            let _ = writeln!(s, "|---|---|---|---|---|---|");
        }
        let _ = writeln!(
            s,
            "| `{}` | {} | {} | {} | {:e} | **{}** |",
            v.claim,
            v.anchor,
            format_value(&v.computed),
            format_value(&v.expected),
            v.tolerance,
            v.status
        );
    }

    let notes: Vec<&VerificationVerdict> =
        doc.verdicts.iter().filter(|v| !v.note.is_empty()).collect();
    if !notes.is_empty() {
        let _ = writeln!(s, "\n## Notes\n");
        for v in notes {
            let _ = writeln!(s, "- `{}`: {}", v.claim, v.note);
        }
    }
    let _ = writeln!(
        s,
        "\n**Summary:** {} match, {} mismatch, {} documented discrepancy",
        doc.count(Status::Match),
        doc.count(Status::Mismatch),
        doc.count(Status::DocumentedDiscrepancy)
    );
    if !doc.timings.is_empty() {
        let _ = writeln!(s, "\n## Timings\n");
        for (stage, secs) in &doc.timings {
            let _ = writeln!(s, "- {stage}: {secs:.3} s");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> RunConfig {
        RunConfig {
            samples: 2000,
            grid: "16x16x8".parse().unwrap(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn grid_parsing() {
        let g: QuadratureGrid = "64x32x8".parse().unwrap();
        assert_eq!(g.as_tuple(), (64, 32, 8));
        assert_eq!(g.to_string(), "64x32x8");
        assert!("64x32".parse::<QuadratureGrid>().is_err());
        assert!("axbxc".parse::<QuadratureGrid>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = [
            RunConfig {
                samples: 0,
                ..RunConfig::default()
            },
            RunConfig {
                tolerance: 0.0,
                ..RunConfig::default()
            },
            RunConfig {
                epsilon: 0.5,
                ..RunConfig::default()
            },
            RunConfig {
                grid: "4x64x64".parse().unwrap(),
                ..RunConfig::default()
            },
            RunConfig {
                a: 0.0,
                b: 0.0,
                ..RunConfig::default()
            },
            RunConfig {
                a: f64::NAN,
                ..RunConfig::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
        let trivial = RunConfig {
            a: 0.0,
            b: 0.0,
            allow_trivial: true,
            ..RunConfig::default()
        };
        assert!(trivial.validate().is_ok());
    }

    #[test]
    fn sweep_point_parsing() {
        assert_eq!(
            parse_sweep_points("1:0, 0:1,1.5:-2").unwrap(),
            vec![(1.0, 0.0), (0.0, 1.0), (1.5, -2.0)]
        );
        assert!(parse_sweep_points("1;0").is_err());
        assert_eq!(default_sweep(false).len(), 24);
        assert_eq!(default_sweep(true).len(), 25);
    }

    #[test]
    fn curvature_table_at_one_two() {
        let cfg = RunConfig {
            a: 1.0,
            b: 2.0,
            ..quick()
        };
        let doc = cmd_curvature_table(&cfg).unwrap();
        let v = doc.verdict("coordinate_plane.e3e4.sectional").unwrap();
        assert!((v.computed.as_f64().unwrap() - 1.25).abs() < 1e-12);
        assert_eq!(v.status, Status::Match);
        assert_eq!(doc.count(Status::Mismatch), 0);
        assert_eq!(doc.count(Status::DocumentedDiscrepancy), 1);
    }

    #[test]
    fn cohomology_check_recovers_class() {
        let cfg = RunConfig {
            a: 1.0,
            b: 0.0,
            ..quick()
        };
        let doc = cmd_cohomology_check(&cfg).unwrap();
        let v = doc.verdict("cohomology.class_recovery").unwrap();
        let c = v.computed.as_array().unwrap();
        assert!(
            (c[0].as_f64().unwrap() - 1.0).abs() < 1e-6 && c[1].as_f64().unwrap().abs() < 1e-12
        );
        // Φ keeps −ω as its harmonic part.
        let h = doc.verdict("residual.harmonic_part").unwrap();
        assert_eq!(h.status, Status::Mismatch);
        assert!((h.computed[0].as_f64().unwrap() + 1.0).abs() < 1e-6);
        assert_eq!(doc.count(Status::Mismatch), 1);
        assert_eq!(
            doc.verdict("exterior.cos_vs_cot_coefficients")
                .unwrap()
                .status,
            Status::DocumentedDiscrepancy
        );
    }

    #[test]
    fn reproduce_has_required_verdicts() {
        let doc = cmd_reproduce(&quick()).unwrap();
        assert!(doc.verdicts.len() >= 15);
        assert_eq!(doc.count(Status::DocumentedDiscrepancy), 2);
        let f = doc.verdict("reduction.f_minimum").unwrap();
        assert!((f.computed.as_f64().unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(f.status, Status::Match);
        let json = doc.to_json();
        let value: Value = serde_json::from_str(&json).unwrap();
        let mut keys: Vec<&String> = value.as_object().unwrap().keys().collect();
        keys.sort();
        assert_eq!(keys, ["config", "timings", "verdicts"]);
        assert_eq!(ReportDocument::from_json(&json).unwrap(), doc);
    }

    #[test]
    fn trivial_parameters_refused() {
        let cfg = RunConfig {
            a: 0.0,
            b: 0.0,
            ..quick()
        };
        assert!(matches!(
            cmd_reproduce(&cfg),
            Err(GeometryError::InvalidConfig(_))
        ));
        let ok = RunConfig {
            allow_trivial: true,
            ..cfg
        };
        let doc = cmd_sweep(&ok, &[(0.0, 0.0)]).unwrap();
        let v = doc.verdict("sweep[a=0,b=0].analytic_minimum").unwrap();
        assert_eq!(v.computed.as_f64().unwrap(), 0.0);
    }

    #[test]
    fn sweep_analytic_column() {
        let cfg = RunConfig {
            samples: 50,
            ..quick()
        };
        let doc = cmd_sweep(&cfg, &[(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]).unwrap();
        let col: Vec<f64> = ["sweep[a=1,b=0]", "sweep[a=0,b=1]", "sweep[a=1,b=1]"]
            .iter()
            .map(|l| {
                doc.verdict(&format!("{l}.analytic_minimum"))
                    .unwrap()
                    .computed
                    .as_f64()
                    .unwrap()
            })
            .collect();
        for (got, want) in col.iter().zip([0.125, 0.125, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert_eq!(
            doc.verdict("sweep.analytic_monotone").unwrap().status,
            Status::Match
        );
    }

    #[test]
    fn markdown_lists_every_verdict() {
        let doc = cmd_curvature_table(&quick()).unwrap();
        let md = doc.to_markdown();
        for v in &doc.verdicts {
            assert!(md.contains(&v.claim));
        }
        assert!(md.find("e1e2.sectional").unwrap() < md.find("e3e4.sectional").unwrap());
    }

    #[test]
    fn timings_only_when_requested() {
        assert!(cmd_grassmann_min(&quick()).unwrap().timings.is_empty());
        let cfg = RunConfig {
            record_timings: true,
            ..quick()
        };
        assert!(cmd_grassmann_min(&cfg)
            .unwrap()
            .timings
            .contains_key("grassmannian"));
    }
}
