use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::environment::{BathymetrySpec, SurfaceSpectrumParams, GRAVITY, PM_ALPHA, PM_BETA};
use crate::error::{Error, Result};
use crate::medium::{CoefficientProfile, MediumSpec, SOUND_SPEED_WATER};
use crate::milne::{MilneState, Scheme};
use crate::signal::SignalSpec;
use crate::solver::{SolverOptions, DEFAULT_ATOL, DEFAULT_DT, DEFAULT_MAX_STEPS, DEFAULT_RTOL};

/// Relative tolerance when more than one of `k`, `lambda`, `omega~` is given.
const CARRIER_CONSISTENCY_TOL: f64 = 1e-9;

/// Samples recorded per output row.
pub const DEFAULT_STRIDE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductKind {
    Trajectory,
    Summary,
    Envelope,
    Transition,
    Spectrum,
    Bathymetry,
}

impl ProductKind {
    pub const ALL: [ProductKind; 6] = [
        ProductKind::Trajectory,
        ProductKind::Summary,
        ProductKind::Envelope,
        ProductKind::Transition,
        ProductKind::Spectrum,
        ProductKind::Bathymetry,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProductKind::Trajectory => "trajectory",
            ProductKind::Summary => "summary",
            ProductKind::Envelope => "envelope",
            ProductKind::Transition => "transition",
            ProductKind::Spectrum => "spectrum",
            ProductKind::Bathymetry => "bathymetry",
        }
    }
}

impl std::fmt::Display for ProductKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_sound_speed() -> f64 {
    SOUND_SPEED_WATER
}

/// Carrier inputs; at least one of `wave_number`, `wavelength`, `angular_frequency`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalDocument {
    pub amplitude: f64,
    #[serde(default = "default_sound_speed")]
    pub sound_speed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_number: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_frequency: Option<f64>,
}

fn unit_frequency() -> CoefficientProfile {
    CoefficientProfile::constant(1.0)
}

fn no_damping() -> CoefficientProfile {
    CoefficientProfile::constant(0.0)
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumDocument {
    #[serde(default = "unit_frequency")]
    pub omega: CoefficientProfile,
    #[serde(default = "no_damping")]
    pub beta: CoefficientProfile,
    /// Lifts the positive-frequency checks. Only for probing degenerate fixed points.
    #[serde(default, skip_serializing_if = "is_false")]
    pub allow_nonpositive_omega: bool,
}

impl Default for MediumDocument {
    fn default() -> Self {
        MediumDocument {
            omega: unit_frequency(),
            beta: no_damping(),
            allow_nonpositive_omega: false,
        }
    }
}

fn default_stride() -> usize {
    DEFAULT_STRIDE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDocument {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    /// Integration steps per recorded output row.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Fixed,
    Adaptive,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_rtol() -> f64 {
    DEFAULT_RTOL
}

fn default_atol() -> f64 {
    DEFAULT_ATOL
}

fn default_max_steps() -> usize {
    DEFAULT_MAX_STEPS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDocument {
    #[serde(default)]
    pub method: Method,
    /// Fixed step; for the adaptive method, the spacing of the output grid.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup_threshold: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

impl Default for SolverDocument {
    fn default() -> Self {
        SolverDocument {
            method: Method::Fixed,
            dt: DEFAULT_DT,
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
            blowup_threshold: None,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialCondition {
    pub p0: f64,
    pub p_dot0: f64,
}

/// Explicit `E_M`, `delta`, `tau`, used instead of values extracted from the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicalParams {
    pub e_m: f64,
    pub delta: f64,
    pub tau: f64,
}

fn default_pm_alpha() -> f64 {
    PM_ALPHA
}

fn default_pm_beta() -> f64 {
    PM_BETA
}

fn default_gravity() -> f64 {
    GRAVITY
}

fn default_k_min() -> f64 {
    1e-3
}

fn default_k_max() -> f64 {
    10.0
}

fn default_samples() -> usize {
    512
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDocument {
    pub wind_speed: f64,
    #[serde(default = "default_pm_alpha")]
    pub alpha_pm: f64,
    #[serde(default = "default_pm_beta")]
    pub beta_pm: f64,
    #[serde(default = "default_gravity")]
    pub g: f64,
    #[serde(default = "default_k_min")]
    pub k_min: f64,
    #[serde(default = "default_k_max")]
    pub k_max: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl SpectrumDocument {
    pub fn params(&self) -> SurfaceSpectrumParams {
        SurfaceSpectrumParams {
            alpha_pm: self.alpha_pm,
            beta_pm: self.beta_pm,
            g: self.g,
            wind_speed: self.wind_speed,
        }
    }
}

fn default_bathymetry_dx() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathymetryDocument {
    pub zeta_max: f64,
    pub hill_spacing: f64,
    pub length: f64,
    #[serde(default = "default_bathymetry_dx")]
    pub dx: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_spectrum: Option<SpectrumDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bathymetry: Option<BathymetryDocument>,
}

fn default_outputs() -> Vec<ProductKind> {
    vec![
        ProductKind::Trajectory,
        ProductKind::Summary,
        ProductKind::Envelope,
        ProductKind::Transition,
    ]
}

/// The scenario file as written, with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub signal: SignalDocument,
    #[serde(default)]
    pub medium: MediumDocument,
    pub time: TimeDocument,
    #[serde(default)]
    pub solver: SolverDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_condition: Option<InitialCondition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamical_params: Option<DynamicalParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub environment: Option<EnvironmentDocument>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<ProductKind>,
}

/// A validated scenario. Only [`load_config`] and [`ScenarioConfig::from_document`]
/// construct one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    document: ScenarioDocument,
    signal: SignalSpec,
    medium: MediumSpec,
}

impl ScenarioConfig {
    /// Validates a document, reporting every violated invariant at once.
    pub fn from_document(document: ScenarioDocument) -> Result<Self> {
        let mut issues = Vec::new();

        let signal = resolve_signal(&document.signal, &mut issues);
        let c = document.signal.sound_speed;

        let medium = {
            let m = &document.medium;
            let built = if m.allow_nonpositive_omega {
                MediumSpec::with_unchecked_omega(m.omega.clone(), m.beta.clone(), c)
            } else {
                MediumSpec::new(m.omega.clone(), m.beta.clone(), c)
            };
            match built {
                Ok(medium) => Some(medium),
                Err(Error::Validation(v)) => {
                    // The sound speed is already reported by the signal block.
                    issues.extend(
                        v.into_iter()
                            .filter(|s| !s.starts_with("sound_speed"))
                            .map(|s| format!("medium.{s}")),
                    );
                    None
                }
                Err(e) => {
                    issues.push(format!("medium: {e}"));
                    None
                }
            }
        };

        let time = &document.time;
        if !(time.t0.is_finite() && time.t1.is_finite() && time.t1 > time.t0) {
            issues.push(format!(
                "time: t1 ({}) must be greater than t0 ({})",
                time.t1, time.t0
            ));
        }
        if time.stride == 0 {
            issues.push("time.stride must be at least 1".into());
        }

        let solver = &document.solver;
        if !(solver.dt > 0.0 && solver.dt.is_finite()) {
            issues.push(format!("solver.dt must be positive, got {}", solver.dt));
        }
        if !(solver.rtol > 0.0) {
            issues.push(format!("solver.rtol must be positive, got {}", solver.rtol));
        }
        if !(solver.atol > 0.0) {
            issues.push(format!("solver.atol must be positive, got {}", solver.atol));
        }
        if let Some(th) = solver.blowup_threshold {
            if !(th > 0.0) {
                issues.push(format!(
                    "solver.blowup_threshold must be positive, got {th}"
                ));
            }
        }
        if solver.max_steps == 0 {
            issues.push("solver.max_steps must be at least 1".into());
        }

        if let Some(ic) = &document.initial_condition {
            if !(ic.p0.is_finite() && ic.p_dot0.is_finite()) {
                issues.push("initial_condition must be finite".into());
            }
        }
        if let Some(dp) = &document.dynamical_params {
            if !(dp.e_m.is_finite() && dp.delta.is_finite()) {
                issues.push("dynamical_params.e_m and delta must be finite".into());
            }
            if !(dp.tau > 0.0 && dp.tau.is_finite()) {
                issues.push(format!(
                    "dynamical_params.tau must be positive, got {}",
                    dp.tau
                ));
            }
        }

        let env = document.environment.clone().unwrap_or_default();
        if let Some(s) = &env.surface_spectrum {
            issues.extend(
                s.params()
                    .issues()
                    .into_iter()
                    .map(|i| format!("environment.{i}")),
            );
            if !(s.k_min > 0.0 && s.k_max > s.k_min) {
                issues.push(format!(
                    "environment.surface_spectrum: need 0 < k_min < k_max, got [{}, {}]",
                    s.k_min, s.k_max
                ));
            }
            if s.samples < 2 {
                issues.push("environment.surface_spectrum.samples must be at least 2".into());
            }
        }
        if let Some(b) = &env.bathymetry {
            let spec = bathymetry_spec(b, document.seed);
            issues.extend(
                spec.issues()
                    .into_iter()
                    .map(|i| format!("environment.{i}")),
            );
        }

        let mut seen = BTreeSet::new();
        for p in &document.outputs {
            if !seen.insert(*p) {
                issues.push(format!("outputs: `{p}` listed more than once"));
            }
        }
        if seen.contains(&ProductKind::Spectrum) && env.surface_spectrum.is_none() {
            issues.push("outputs: `spectrum` needs environment.surface_spectrum".into());
        }
        if seen.contains(&ProductKind::Bathymetry) && env.bathymetry.is_none() {
            issues.push("outputs: `bathymetry` needs environment.bathymetry".into());
        }

        match (signal, medium) {
            (Some(signal), Some(medium)) if issues.is_empty() => Ok(ScenarioConfig {
                document,
                signal,
                medium,
            }),
            _ => Err(Error::Validation(issues)),
        }
    }

    pub fn document(&self) -> &ScenarioDocument {
        &self.document
    }

    pub fn signal(&self) -> &SignalSpec {
        &self.signal
    }

    pub fn medium(&self) -> &MediumSpec {
        &self.medium
    }

    pub fn t_span(&self) -> (f64, f64) {
        (self.document.time.t0, self.document.time.t1)
    }

    pub fn stride(&self) -> usize {
        self.document.time.stride
    }

    pub fn seed(&self) -> u64 {
        self.document.seed
    }

    /// Returns a copy with a different seed.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        out.document.seed = seed;
        out
    }

    /// Returns a copy integrated over a different time span.
    pub fn with_time_span(&self, t0: f64, t1: f64) -> Result<Self> {
        let mut doc = self.document.clone();
        doc.time.t0 = t0;
        doc.time.t1 = t1;
        ScenarioConfig::from_document(doc)
    }

    pub fn scheme(&self) -> Scheme {
        let s = &self.document.solver;
        match s.method {
            Method::Fixed => Scheme::Fixed { dt: s.dt },
            Method::Adaptive => Scheme::Adaptive {
                rtol: s.rtol,
                atol: s.atol,
            },
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            blowup_threshold: self.document.solver.blowup_threshold,
            max_steps: self.document.solver.max_steps,
        }
    }

    pub fn initial_condition(&self) -> MilneState {
        self.document
            .initial_condition
            .map(|ic| MilneState::new(ic.p0, ic.p_dot0))
            .unwrap_or_else(|| MilneState::at_amplitude(&self.signal))
    }

    pub fn dynamical_params(&self) -> Option<DynamicalParams> {
        self.document.dynamical_params
    }

    pub fn requests(&self, product: ProductKind) -> bool {
        self.document.outputs.contains(&product)
    }

    pub fn spectrum(&self) -> Option<&SpectrumDocument> {
        self.document
            .environment
            .as_ref()?
            .surface_spectrum
            .as_ref()
    }

    pub fn bathymetry(&self) -> Option<BathymetrySpec> {
        let b = self.document.environment.as_ref()?.bathymetry.as_ref()?;
        Some(bathymetry_spec(b, self.document.seed))
    }

    /// Output times `t0 + j stride dt` up to the last full stride, then `t1`.
    ///
    /// Matches the samples a completed fixed-step run keeps after striding.
    pub fn output_grid(&self) -> Vec<f64> {
        let (t0, t1) = self.t_span();
        let dt = self.document.solver.dt;
        let ratio = (t1 - t0) / dt;
        let steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
            ratio.round().max(1.0) as usize
        } else {
            ratio.ceil() as usize
        };
        let stride = self.stride();
        let mut grid: Vec<f64> = (0..steps)
            .step_by(stride)
            .map(|i| t0 + i as f64 * dt)
            .collect();
        grid.push(t1);
        grid
    }
}

fn bathymetry_spec(b: &BathymetryDocument, seed: u64) -> BathymetrySpec {
    BathymetrySpec {
        zeta_max: b.zeta_max,
        hill_spacing: b.hill_spacing,
        length: b.length,
        dx: b.dx,
        seed,
    }
}

fn resolve_signal(doc: &SignalDocument, issues: &mut Vec<String>) -> Option<SignalSpec> {
    let c = doc.sound_speed;
    let mut ok = true;
    if !(doc.amplitude > 0.0 && doc.amplitude.is_finite()) {
        issues.push(format!(
            "signal.amplitude must be positive, got {}",
            doc.amplitude
        ));
        ok = false;
    }
    if !(c > 0.0 && c.is_finite()) {
        issues.push(format!("signal.sound_speed must be positive, got {c}"));
        return None;
    }

    let mut candidates: Vec<(&str, f64)> = Vec::new();
    for (name, value, to_k) in [
        (
            "wave_number",
            doc.wave_number,
            (|v: f64, _c: f64| v) as fn(f64, f64) -> f64,
        ),
        ("wavelength", doc.wavelength, |v, _c| {
            std::f64::consts::TAU / v
        }),
        ("angular_frequency", doc.angular_frequency, |v, c| v / c),
    ] {
        if let Some(v) = value {
            if v > 0.0 && v.is_finite() {
                candidates.push((name, to_k(v, c)));
            } else {
                issues.push(format!("signal.{name} must be positive, got {v}"));
                ok = false;
            }
        }
    }
    if candidates.is_empty() {
        if ok {
            issues.push(
                "signal: one of wave_number, wavelength, angular_frequency is required".into(),
            );
        }
        return None;
    }
    let (first_name, k) = candidates[0];
    for &(name, other) in &candidates[1..] {
        if (other - k).abs() > CARRIER_CONSISTENCY_TOL * k {
            issues.push(format!(
                "signal.{first_name} and signal.{name} are inconsistent: k = {k} vs {other}"
            ));
            ok = false;
        }
    }
    if !ok {
        return None;
    }
    match SignalSpec::from_wave_number(doc.amplitude, c, k) {
        Ok(spec) => Some(spec),
        Err(e) => {
            issues.push(format!("signal: {e}"));
            None
        }
    }
}

/// Parses and validates a JSON scenario document.
pub fn load_config(text: &str) -> Result<ScenarioConfig> {
    let document: ScenarioDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    ScenarioConfig::from_document(document)
}

/// Serializes the config with every default written out.
pub fn save_config(config: &ScenarioConfig) -> String {
    let mut text = serde_json::to_string_pretty(&config.document)
        .expect("scenario documents always serialize");
    text.push('\n');
    text
}
