use serde::{Deserialize, Serialize};

use crate::environment::{bathymetry_profile, spectrum_sweep, BathymetrySample};
use crate::error::{Error, Result};
use crate::medium::{CoefficientProfile, MediumSpec};
use crate::milne::{
    envelope_q, estimate_period_phase, integrate_milne, milne_energy, violates_energy_bound,
    EnvelopeSample, PeriodPhase, SignalSummary,
};
use crate::signal::SignalSpec;
use crate::solver::{Status, Trajectory};
use crate::transition::{compare_forms, TransitionMatrix};

use super::config::{ProductKind, ScenarioConfig};

/// Half-width of the interaction window, in bump widths, excluded from phase estimation.
pub const INTERACTION_HALF_WIDTHS: f64 = 5.0;

/// A requested output: computed data, or the reason it could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Product<T> {
    Data(T),
    Skipped(String),
    NotRequested,
}

impl<T> Product<T> {
    pub fn data(&self) -> Option<&T> {
        match self {
            Product::Data(d) => Some(d),
            _ => None,
        }
    }

    pub fn skip_reason(&self) -> Option<&str> {
        match self {
            Product::Skipped(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_requested(&self) -> bool {
        !matches!(self, Product::NotRequested)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummarySource {
    /// Extracted from the integrated pressure trajectory.
    Computed,
    /// Taken from the scenario's `dynamical_params`.
    Supplied,
}

/// Both transition forms at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSample {
    pub t: f64,
    pub composed: TransitionMatrix,
    pub expanded: TransitionMatrix,
    pub discrepancy: f64,
}

/// Quantities extracted from the pressure trajectory, whether or not they drive the
/// envelope and transition products.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrajectoryDiagnostics {
    /// Milne energy `p'^2/2 - V(p, t)` at the last finite sample.
    pub milne_energy: Option<f64>,
    pub e_m_bound_violated: Option<bool>,
    pub period_phase: Option<PeriodPhase>,
    pub period_phase_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub status: Status,
    pub diagnostic: Option<String>,
    pub last_finite_time: Option<f64>,
    pub abort_time: Option<f64>,
    pub accepted_steps: usize,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    /// `None` when nothing required integrating the pressure equation.
    pub solver: Option<SolverReport>,
    /// Pressure trajectory `(p, p')` on the output grid.
    pub trajectory: Product<Trajectory>,
    pub summary: Product<SignalSummary>,
    pub summary_source: Option<SummarySource>,
    /// The `E_M`, `tau`, `delta` that drove the envelope and transition products,
    /// whether or not `summary` was requested.
    pub dynamical: Option<SignalSummary>,
    pub diagnostics: TrajectoryDiagnostics,
    pub envelope: Product<Vec<EnvelopeSample>>,
    pub transition: Product<Vec<TransitionSample>>,
    pub spectrum: Product<Vec<(f64, f64)>>,
    pub bathymetry: Product<Vec<BathymetrySample>>,
}

impl ScenarioResult {
    /// Requested products that could not be produced, with reasons.
    pub fn skipped(&self) -> Vec<(ProductKind, &str)> {
        let mut out = Vec::new();
        let reasons = [
            (ProductKind::Trajectory, self.trajectory.skip_reason()),
            (ProductKind::Summary, self.summary.skip_reason()),
            (ProductKind::Envelope, self.envelope.skip_reason()),
            (ProductKind::Transition, self.transition.skip_reason()),
            (ProductKind::Spectrum, self.spectrum.skip_reason()),
            (ProductKind::Bathymetry, self.bathymetry.skip_reason()),
        ];
        for (kind, reason) in reasons {
            if let Some(r) = reason {
                out.push((kind, r));
            }
        }
        out
    }
}

/// Samples the envelope at each time in `grid`.
pub fn envelope_series(
    e_m: f64,
    tau: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    grid: &[f64],
) -> Result<Vec<EnvelopeSample>> {
    grid.iter()
        .map(|&t| envelope_q(e_m, tau, spec, medium, t))
        .collect()
}

/// Evaluates both transition forms at each time in `grid`.
pub fn transition_series(
    summary: &SignalSummary,
    spec: &SignalSpec,
    medium: &MediumSpec,
    grid: &[f64],
) -> Result<Vec<TransitionSample>> {
    grid.iter()
        .map(|&t| {
            let cmp = compare_forms(summary.e_m, summary.delta, summary.tau, spec, medium, t)?;
            Ok(TransitionSample {
                t,
                composed: cmp.composed,
                expanded: cmp.expanded,
                discrepancy: cmp.discrepancy,
            })
        })
        .collect()
}

/// Hull of the windows `center ± 5 width` of every bump profile in the medium.
pub fn interaction_window(medium: &MediumSpec) -> Option<(f64, f64)> {
    [medium.omega_profile(), medium.beta_profile()]
        .into_iter()
        .filter_map(|p| match p {
            CoefficientProfile::GaussianBump { center, width, .. }
            | CoefficientProfile::Sech2Bump { center, width, .. } => Some((
                center - INTERACTION_HALF_WIDTHS * width,
                center + INTERACTION_HALF_WIDTHS * width,
            )),
            _ => None,
        })
        .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)))
}

fn on_grid(raw: &Trajectory, config: &ScenarioConfig, grid: &[f64]) -> Result<Trajectory> {
    if raw.derivatives().is_some() && matches!(config.scheme(), crate::milne::Scheme::Fixed { .. })
    {
        return Ok(raw.subsample(config.stride()));
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    for &t in grid {
        match raw.interpolate(t) {
            Some(s) => {
                times.push(t);
                states.push(s);
            }
            None => break,
        }
    }
    Trajectory::from_samples(times, states)
}

fn diagnostics(raw: &Trajectory, config: &ScenarioConfig) -> TrajectoryDiagnostics {
    let mut diag = TrajectoryDiagnostics::default();
    if let Some((t, s)) = raw.last() {
        let e = milne_energy(s[0], s[1], config.signal(), config.medium(), t);
        diag.milne_energy = Some(e);
        diag.e_m_bound_violated = Some(violates_energy_bound(e));
    }
    if raw.status() != Status::Completed {
        diag.period_phase_error = Some(format!(
            "trajectory {}: {}",
            raw.status(),
            raw.diagnostic().unwrap_or("no diagnostic")
        ));
        return diag;
    }
    match estimate_period_phase(raw, interaction_window(config.medium())) {
        Ok(pp) => diag.period_phase = Some(pp),
        Err(e) => diag.period_phase_error = Some(e.to_string()),
    }
    diag
}

fn skip_reason(e: &Error) -> String {
    e.to_string()
}

/// Runs the full pipeline: integrate the pressure equation, extract or take the
/// dynamical parameters, then sample the envelope and both transition forms.
///
/// Solver and singularity failures become per-product skip records; a blow-up still
/// returns every product that could be computed.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    let supplied = config.dynamical_params();
    let needs_summary = [
        ProductKind::Summary,
        ProductKind::Envelope,
        ProductKind::Transition,
    ]
    .iter()
    .any(|&p| config.requests(p));
    let integrate =
        config.requests(ProductKind::Trajectory) || (needs_summary && supplied.is_none());
    let grid = config.output_grid();

    let mut result = ScenarioResult {
        config: config.clone(),
        solver: None,
        trajectory: Product::NotRequested,
        summary: Product::NotRequested,
        summary_source: None,
        dynamical: None,
        diagnostics: TrajectoryDiagnostics::default(),
        envelope: Product::NotRequested,
        transition: Product::NotRequested,
        spectrum: Product::NotRequested,
        bathymetry: Product::NotRequested,
    };

    let raw = if integrate {
        let raw = integrate_milne(
            config.signal(),
            config.medium(),
            config.t_span(),
            Some(config.initial_condition()),
            config.scheme(),
            &config.solver_options(),
        )?;
        result.solver = Some(SolverReport {
            status: raw.status(),
            diagnostic: raw.diagnostic().map(str::to_owned),
            last_finite_time: raw.last().map(|(t, _)| t),
            abort_time: raw.abort_time(),
            accepted_steps: raw.len().saturating_sub(1),
        });
        result.diagnostics = diagnostics(&raw, config);
        Some(raw)
    } else {
        None
    };

    if config.requests(ProductKind::Trajectory) {
        if let Some(raw) = &raw {
            result.trajectory = match on_grid(raw, config, &grid) {
                Ok(t) => Product::Data(t),
                Err(e) => Product::Skipped(skip_reason(&e)),
            };
        }
    }

    let summary: std::result::Result<SignalSummary, String> = match supplied {
        Some(dp) => {
            result.summary_source = Some(SummarySource::Supplied);
            SignalSummary::new(dp.e_m, dp.tau, dp.delta).map_err(|e| skip_reason(&e))
        }
        None if needs_summary => {
            result.summary_source = Some(SummarySource::Computed);
            let d = &result.diagnostics;
            match (d.milne_energy, d.period_phase) {
                (Some(e_m), Some(pp)) => {
                    SignalSummary::new(e_m, pp.tau, pp.delta).map_err(|e| skip_reason(&e))
                }
                _ => Err(format!(
                    "period and phase unavailable: {}",
                    d.period_phase_error
                        .as_deref()
                        .unwrap_or("empty trajectory")
                )),
            }
        }
        None => Err("not requested".into()),
    };

    result.dynamical = summary.as_ref().ok().copied();
    if config.requests(ProductKind::Summary) {
        result.summary = match &summary {
            Ok(s) => Product::Data(*s),
            Err(r) => Product::Skipped(r.clone()),
        };
    }
    if config.requests(ProductKind::Envelope) {
        result.envelope = match &summary {
            Ok(s) => match envelope_series(s.e_m, s.tau, config.signal(), config.medium(), &grid) {
                Ok(v) => Product::Data(v),
                Err(e) => Product::Skipped(skip_reason(&e)),
            },
            Err(r) => Product::Skipped(format!("no dynamical parameters: {r}")),
        };
    }
    if config.requests(ProductKind::Transition) {
        result.transition = match &summary {
            Ok(s) => match transition_series(s, config.signal(), config.medium(), &grid) {
                Ok(v) => Product::Data(v),
                Err(e) => Product::Skipped(skip_reason(&e)),
            },
            Err(r) => Product::Skipped(format!("no dynamical parameters: {r}")),
        };
    }

    if config.requests(ProductKind::Spectrum) {
        result.spectrum = match config.spectrum() {
            Some(s) => match spectrum_sweep(&s.params(), s.k_min, s.k_max, s.samples) {
                Ok(v) => Product::Data(v),
                Err(e) => Product::Skipped(skip_reason(&e)),
            },
            None => Product::Skipped("environment.surface_spectrum not configured".into()),
        };
    }
    if config.requests(ProductKind::Bathymetry) {
        result.bathymetry = match config.bathymetry() {
            Some(b) => match bathymetry_profile(&b) {
                Ok(v) => Product::Data(v),
                Err(e) => Product::Skipped(skip_reason(&e)),
            },
            None => Product::Skipped("environment.bathymetry not configured".into()),
        };
    }

    Ok(result)
}
