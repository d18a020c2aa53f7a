//! Background environment: wind-driven sea-surface spectrum and procedural sine-hill
//! bathymetry.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PM_ALPHA: f64 = 0.0081;
pub const PM_BETA: f64 = 0.74;
pub const GRAVITY: f64 = 9.82;
/// Height above the surface at which the wind speed is referenced, m.
pub const WIND_REFERENCE_HEIGHT: f64 = 19.5;

/// Parameters of `S(k) = alpha / (2 k^3) exp(-beta g^2 / (k^2 u^4))`.
///
/// `wind_speed` is taken as measured at [`WIND_REFERENCE_HEIGHT`]; no height conversion
/// is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpectrumParams {
    #[serde(default = "default_alpha")]
    pub alpha_pm: f64,
    #[serde(default = "default_beta")]
    pub beta_pm: f64,
    #[serde(default = "default_gravity")]
    pub g: f64,
    pub wind_speed: f64,
}

fn default_alpha() -> f64 {
    PM_ALPHA
}

fn default_beta() -> f64 {
    PM_BETA
}

fn default_gravity() -> f64 {
    GRAVITY
}

impl SurfaceSpectrumParams {
    pub fn with_wind_speed(wind_speed: f64) -> Self {
        SurfaceSpectrumParams {
            alpha_pm: PM_ALPHA,
            beta_pm: PM_BETA,
            g: GRAVITY,
            wind_speed,
        }
    }

    pub fn issues(&self) -> Vec<String> {
        [
            ("alpha_pm", self.alpha_pm),
            ("beta_pm", self.beta_pm),
            ("g", self.g),
            ("wind_speed", self.wind_speed),
        ]
        .iter()
        .filter(|(_, v)| !(*v > 0.0))
        .map(|(name, v)| format!("surface_spectrum.{name} must be positive, got {v}"))
        .collect()
    }

    fn validate(&self) -> Result<()> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(issues))
        }
    }
}

/// Spectral density at angular spatial frequency `k` (rad/m).
pub fn surface_psd(params: &SurfaceSpectrumParams, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!(
            "wavenumber k = {k} must be positive"
        )));
    }
    params.validate()?;
    let u2 = params.wind_speed * params.wind_speed;
    let exponent = -params.beta_pm * params.g * params.g / (k * k * u2 * u2);
    Ok(params.alpha_pm / (2.0 * k * k * k) * exponent.exp())
}

/// Stationary point of [`surface_psd`]: `k = g sqrt(2 beta / 3) / u^2`.
pub fn psd_peak_wavenumber(params: &SurfaceSpectrumParams) -> Result<f64> {
    params.validate()?;
    Ok(params.g * (2.0 * params.beta_pm / 3.0).sqrt() / (params.wind_speed * params.wind_speed))
}

/// `(k, S(k))` at `samples` log-spaced wavenumbers spanning `[k_min, k_max]`.
pub fn spectrum_sweep(
    params: &SurfaceSpectrumParams,
    k_min: f64,
    k_max: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(k_min > 0.0 && k_max > k_min) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < k_min < k_max, got [{k_min}, {k_max}]"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let (lo, hi) = (k_min.ln(), k_max.ln());
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let k = match i {
                0 => k_min,
                i if i + 1 == samples => k_max,
                i => (lo + (hi - lo) * i as f64 / last).exp(),
            };
            surface_psd(params, k).map(|s| (k, s))
        })
        .collect()
}

/// Sine-hill seafloor description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathymetrySpec {
    /// Maximum hill elevation, m.
    pub zeta_max: f64,
    /// Distance between adjacent peaks, m.
    pub hill_spacing: f64,
    /// Total profile extent, m.
    pub length: f64,
    /// Sample spacing, m.
    pub dx: f64,
    #[serde(default)]
    pub seed: u64,
}

impl BathymetrySpec {
    pub fn issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if !(self.zeta_max > 0.0 && self.zeta_max.is_finite()) {
            issues.push(format!(
                "bathymetry.zeta_max must be positive, got {}",
                self.zeta_max
            ));
        }
        if !(self.hill_spacing > 0.0 && self.hill_spacing.is_finite()) {
            issues.push(format!(
                "bathymetry.hill_spacing must be positive, got {}",
                self.hill_spacing
            ));
        }
        if !(self.dx > 0.0 && self.dx.is_finite()) {
            issues.push(format!("bathymetry.dx must be positive, got {}", self.dx));
        }
        if !(self.length >= self.dx && self.length.is_finite()) {
            issues.push(format!(
                "bathymetry.length must be at least dx, got {}",
                self.length
            ));
        }
        issues
    }

    /// Number of samples `x_i = i dx` with `x_i <= length`.
    pub fn sample_count(&self) -> usize {
        let ratio = self.length / self.dx;
        let n = (ratio + 1e-9 * ratio.max(1.0)).floor();
        n as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathymetrySample {
    pub x: f64,
    pub zeta: f64,
}

/// Per-hill height scale `R` in `(0, 1]`.
///
/// Each hill period draws from its own ChaCha8 stream keyed by `(seed, period)`.
pub fn hill_scale(seed: u64, period: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(period);
    1.0 - rng.random::<f64>()
}

/// The sine-hill bracket `(zeta_max / 2) (sin(-pi/2 + 2 pi x / L_h) + 1)`.
pub fn hill_shape(zeta_max: f64, hill_spacing: f64, x: f64) -> f64 {
    0.5 * zeta_max * ((-FRAC_PI_2 + TAU * x / hill_spacing).sin() + 1.0)
}

/// Samples the profile with a caller-supplied scale for each hill period.
pub fn bathymetry_with_scale<R>(spec: &BathymetrySpec, scale: R) -> Result<Vec<BathymetrySample>>
where
    R: Fn(u64) -> f64,
{
    let issues = spec.issues();
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    Ok((0..spec.sample_count())
        .map(|i| {
            let x = i as f64 * spec.dx;
            let period = (x / spec.hill_spacing).floor() as u64;
            BathymetrySample {
                x,
                zeta: scale(period) * hill_shape(spec.zeta_max, spec.hill_spacing, x),
            }
        })
        .collect())
}

/// Seafloor elevation `zeta(x) = R(x) (zeta_max/2) (sin(-pi/2 + 2 pi x / L_h) + 1)`.
pub fn bathymetry_profile(spec: &BathymetrySpec) -> Result<Vec<BathymetrySample>> {
    let seed = spec.seed;
    bathymetry_with_scale(spec, |period| hill_scale(seed, period))
}
