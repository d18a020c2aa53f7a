//! Time-dependent coefficients of the parametric oscillator medium.
//!
//! Frequency profiles approach 1 far from the interaction window (time is scaled so the
//! asymptotic angular frequency is unity); damping profiles are non-negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of sound in sea water, m/s.
pub const SOUND_SPEED_WATER: f64 = 1480.0;
/// Speed of sound in air, m/s.
pub const SOUND_SPEED_AIR: f64 = 343.0;

/// Bumps are treated as negligible beyond this many widths from their center.
pub const BUMP_SUPPORT_WIDTHS: f64 = 8.0;

/// Tolerance on the asymptotic frequency `base == 1`.
const UNIT_BASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CoefficientProfile {
    Constant {
        base: f64,
    },
    /// `base + amplitude * exp(-(t - center)^2 / (2 width^2))`
    GaussianBump {
        base: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `base + amplitude * sech^2((t - center) / width)`
    #[serde(rename = "sech2-bump")]
    Sech2Bump {
        base: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Piecewise-linear through `(t, value)` knots, clamped outside.
    Table {
        points: Vec<(f64, f64)>,
    },
}

impl CoefficientProfile {
    pub fn constant(base: f64) -> Self {
        CoefficientProfile::Constant { base }
    }

    pub fn gaussian_bump(base: f64, amplitude: f64, center: f64, width: f64) -> Self {
        CoefficientProfile::GaussianBump {
            base,
            amplitude,
            center,
            width,
        }
    }

    pub fn sech2_bump(base: f64, amplitude: f64, center: f64, width: f64) -> Self {
        CoefficientProfile::Sech2Bump {
            base,
            amplitude,
            center,
            width,
        }
    }

    pub fn table(points: Vec<(f64, f64)>) -> Self {
        CoefficientProfile::Table { points }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CoefficientProfile::Constant { .. } => "constant",
            CoefficientProfile::GaussianBump { .. } => "gaussian-bump",
            CoefficientProfile::Sech2Bump { .. } => "sech2-bump",
            CoefficientProfile::Table { .. } => "table",
        }
    }

    /// Asymptotic value. For tables this is the last knot.
    pub fn base(&self) -> f64 {
        match self {
            CoefficientProfile::Constant { base }
            | CoefficientProfile::GaussianBump { base, .. }
            | CoefficientProfile::Sech2Bump { base, .. } => *base,
            CoefficientProfile::Table { points } => points.last().map_or(f64::NAN, |p| p.1),
        }
    }

    /// Raw profile value, without range checks.
    pub fn value(&self, t: f64) -> f64 {
        match self {
            CoefficientProfile::Constant { base } => *base,
            CoefficientProfile::GaussianBump {
                base,
                amplitude,
                center,
                width,
            } => {
                let z = (t - center) / width;
                base + amplitude * (-0.5 * z * z).exp()
            }
            CoefficientProfile::Sech2Bump {
                base,
                amplitude,
                center,
                width,
            } => {
                let sech = 1.0 / ((t - center) / width).cosh();
                base + amplitude * sech * sech
            }
            CoefficientProfile::Table { points } => interpolate_table(points, t),
        }
    }

    /// Infimum of the profile over all t.
    fn infimum(&self) -> f64 {
        match self {
            CoefficientProfile::Constant { base } => *base,
            CoefficientProfile::GaussianBump {
                base, amplitude, ..
            }
            | CoefficientProfile::Sech2Bump {
                base, amplitude, ..
            } => base + amplitude.min(0.0),
            CoefficientProfile::Table { points } => {
                points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Structural checks shared by frequency and damping profiles.
    fn check_shape(&self, name: &str, issues: &mut Vec<String>) {
        match self {
            CoefficientProfile::Constant { base } => {
                if !base.is_finite() {
                    issues.push(format!("{name}.base must be finite"));
                }
            }
            CoefficientProfile::GaussianBump {
                base,
                amplitude,
                center,
                width,
            }
            | CoefficientProfile::Sech2Bump {
                base,
                amplitude,
                center,
                width,
            } => {
                if ![base, amplitude, center].iter().all(|v| v.is_finite()) {
                    issues.push(format!("{name}: base, amplitude and center must be finite"));
                }
                if !(*width > 0.0 && width.is_finite()) {
                    issues.push(format!("{name}.width must be positive, got {width}"));
                }
            }
            CoefficientProfile::Table { points } => {
                if points.is_empty() {
                    issues.push(format!("{name}.points must not be empty"));
                }
                if points
                    .iter()
                    .any(|(t, v)| !(t.is_finite() && v.is_finite()))
                {
                    issues.push(format!("{name}.points must be finite"));
                }
                if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    issues.push(format!("{name}.points times must be strictly increasing"));
                }
            }
        }
    }

    /// Collects every reason this profile is not a valid frequency profile.
    pub fn omega_issues(&self, name: &str) -> Vec<String> {
        let mut issues = Vec::new();
        self.check_shape(name, &mut issues);
        if !issues.is_empty() {
            return issues;
        }
        let base_ok = match self {
            CoefficientProfile::Table { points } => {
                let first = points[0].1;
                let last = points[points.len() - 1].1;
                (first - 1.0).abs() <= UNIT_BASE_TOL && (last - 1.0).abs() <= UNIT_BASE_TOL
            }
            _ => (self.base() - 1.0).abs() <= UNIT_BASE_TOL,
        };
        if !base_ok {
            issues.push(format!(
                "{name}: asymptotic frequency must be 1 (time is scaled to unit frequency)"
            ));
        }
        let inf = self.infimum();
        if !(inf > 0.0) {
            issues.push(format!(
                "{name}: frequency must stay positive, infimum is {inf}"
            ));
        }
        issues
    }

    /// Collects every reason this profile is not a valid damping profile.
    pub fn beta_issues(&self, name: &str) -> Vec<String> {
        let mut issues = Vec::new();
        self.check_shape(name, &mut issues);
        if !issues.is_empty() {
            return issues;
        }
        let inf = self.infimum();
        if !(inf >= 0.0) {
            issues.push(format!(
                "{name}: damping must be non-negative, infimum is {inf}"
            ));
        }
        issues
    }
}

fn interpolate_table(points: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = match (points.first(), points.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return f64::NAN,
    };
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    let i = points.partition_point(|p| p.0 <= t);
    let (t0, v0) = points[i - 1];
    let (t1, v1) = points[i];
    if t == t0 {
        return v0;
    }
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Angular frequency at `t`; errors if the value is not strictly positive.
pub fn omega_at(profile: &CoefficientProfile, t: f64) -> Result<f64> {
    let w = profile.value(t);
    if w > 0.0 && w.is_finite() {
        Ok(w)
    } else {
        Err(Error::InvalidProfile(format!(
            "frequency {w} at t = {t} is not positive"
        )))
    }
}

/// Damping coefficient at `t`; errors if the value is negative.
pub fn beta_at(profile: &CoefficientProfile, t: f64) -> Result<f64> {
    let b = profile.value(t);
    if b >= 0.0 && b.is_finite() {
        Ok(b)
    } else {
        Err(Error::InvalidProfile(format!(
            "damping {b} at t = {t} is negative"
        )))
    }
}

/// Checks that `profile` has settled to its base value at `±horizon`.
///
/// Bump profiles additionally need the horizon to cover eight widths on each side of
/// the center.
pub fn validate_asymptotics(profile: &CoefficientProfile, horizon: f64, eps: f64) -> bool {
    if !(horizon > 0.0 && eps > 0.0) {
        return false;
    }
    let base = profile.base();
    let settled = (profile.value(horizon) - base).abs() <= eps
        && (profile.value(-horizon) - base).abs() <= eps;
    let covered = match profile {
        CoefficientProfile::GaussianBump { center, width, .. }
        | CoefficientProfile::Sech2Bump { center, width, .. } => {
            horizon >= center + BUMP_SUPPORT_WIDTHS * width
                && -horizon <= center - BUMP_SUPPORT_WIDTHS * width
        }
        _ => true,
    };
    settled && covered
}

/// Frequency and damping profiles plus the sound speed of the medium.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    omega: CoefficientProfile,
    beta: CoefficientProfile,
    sound_speed: f64,
}

impl MediumSpec {
    pub fn new(
        omega: CoefficientProfile,
        beta: CoefficientProfile,
        sound_speed: f64,
    ) -> Result<Self> {
        let mut issues = omega.omega_issues("omega");
        issues.extend(beta.beta_issues("beta"));
        if !(sound_speed > 0.0 && sound_speed.is_finite()) {
            issues.push(format!("sound_speed must be positive, got {sound_speed}"));
        }
        if issues.is_empty() {
            Ok(MediumSpec {
                omega,
                beta,
                sound_speed,
            })
        } else {
            Err(Error::Validation(issues))
        }
    }

    /// Skips the frequency checks, so e.g. `omega == 0` can be used to probe fixed
    /// points of the pressure equation. Test harness use only.
    pub fn with_unchecked_omega(
        omega: CoefficientProfile,
        beta: CoefficientProfile,
        sound_speed: f64,
    ) -> Result<Self> {
        let mut issues = Vec::new();
        omega.check_shape("omega", &mut issues);
        issues.extend(beta.beta_issues("beta"));
        if !(sound_speed > 0.0 && sound_speed.is_finite()) {
            issues.push(format!("sound_speed must be positive, got {sound_speed}"));
        }
        if issues.is_empty() {
            Ok(MediumSpec {
                omega,
                beta,
                sound_speed,
            })
        } else {
            Err(Error::Validation(issues))
        }
    }

    /// Unit-frequency, undamped medium in water.
    pub fn quiescent() -> Self {
        MediumSpec {
            omega: CoefficientProfile::constant(1.0),
            beta: CoefficientProfile::constant(0.0),
            sound_speed: SOUND_SPEED_WATER,
        }
    }

    pub fn omega_profile(&self) -> &CoefficientProfile {
        &self.omega
    }

    pub fn beta_profile(&self) -> &CoefficientProfile {
        &self.beta
    }

    pub fn sound_speed(&self) -> f64 {
        self.sound_speed
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.omega.value(t)
    }

    pub fn beta(&self, t: f64) -> f64 {
        self.beta.value(t)
    }
}
