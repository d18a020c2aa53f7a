//! The travelling acoustic signal: sinusoidal carrier, d'Alembert superposition,
//! finite-difference wave-equation residual, and inversion of the carrier for position.

use std::f64::consts::{PI, TAU};
use std::fmt;

use crate::error::{Error, Result};

const DISPERSION_TOL: f64 = 1e-12;

/// Carrier parameters. `angular_frequency = sound_speed * wave_number` and
/// `wavelength = 2 pi / wave_number` always hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec {
    amplitude: f64,
    sound_speed: f64,
    wave_number: f64,
    angular_frequency: f64,
    wavelength: f64,
}

impl SignalSpec {
    pub fn from_wave_number(amplitude: f64, sound_speed: f64, wave_number: f64) -> Result<Self> {
        let spec = SignalSpec {
            amplitude,
            sound_speed,
            wave_number,
            angular_frequency: sound_speed * wave_number,
            wavelength: TAU / wave_number,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_wavelength(amplitude: f64, sound_speed: f64, wavelength: f64) -> Result<Self> {
        Self::from_wave_number(amplitude, sound_speed, TAU / wavelength)
    }

    pub fn from_angular_frequency(
        amplitude: f64,
        sound_speed: f64,
        angular_frequency: f64,
    ) -> Result<Self> {
        Self::from_wave_number(amplitude, sound_speed, angular_frequency / sound_speed)
    }

    fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            issues.push(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            ));
        }
        if !(self.sound_speed > 0.0 && self.sound_speed.is_finite()) {
            issues.push(format!(
                "sound_speed must be positive, got {}",
                self.sound_speed
            ));
        }
        if !(self.wave_number > 0.0 && self.wave_number.is_finite()) {
            issues.push(format!(
                "wave_number must be positive, got {}",
                self.wave_number
            ));
        }
        if issues.is_empty() {
            debug_assert!(
                (self.angular_frequency - self.sound_speed * self.wave_number).abs()
                    <= DISPERSION_TOL * self.angular_frequency
            );
            Ok(())
        } else {
            Err(Error::Validation(issues))
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn sound_speed(&self) -> f64 {
        self.sound_speed
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }

    pub fn angular_frequency(&self) -> f64 {
        self.angular_frequency
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Temporal period `2 pi / angular_frequency`.
    pub fn period(&self) -> f64 {
        TAU / self.angular_frequency
    }
}

/// `alpha cos(k (x - c t))`
pub fn pressure_at(spec: &SignalSpec, x: f64, t: f64) -> f64 {
    spec.amplitude * (spec.wave_number * (x - spec.sound_speed * t)).cos()
}

/// A scalar pressure field `p(x, t)`.
pub trait PressureField {
    fn pressure(&self, x: f64, t: f64) -> f64;
}

impl PressureField for SignalSpec {
    fn pressure(&self, x: f64, t: f64) -> f64 {
        pressure_at(self, x, t)
    }
}

impl<F> PressureField for F
where
    F: Fn(f64, f64) -> f64,
{
    fn pressure(&self, x: f64, t: f64) -> f64 {
        self(x, t)
    }
}

type Profile = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Counter-propagating profiles: `f1` moves toward -x, `f2` toward +x.
pub struct TravellingWavePair {
    f1: Profile,
    f2: Profile,
    domain: (f64, f64),
}

impl fmt::Debug for TravellingWavePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TravellingWavePair")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl TravellingWavePair {
    /// Profiles defined on the whole real line.
    pub fn new<F1, F2>(f1: F1, f2: F2) -> Self
    where
        F1: Fn(f64) -> f64 + Send + Sync + 'static,
        F2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        TravellingWavePair {
            f1: Box::new(f1),
            f2: Box::new(f2),
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Restricts the argument range both profiles are defined on.
    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Binds a sound speed, giving a [`PressureField`].
    pub fn field(&self, sound_speed: f64) -> DalembertField<'_> {
        DalembertField {
            pair: self,
            sound_speed,
        }
    }

    fn contains(&self, s: f64) -> bool {
        s >= self.domain.0 && s <= self.domain.1
    }
}

/// `f1(x + ct) + f2(x - ct)`; errors when either argument leaves the pair's domain.
pub fn dalembert_superpose(
    pair: &TravellingWavePair,
    sound_speed: f64,
    x: f64,
    t: f64,
) -> Result<f64> {
    let (left, right) = (x + sound_speed * t, x - sound_speed * t);
    for s in [left, right] {
        if !pair.contains(s) {
            return Err(Error::Domain(format!(
                "argument {s} outside [{}, {}]",
                pair.domain.0, pair.domain.1
            )));
        }
    }
    Ok((pair.f1)(left) + (pair.f2)(right))
}

#[derive(Debug)]
pub struct DalembertField<'a> {
    pair: &'a TravellingWavePair,
    sound_speed: f64,
}

impl PressureField for DalembertField<'_> {
    /// Outside the pair's domain this yields NaN; use [`dalembert_superpose`] to get
    /// the error instead.
    fn pressure(&self, x: f64, t: f64) -> f64 {
        dalembert_superpose(self.pair, self.sound_speed, x, t).unwrap_or(f64::NAN)
    }
}

/// `c^2 p_xx - p_tt` by central second differences.
///
/// The spatial step is `h`; the temporal step is `h / c`.
pub fn wave_residual<P: PressureField + ?Sized>(
    field: &P,
    sound_speed: f64,
    x: f64,
    t: f64,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step h = {h} must be positive"
        )));
    }
    if !(sound_speed > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sound speed {sound_speed} must be positive"
        )));
    }
    let ht = h / sound_speed;
    let p = field.pressure(x, t);
    let pxx = (field.pressure(x + h, t) - 2.0 * p + field.pressure(x - h, t)) / (h * h);
    let ptt = (field.pressure(x, t + ht) - 2.0 * p + field.pressure(x, t - ht)) / (ht * ht);
    Ok(sound_speed * sound_speed * pxx - ptt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArccosSign {
    #[default]
    Plus,
    Minus,
}

/// Position at which the carrier takes value `p` at time `t`:
/// `x = (sign * arccos(p / alpha) + 2 pi branch) / k + c t`.
pub fn invert_position(
    spec: &SignalSpec,
    p: f64,
    t: f64,
    branch: i64,
    sign: ArccosSign,
) -> Result<f64> {
    let ratio = p / spec.amplitude;
    if !(ratio.abs() <= 1.0) {
        return Err(Error::Domain(format!(
            "|p| = {} exceeds amplitude {}",
            p.abs(),
            spec.amplitude
        )));
    }
    let angle = match sign {
        ArccosSign::Plus => ratio.acos(),
        ArccosSign::Minus => -ratio.acos(),
    };
    Ok((angle + TAU * branch as f64) / spec.wave_number + spec.sound_speed * t)
}

/// Branch and sign that [`invert_position`] needs to recover `x` exactly.
pub fn branch_of(spec: &SignalSpec, x: f64, t: f64) -> (i64, ArccosSign) {
    let phase = spec.wave_number * (x - spec.sound_speed * t);
    let branch = (phase / TAU).round();
    let reduced = phase - TAU * branch;
    let sign = if (0.0..=PI).contains(&reduced) {
        ArccosSign::Plus
    } else {
        ArccosSign::Minus
    };
    (branch as i64, sign)
}
