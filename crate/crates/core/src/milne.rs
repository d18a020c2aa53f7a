//! Milne-type evolution of the acoustic pressure through a parametric medium.
//!
//! The pressure obeys
//!
//! ```text
//! p'' - p p'^2 + beta(t) p' - beta(t) c k p - omega(t)^2 c t k p = 0
//! ```
//!
//! which is the parametric oscillator with `x = arccos(p/alpha)/k + ct` substituted and
//! then evaluated on `p = alpha`. The module also carries the energy functionals built
//! on it, the envelope `q` with its squared amplitudes `q+^2`, `q-^2`, and extraction
//! of the effective period `tau` and phase shift `delta` from a pressure trajectory.
//!
//! All functions take the sound speed from the [`SignalSpec`]; the medium supplies only
//! `omega(t)` and `beta(t)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::MediumSpec;
use crate::signal::SignalSpec;
use crate::solver::{
    integrate_adaptive, integrate_fixed, SolverOptions, Trajectory, DEFAULT_ATOL, DEFAULT_DT,
    DEFAULT_RTOL,
};

/// Lower bound on the Milne energy of a physical signal.
pub const MILNE_ENERGY_BOUND: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MilneState {
    pub p: f64,
    pub p_dot: f64,
}

impl MilneState {
    pub fn new(p: f64, p_dot: f64) -> Self {
        MilneState { p, p_dot }
    }

    /// The reduction point `p = alpha`, `p' = 0`.
    pub fn at_amplitude(spec: &SignalSpec) -> Self {
        MilneState::new(spec.amplitude(), 0.0)
    }
}

/// `beta(t) c k + omega(t)^2 c t k`, the common stiffness of the potential terms.
pub fn stiffness(spec: &SignalSpec, medium: &MediumSpec, t: f64) -> f64 {
    let ck = spec.sound_speed() * spec.wave_number();
    let w = medium.omega(t);
    medium.beta(t) * ck + w * w * ck * t
}

/// The full substituted equation, before the reduction to `p = alpha`.
///
/// Requires `|p| <= alpha` for the arccos term.
pub fn eq9_residual(
    p: f64,
    p_dot: f64,
    p_ddot: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> Result<f64> {
    let alpha = spec.amplitude();
    let ratio = p / alpha;
    if !(ratio.abs() <= 1.0) {
        return Err(Error::Domain(format!(
            "|p| = {} exceeds amplitude {alpha}",
            p.abs()
        )));
    }
    let (c, k) = (spec.sound_speed(), spec.wave_number());
    let (beta, w) = (medium.beta(t), medium.omega(t));
    let w2 = w * w;
    let p2_norm = p * p / (alpha * alpha);
    Ok(
        p_ddot * p2_norm - p * p_dot * p_dot + beta * p_dot * p2_norm
            - beta * c * k * p
            - w2 * p * ratio.acos()
            - w2 * c * t * k * p,
    )
}

/// `(p', p'')` with `p'' = p p'^2 - beta p' + beta c k p + omega^2 c t k p`.
pub fn milne_rhs(state: MilneState, spec: &SignalSpec, medium: &MediumSpec, t: f64) -> MilneState {
    let MilneState { p, p_dot } = state;
    let beta = medium.beta(t);
    MilneState {
        p: p_dot,
        p_dot: p * p_dot * p_dot - beta * p_dot + stiffness(spec, medium, t) * p,
    }
}

/// Integration scheme for [`integrate_milne`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Fixed { dt: f64 },
    Adaptive { rtol: f64, atol: f64 },
}

impl Default for Scheme {
    fn default() -> Self {
        Scheme::Fixed { dt: DEFAULT_DT }
    }
}

impl Scheme {
    pub fn default_adaptive() -> Self {
        Scheme::Adaptive {
            rtol: DEFAULT_RTOL,
            atol: DEFAULT_ATOL,
        }
    }
}

/// Integrates the pressure equation over `t_span`. Without `initial`, starts at
/// `(alpha, 0)`.
pub fn integrate_milne(
    spec: &SignalSpec,
    medium: &MediumSpec,
    t_span: (f64, f64),
    initial: Option<MilneState>,
    scheme: Scheme,
    options: &SolverOptions,
) -> Result<Trajectory> {
    let ic = initial.unwrap_or_else(|| MilneState::at_amplitude(spec));
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let d = milne_rhs(MilneState::new(y[0], y[1]), spec, medium, t);
        dy[0] = d.p;
        dy[1] = d.p_dot;
    };
    let y0 = [ic.p, ic.p_dot];
    match scheme {
        Scheme::Fixed { dt } => integrate_fixed(rhs, &y0, t_span, dt, options),
        Scheme::Adaptive { rtol, atol } => {
            integrate_adaptive(rhs, &y0, t_span, rtol, atol, options)
        }
    }
}

/// `(beta c k / 2) p^2 + (omega^2 c t k / 2) p^2`
pub fn potential_density(p: f64, spec: &SignalSpec, medium: &MediumSpec, t: f64) -> f64 {
    0.5 * stiffness(spec, medium, t) * p * p
}

/// `p'^2/2 + V`, with every term carrying a plus sign.
pub fn lagrangian_density(
    state: MilneState,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> f64 {
    0.5 * state.p_dot * state.p_dot + potential_density(state.p, spec, medium, t)
}

/// `p'^2/2 - V`
pub fn hamiltonian_density(
    state: MilneState,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> f64 {
    0.5 * state.p_dot * state.p_dot - potential_density(state.p, spec, medium, t)
}

/// Milne energy `q'^2/2 - (beta c k/2) q^2 - (omega^2 c t k/2) q^2`.
///
/// With `q_dot = 0` this is the stationary-envelope form `-(stiffness/2) q^2`.
pub fn milne_energy(q: f64, q_dot: f64, spec: &SignalSpec, medium: &MediumSpec, t: f64) -> f64 {
    hamiltonian_density(MilneState::new(q, q_dot), spec, medium, t)
}

/// Milne energy of a stationary envelope given its (possibly negative) square `q^2`.
pub fn milne_energy_of_square(
    q_square: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> f64 {
    -0.5 * stiffness(spec, medium, t) * q_square
}

/// `E_M < 1`. Informational only.
pub fn violates_energy_bound(e_m: f64) -> bool {
    !(e_m >= MILNE_ENERGY_BOUND)
}

/// Envelope at one instant.
///
/// `q = ±i sqrt(q_squared)`, so `q` is imaginary whenever `q_squared > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSample {
    pub t: f64,
    /// `2 E_M cos(2t - tau) / (beta c k + omega^2 c t k)`
    pub q_squared: f64,
    pub magnitude: f64,
    pub imaginary_branch: bool,
}

impl EnvelopeSample {
    /// The square of `q` itself, `(±i)^2 q_squared = -q_squared`.
    pub fn q_square(&self) -> f64 {
        -self.q_squared
    }
}

fn checked_stiffness(spec: &SignalSpec, medium: &MediumSpec, t: f64) -> Result<f64> {
    let den = stiffness(spec, medium, t);
    if den == 0.0 || !den.is_finite() {
        return Err(Error::Singularity { t });
    }
    Ok(den)
}

/// Envelope built from an explicit denominator. [`envelope_q`] passes the medium
/// stiffness at `t`.
pub fn envelope_from_denominator(
    e_m: f64,
    tau: f64,
    t: f64,
    denominator: f64,
) -> Result<EnvelopeSample> {
    if denominator == 0.0 || !denominator.is_finite() {
        return Err(Error::Singularity { t });
    }
    let q_squared = 2.0 * e_m * (2.0 * t - tau).cos() / denominator;
    Ok(EnvelopeSample {
        t,
        q_squared,
        magnitude: q_squared.abs().sqrt(),
        imaginary_branch: q_squared > 0.0,
    })
}

pub fn envelope_q(
    e_m: f64,
    tau: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> Result<EnvelopeSample> {
    let den = checked_stiffness(spec, medium, t)?;
    envelope_from_denominator(e_m, tau, t, den)
}

/// `(q+^2, q-^2)` with `q-^2 = 2 E_M cos(2t - tau) / stiffness` and `q+^2 = -q-^2`.
pub fn q_plus_minus_squared(
    e_m: f64,
    tau: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> Result<(f64, f64)> {
    let q_minus_sq = envelope_q(e_m, tau, spec, medium, t)?.q_squared;
    Ok((-q_minus_sq, q_minus_sq))
}

/// Result of the two-component amplitude formula. A negative radicand is reported,
/// not rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSample {
    pub radicand: f64,
    pub magnitude: f64,
    pub imaginary: bool,
}

/// `sqrt(q+^2 cos^2(t - tau) + q-^2 sin^2(t - tau))`
pub fn eq14_amplitude(q_plus_sq: f64, q_minus_sq: f64, tau: f64, t: f64) -> AmplitudeSample {
    let (s, c) = (t - tau).sin_cos();
    let radicand = q_plus_sq * c * c + q_minus_sq * s * s;
    AmplitudeSample {
        radicand,
        magnitude: radicand.abs().sqrt(),
        imaginary: radicand < 0.0,
    }
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// Effective period and phase shift of a received pressure signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodPhase {
    pub tau: f64,
    pub delta: f64,
    pub crossings: usize,
}

/// Estimates `tau` and `delta` from an oscillating `(p, p')` trajectory.
///
/// `tau` is twice the mean spacing between consecutive zero crossings of `p`, each
/// located by linear interpolation. With `w = 2 pi / tau`, every sample contributes the
/// lag `w t_i - atan2(-p'_i / w, p_i)` against the undamped reference `cos(w t)`, and
/// `delta` is their circular mean, so `cos(w t - delta)` yields `delta`.
///
/// Samples and crossings inside `exclude` (e.g. the active interaction window) are
/// skipped, as are crossing spacings that straddle it.
pub fn estimate_period_phase(
    trajectory: &Trajectory,
    exclude: Option<(f64, f64)>,
) -> Result<PeriodPhase> {
    let times = trajectory.times();
    let states = trajectory.states();
    if states.first().is_some_and(|s| s.len() < 2) {
        return Err(Error::InvalidArgument(
            "trajectory states need (p, p') components".into(),
        ));
    }
    let excluded = |t: f64| exclude.is_some_and(|(lo, hi)| t >= lo && t <= hi);

    let mut crossings = Vec::new();
    for i in 0..times.len().saturating_sub(1) {
        let (p0, p1) = (states[i][0], states[i + 1][0]);
        let t = if p0 == 0.0 {
            times[i]
        } else if p0 * p1 < 0.0 {
            times[i] - p0 * (times[i + 1] - times[i]) / (p1 - p0)
        } else {
            continue;
        };
        if !excluded(t) {
            crossings.push(t);
        }
    }
    if crossings.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings of p, need at least 3",
            crossings.len()
        )));
    }

    let spacings: Vec<f64> = crossings
        .windows(2)
        .filter(|w| match exclude {
            Some((lo, hi)) => !(w[0] < lo && w[1] > hi),
            None => true,
        })
        .map(|w| w[1] - w[0])
        .collect();
    if spacings.is_empty() {
        return Err(Error::InsufficientData(
            "no crossing spacing outside the excluded window".into(),
        ));
    }
    let tau = 2.0 * spacings.iter().sum::<f64>() / spacings.len() as f64;
    let w = TAU / tau;

    let (mut sin_sum, mut cos_sum) = (0.0, 0.0);
    for (t, s) in times.iter().zip(states) {
        if excluded(*t) {
            continue;
        }
        let phase = (-s[1] / w).atan2(s[0]);
        let (sn, cs) = (w * t - phase).sin_cos();
        sin_sum += sn;
        cos_sum += cs;
    }
    let delta = wrap_angle(sin_sum.atan2(cos_sum));
    Ok(PeriodPhase {
        tau,
        delta,
        crossings: crossings.len(),
    })
}

/// Effective signal strength, period and phase shift of a received signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalSummary {
    pub e_m: f64,
    pub tau: f64,
    pub delta: f64,
    pub e_m_bound_violated: bool,
}

impl SignalSummary {
    /// Normalizes `delta` into `(-pi, pi]` and sets the energy-bound flag.
    pub fn new(e_m: f64, tau: f64, delta: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tau = {tau} must be positive"
            )));
        }
        if !e_m.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidArgument(
                "E_M and delta must be finite".into(),
            ));
        }
        Ok(SignalSummary {
            e_m,
            tau,
            delta: wrap_angle(delta),
            e_m_bound_violated: violates_energy_bound(e_m),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::CoefficientProfile;
    use crate::solver::{StateVector, Status};
    use std::f64::consts::FRAC_PI_2;

    fn spec() -> SignalSpec {
        SignalSpec::from_wave_number(1.0, 1480.0, 0.1).unwrap()
    }

    fn constant_medium(beta: f64, omega: f64) -> MediumSpec {
        MediumSpec::with_unchecked_omega(
            CoefficientProfile::constant(omega),
            CoefficientProfile::constant(beta),
            1480.0,
        )
        .unwrap()
    }

    #[test]
    fn rhs_examples() {
        let d = milne_rhs(
            MilneState::new(1.0, 0.0),
            &spec(),
            &constant_medium(0.5, 1.0),
            0.0,
        );
        assert_eq!(d.p_dot, 74.0);
        let d = milne_rhs(
            MilneState::new(3.7, 0.0),
            &spec(),
            &constant_medium(0.0, 1.0),
            0.0,
        );
        assert_eq!(d.p_dot, 0.0);
        // 0.5*0.04 - 0.02 + 7.4 + 74.0
        let d = milne_rhs(
            MilneState::new(0.5, 0.2),
            &spec(),
            &constant_medium(0.1, 1.0),
            1.0,
        );
        assert!((d.p_dot - 81.4).abs() < 1e-12);
        assert_eq!(d.p, 0.2);
    }

    #[test]
    fn eq9_coincides_with_reduced_equation_at_amplitude() {
        let m = constant_medium(0.3, 1.0);
        let s = spec();
        let (p, p_dot, t) = (1.0, 0.4, 0.7);
        let p_ddot = milne_rhs(MilneState::new(p, p_dot), &s, &m, t).p_dot;
        assert!(eq9_residual(p, p_dot, p_ddot, &s, &m, t).unwrap().abs() < 1e-9);
        assert_eq!(eq9_residual(0.0, 0.0, 12.0, &s, &m, t).unwrap(), 0.0);
        assert!(matches!(
            eq9_residual(1.2, 0.0, 0.0, &s, &m, t),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn eq9_term_by_term() {
        let s = SignalSpec::from_wave_number(2.0, 343.0, 0.37).unwrap();
        let m = constant_medium(0.21, 1.3);
        let (p, pd, pdd, t) = (0.6_f64, -0.8_f64, 5.5_f64, 0.9_f64);
        let (a, c, k, b, w2) = (2.0_f64, 343.0, 0.37, 0.21, 1.3 * 1.3);
        let terms = [
            pdd * p * p / (a * a),
            -p * pd * pd,
            b * pd * p * p / (a * a),
            -b * c * k * p,
            -w2 * p * (p / a).acos(),
            -w2 * c * t * k * p,
        ];
        let expected: f64 = terms.iter().sum();
        let got = eq9_residual(p, pd, pdd, &s, &m, t).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn densities() {
        let s = spec();
        let m = constant_medium(0.5, 1.0);
        assert_eq!(
            hamiltonian_density(MilneState::new(1.0, 0.0), &s, &m, 0.0),
            -37.0
        );
        assert_eq!(
            lagrangian_density(MilneState::new(2.0, 0.0), &s, &m, 0.0),
            37.0 * 4.0
        );
        assert_eq!(
            hamiltonian_density(MilneState::new(0.0, 3.0), &s, &m, 1.0),
            4.5
        );
        let l = lagrangian_density(
            MilneState::new(1.0, 1.0),
            &s,
            &constant_medium(0.1, 1.0),
            1.0,
        );
        assert!((l - 81.9).abs() < 1e-12);
    }

    #[test]
    fn energy_stationary_form() {
        let s = spec();
        let m = constant_medium(0.5, 1.2);
        assert_eq!(milne_energy(0.0, 0.0, &s, &m, 3.0), 0.0);
        let (q, t) = (0.3, 0.8);
        let eq15 = -(stiffness(&s, &m, t) / 2.0) * q * q;
        assert_eq!(milne_energy(q, 0.0, &s, &m, t), eq15);
    }

    #[test]
    fn envelope_examples() {
        let s = spec();
        let m = constant_medium(0.5, 1.0);
        let tau = 0.4;
        let zero = envelope_q(1.0, tau, &s, &m, (FRAC_PI_2 + tau) / 2.0).unwrap();
        assert!(zero.q_squared.abs() < 1e-15 && zero.magnitude < 1e-7);
        let start = envelope_q(1.0, 0.0, &s, &m, 0.0).unwrap();
        assert!((start.q_squared - 2.0 / 74.0).abs() < 1e-15);
        assert!(start.imaginary_branch);
        let neg = envelope_q(1.0, 0.0, &s, &m, 1.0).unwrap();
        assert!((2.0_f64).cos() < 0.0 && !neg.imaginary_branch);
        // Feeding q^2 back recovers E_M cos(2t - tau).
        let e = milne_energy_of_square(start.q_square(), &s, &m, 0.0);
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_singularity() {
        let s = spec();
        let m = constant_medium(0.0, 1.0);
        assert_eq!(
            envelope_q(1.0, 0.0, &s, &m, 0.0),
            Err(Error::Singularity { t: 0.0 })
        );
        assert!(q_plus_minus_squared(1.0, 0.0, &s, &m, 0.0).is_err());
    }

    #[test]
    fn plus_minus_pair() {
        let s = spec();
        let m = constant_medium(0.5, 1.0);
        let (qp, qm) = q_plus_minus_squared(1.0, 0.0, &s, &m, 0.0).unwrap();
        assert!((qm - 0.027_027_027_027_027).abs() < 1e-15);
        assert_eq!(qp + qm, 0.0);
        let (qp, qm) = q_plus_minus_squared(1.0, 0.0, &s, &m, FRAC_PI_2 / 2.0).unwrap();
        assert!(qp.abs() < 1e-17 && qm.abs() < 1e-17);
    }

    #[test]
    fn amplitude_formula() {
        for i in 0..10 {
            let t = 0.37 * i as f64;
            let a = eq14_amplitude(0.25, 0.25, 0.2, t);
            assert!((a.magnitude - 0.5).abs() < 1e-15);
        }
        let a = eq14_amplitude(0.09, 4.0, 1.1, 1.1);
        assert_eq!(a.magnitude, 0.3);
        let (t, tau, qp) = (0.9, 0.2, -0.05);
        let a = eq14_amplitude(qp, -qp, tau, t);
        assert!((a.radicand - qp * (2.0 * (t - tau)).cos()).abs() < 1e-15);
        assert!(a.imaginary);
    }

    #[test]
    fn fixed_point_without_drive() {
        let s = spec();
        let m = constant_medium(0.0, 0.0);
        let traj = integrate_milne(
            &s,
            &m,
            (0.0, 5.0),
            None,
            Scheme::default(),
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.status(), Status::Completed);
        assert!(traj.states().iter().all(|st| st[0] == 1.0 && st[1] == 0.0));
    }

    #[test]
    fn strong_drive_blows_up_consistently() {
        let s = spec();
        let m = constant_medium(20.0, 1.0);
        let opts = SolverOptions::default();
        let fixed =
            integrate_milne(&s, &m, (0.0, 5.0), None, Scheme::Fixed { dt: 1e-4 }, &opts).unwrap();
        let adaptive = integrate_milne(
            &s,
            &m,
            (0.0, 5.0),
            None,
            Scheme::Adaptive {
                rtol: 1e-10,
                atol: 1e-12,
            },
            &opts,
        )
        .unwrap();
        assert_eq!(fixed.status(), Status::AbortedBlowup);
        assert_eq!(adaptive.status(), Status::AbortedBlowup);
        assert!(fixed.last().unwrap().1.is_finite());
        let (a, b) = (fixed.abort_time().unwrap(), adaptive.abort_time().unwrap());
        assert!((a - b).abs() <= 0.01 * b, "{a} vs {b}");
    }

    fn sampled(freq: f64, shift: f64, t1: f64) -> Trajectory {
        let n = (t1 / 1e-3) as usize;
        let times: Vec<f64> = (0..=n).map(|i| i as f64 * 1e-3).collect();
        let states = times
            .iter()
            .map(|&t| {
                let arg = freq * t - shift;
                StateVector::from([arg.cos(), -freq * arg.sin()])
            })
            .collect();
        Trajectory::from_samples(times, states).unwrap()
    }

    #[test]
    fn period_phase_of_reference() {
        let est = estimate_period_phase(&sampled(1.0, 0.0, 30.0), None).unwrap();
        assert!((est.tau - TAU).abs() < 1e-4);
        assert!(est.delta.abs() < 1e-4);
    }

    #[test]
    fn period_phase_of_shifted_signal() {
        let est = estimate_period_phase(&sampled(1.2, 0.3, 30.0), None).unwrap();
        assert!((est.tau - TAU / 1.2).abs() < 1e-3);
        assert!((est.delta - 0.3).abs() < 1e-3);
    }

    #[test]
    fn period_phase_needs_crossings() {
        let times: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let states = times
            .iter()
            .map(|_| StateVector::from([1.0, 0.0]))
            .collect();
        let flat = Trajectory::from_samples(times, states).unwrap();
        assert!(matches!(
            estimate_period_phase(&flat, None),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn summary_normalizes_and_flags() {
        let s = SignalSummary::new(0.5, 2.0, 3.0 * PI).unwrap();
        assert!((s.delta - PI).abs() < 1e-12);
        assert!(s.e_m_bound_violated);
        assert!(
            !SignalSummary::new(1.0, 2.0, 0.0)
                .unwrap()
                .e_m_bound_violated
        );
        assert!(SignalSummary::new(1.0, -2.0, 0.0).is_err());
        assert_eq!(wrap_angle(-PI), PI);
    }
}
