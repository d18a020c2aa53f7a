//! Damped and parametric harmonic oscillators, `x'' + beta(t) x' + omega(t)^2 x = 0`.

use crate::error::{Error, Result};
use crate::medium::{beta_at, omega_at, MediumSpec};
use crate::solver::{integrate_fixed, SolverOptions, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorState {
    pub x: f64,
    pub v: f64,
}

impl OscillatorState {
    pub fn new(x: f64, v: f64) -> Self {
        OscillatorState { x, v }
    }

    /// `v^2/2 + omega^2 x^2/2`
    pub fn energy(&self, omega: f64) -> f64 {
        0.5 * self.v * self.v + 0.5 * omega * omega * self.x * self.x
    }
}

/// Time derivative `(x', x'')` of the constant-coefficient oscillator.
pub fn damped_rhs(state: OscillatorState, beta: f64, omega: f64) -> OscillatorState {
    OscillatorState {
        x: state.v,
        v: -beta * state.v - omega * omega * state.x,
    }
}

/// Time derivative with coefficients taken from the medium at `t`.
pub fn parametric_rhs(
    state: OscillatorState,
    medium: &MediumSpec,
    t: f64,
) -> Result<OscillatorState> {
    let omega = omega_at(medium.omega_profile(), t)?;
    let beta = beta_at(medium.beta_profile(), t)?;
    Ok(damped_rhs(state, beta, omega))
}

/// Closed-form solution of the constant-coefficient oscillator.
///
/// The critical branch is taken when `|beta - 2 omega| <= 1e-12 * max(beta, 2 omega)`.
pub fn analytic_constant_solution(
    beta: f64,
    omega: f64,
    x0: f64,
    v0: f64,
    t: f64,
) -> OscillatorState {
    let gamma = 0.5 * beta;
    let two_omega = 2.0 * omega;
    if (beta - two_omega).abs() <= 1e-12 * beta.max(two_omega) {
        let decay = (-gamma * t).exp();
        let slope = v0 + gamma * x0;
        OscillatorState {
            x: decay * (x0 + slope * t),
            v: decay * (slope - gamma * (x0 + slope * t)),
        }
    } else if beta < two_omega {
        let wd = (omega * omega - gamma * gamma).sqrt();
        let decay = (-gamma * t).exp();
        let (s, c) = (wd * t).sin_cos();
        let b = (v0 + gamma * x0) / wd;
        OscillatorState {
            x: decay * (x0 * c + b * s),
            v: decay * ((b * wd - gamma * x0) * c - (x0 * wd + gamma * b) * s),
        }
    } else {
        let root = (gamma * gamma - omega * omega).sqrt();
        let (r1, r2) = (-gamma + root, -gamma - root);
        let c1 = (v0 - r2 * x0) / (r1 - r2);
        let c2 = (r1 * x0 - v0) / (r1 - r2);
        let (e1, e2) = ((r1 * t).exp(), (r2 * t).exp());
        OscillatorState {
            x: c1 * e1 + c2 * e2,
            v: c1 * r1 * e1 + c2 * r2 * e2,
        }
    }
}

/// Fixed-step RK4 integration of the parametric oscillator through `medium`.
pub fn integrate_parametric(
    medium: &MediumSpec,
    initial: OscillatorState,
    t_span: (f64, f64),
    dt: f64,
    options: &SolverOptions,
) -> Result<Trajectory> {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let w = medium.omega(t);
        let d = damped_rhs(OscillatorState::new(y[0], y[1]), medium.beta(t), w);
        dy[0] = d.x;
        dy[1] = d.v;
    };
    integrate_fixed(rhs, &[initial.x, initial.v], t_span, dt, options)
}

/// Residual `x'' + beta x' + omega^2 x` along a uniformly sampled trajectory, with
/// `x''` from central second differences of the stored positions.
///
/// Returns `(t_i, residual_i)` for interior samples inside `window`.
pub fn constant_coefficient_residual(
    trajectory: &Trajectory,
    beta: f64,
    omega: f64,
    window: (f64, f64),
) -> Result<Vec<(f64, f64)>> {
    let times = trajectory.times();
    if times.len() < 3 {
        return Err(Error::InsufficientData(
            "residual needs at least three samples".into(),
        ));
    }
    let states = trajectory.states();
    let mut out = Vec::new();
    for i in 1..times.len() - 1 {
        let t = times[i];
        if t < window.0 || t > window.1 {
            continue;
        }
        let (h0, h1) = (t - times[i - 1], times[i + 1] - t);
        let (x0, x1, x2) = (states[i - 1][0], states[i][0], states[i + 1][0]);
        let accel = 2.0 * (h0 * x2 - (h0 + h1) * x1 + h1 * x0) / (h0 * h1 * (h0 + h1));
        out.push((t, accel + beta * states[i][1] + omega * omega * x1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::CoefficientProfile;
    use std::f64::consts::{E, PI};

    #[test]
    fn damped_rhs_substitution() {
        assert_eq!(
            damped_rhs(OscillatorState::new(1.0, 0.0), 0.0, 1.0),
            OscillatorState::new(0.0, -1.0)
        );
        assert_eq!(
            damped_rhs(OscillatorState::new(0.0, 1.0), 2.0, 1.0),
            OscillatorState::new(1.0, -2.0)
        );
        assert_eq!(
            damped_rhs(OscillatorState::new(1.0, 1.0), 0.5, 2.0),
            OscillatorState::new(1.0, -4.5)
        );
    }

    #[test]
    fn parametric_reduces_to_damped_for_constant_profiles() {
        let medium = MediumSpec::new(
            CoefficientProfile::constant(1.0),
            CoefficientProfile::constant(0.7),
            1480.0,
        )
        .unwrap();
        for i in 0..50 {
            let t = -5.0 + 0.2 * i as f64;
            let s = OscillatorState::new(t.sin(), 0.3 * t);
            assert_eq!(
                parametric_rhs(s, &medium, t).unwrap(),
                damped_rhs(s, 0.7, 1.0)
            );
        }
    }

    #[test]
    fn parametric_bump_peak_and_tail() {
        let medium = MediumSpec::new(
            CoefficientProfile::gaussian_bump(1.0, 0.5, 3.0, 1.0),
            CoefficientProfile::constant(0.0),
            1480.0,
        )
        .unwrap();
        let d = parametric_rhs(OscillatorState::new(1.0, 0.0), &medium, 3.0).unwrap();
        assert_eq!(d, OscillatorState::new(0.0, -2.25));
        let s = OscillatorState::new(0.4, -0.9);
        let far = parametric_rhs(s, &medium, 3.0 + 20.0).unwrap();
        let unit = damped_rhs(s, 0.0, 1.0);
        assert!((far.v - unit.v).abs() < 1e-10);
    }

    #[test]
    fn analytic_branches() {
        let full = analytic_constant_solution(0.0, 1.0, 1.0, 0.0, 2.0 * PI);
        assert!((full.x - 1.0).abs() < 1e-12 && full.v.abs() < 1e-12);
        let crit = analytic_constant_solution(2.0, 1.0, 1.0, 0.0, 1.0);
        assert!((crit.x - 2.0 / E).abs() < 1e-15);
        // Overdamped closed form with roots (-3 ± sqrt 5)/2, evaluated in mpmath.
        let over = analytic_constant_solution(3.0, 1.0, 1.0, 0.0, 1.0);
        assert!((over.x - 0.786645599303368).abs() < 1e-14);
        assert!((over.v + 0.272608937662529).abs() < 1e-14);
    }

    #[test]
    fn analytic_velocity_is_derivative() {
        for &beta in &[0.0, 0.5, 2.0, 3.0] {
            let h = 1e-6;
            let t = 1.3;
            let a = analytic_constant_solution(beta, 1.0, 0.7, -0.4, t - h);
            let b = analytic_constant_solution(beta, 1.0, 0.7, -0.4, t + h);
            let mid = analytic_constant_solution(beta, 1.0, 0.7, -0.4, t);
            assert!(
                ((b.x - a.x) / (2.0 * h) - mid.v).abs() < 1e-8,
                "beta = {beta}"
            );
        }
    }

    #[test]
    fn residual_of_exact_cosine_is_small() {
        let medium = MediumSpec::quiescent();
        let traj = integrate_parametric(
            &medium,
            OscillatorState::new(1.0, 0.0),
            (0.0, 10.0),
            1e-3,
            &SolverOptions::default(),
        )
        .unwrap();
        let res = constant_coefficient_residual(&traj, 0.0, 1.0, (1.0, 9.0)).unwrap();
        assert!(!res.is_empty());
        assert!(res.iter().all(|(_, r)| r.abs() < 1e-6));
    }
}
