//! Explicit Runge–Kutta integration of first-order systems `y' = f(t, y)`.
//!
//! Two drivers share one [`Trajectory`] output type:
//!
//! - [`integrate_fixed`]: classic RK4 on a uniform grid, last step shortened to hit `t1`.
//! - [`integrate_adaptive`]: Dormand–Prince 5(4) with error-per-step control and
//!   cubic Hermite dense output between accepted steps.
//!
//! Divergence is reported through [`Status::AbortedBlowup`], not as an error.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_RTOL: f64 = 1e-9;
pub const DEFAULT_ATOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 10_000_000;
/// Blow-up threshold multiplier applied to `max(|y0|_inf, 1)`.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e6;

/// Ordered list of real state components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(components: Vec<f64>) -> Self {
        StateVector(components)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for StateVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for StateVector {
    fn from(v: Vec<f64>) -> Self {
        StateVector(v)
    }
}

impl<const N: usize> From<[f64; N]> for StateVector {
    fn from(v: [f64; N]) -> Self {
        StateVector(v.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Completed,
    AbortedBlowup,
    AbortedStepLimit,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::AbortedBlowup => "aborted-blowup",
            Status::AbortedStepLimit => "aborted-step-limit",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Time series of an integrated state.
///
/// Times are strictly increasing. When the run did not complete, `diagnostic` explains
/// why and the stored samples end at the last state that passed the blow-up guard.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<StateVector>,
    /// `f(t_i, y_i)` at every stored sample, when known. Enables Hermite interpolation.
    derivatives: Option<Vec<StateVector>>,
    status: Status,
    diagnostic: Option<String>,
    abort_time: Option<f64>,
}

impl Trajectory {
    /// Builds a completed trajectory from raw samples, e.g. a synthetic test signal.
    pub fn from_samples(times: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "{} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        Ok(Trajectory {
            times,
            states,
            derivatives: None,
            status: Status::Completed,
            diagnostic: None,
            abort_time: None,
        })
    }

    /// An empty trajectory with the given terminal status.
    pub fn empty(status: Status, diagnostic: Option<String>) -> Self {
        Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            derivatives: None,
            status,
            diagnostic,
            abort_time: None,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn derivatives(&self) -> Option<&[StateVector]> {
        self.derivatives.as_deref()
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn diagnostic(&self) -> Option<&str> {
        self.diagnostic.as_deref()
    }

    /// Time of the step that tripped the blow-up guard or the step limit.
    pub fn abort_time(&self) -> Option<f64> {
        self.abort_time
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &StateVector)> {
        self.times.last().copied().zip(self.states.last())
    }

    /// Values of state component `index` across all samples.
    pub fn component(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[index]).collect()
    }

    /// Dense evaluation inside the stored time span.
    ///
    /// Cubic Hermite between samples when derivatives are stored, linear otherwise.
    /// Returns `None` outside `[first, last]`.
    pub fn interpolate(&self, t: f64) -> Option<StateVector> {
        let (&first, &last) = (self.times.first()?, self.times.last()?);
        if !(t >= first && t <= last) {
            return None;
        }
        let i = match self.times.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(i) => return Some(self.states[i].clone()),
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (y0, y1) = (&self.states[i], &self.states[i + 1]);
        let out = match &self.derivatives {
            Some(d) => {
                let (f0, f1) = (&d[i], &d[i + 1]);
                let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
                let h10 = s * (1.0 - s) * (1.0 - s);
                let h01 = s * s * (3.0 - 2.0 * s);
                let h11 = s * s * (s - 1.0);
                (0..y0.len())
                    .map(|k| h00 * y0[k] + h10 * h * f0[k] + h01 * y1[k] + h11 * h * f1[k])
                    .collect()
            }
            None => (0..y0.len()).map(|k| y0[k] + s * (y1[k] - y0[k])).collect(),
        };
        Some(StateVector(out))
    }

    /// Keeps every `stride`-th sample plus the final one.
    pub fn subsample(&self, stride: usize) -> Trajectory {
        let stride = stride.max(1);
        let n = self.len();
        let keep: Vec<usize> = (0..n).filter(|&i| i % stride == 0 || i + 1 == n).collect();
        Trajectory {
            times: keep.iter().map(|&i| self.times[i]).collect(),
            states: keep.iter().map(|&i| self.states[i].clone()).collect(),
            derivatives: self
                .derivatives
                .as_ref()
                .map(|d| keep.iter().map(|&i| d[i].clone()).collect()),
            status: self.status,
            diagnostic: self.diagnostic.clone(),
            abort_time: self.abort_time,
        }
    }
}

/// Guards shared by both drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Absolute component bound; `None` means `1e6 * max(|y0|_inf, 1)`.
    pub blowup_threshold: Option<f64>,
    /// Attempted-step budget (accepted plus rejected).
    pub max_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            blowup_threshold: None,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl SolverOptions {
    fn threshold_for(&self, y0: &[f64]) -> f64 {
        self.blowup_threshold.unwrap_or_else(|| {
            let scale = y0.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            DEFAULT_BLOWUP_FACTOR * scale
        })
    }
}

fn check_span(y0: &[f64], t_span: (f64, f64)) -> Result<()> {
    let (t0, t1) = t_span;
    if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
        return Err(Error::InvalidArgument(format!(
            "time span [{t0}, {t1}] must satisfy t1 > t0"
        )));
    }
    if y0.is_empty() {
        return Err(Error::InvalidArgument("initial state is empty".into()));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("initial state is not finite".into()));
    }
    Ok(())
}

struct Recorder {
    times: Vec<f64>,
    states: Vec<StateVector>,
    derivatives: Vec<StateVector>,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            times: Vec::new(),
            states: Vec::new(),
            derivatives: Vec::new(),
        }
    }

    fn push(&mut self, t: f64, y: &[f64], f: &[f64]) {
        self.times.push(t);
        self.states.push(StateVector(y.to_vec()));
        self.derivatives.push(StateVector(f.to_vec()));
    }

    fn finish(
        self,
        status: Status,
        diagnostic: Option<String>,
        abort_time: Option<f64>,
    ) -> Trajectory {
        Trajectory {
            times: self.times,
            states: self.states,
            derivatives: Some(self.derivatives),
            status,
            diagnostic,
            abort_time,
        }
    }
}

fn all_finite(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn exceeds(v: &[f64], threshold: f64) -> bool {
    v.iter().any(|x| !(x.abs() <= threshold))
}

/// Classic fourth-order Runge–Kutta with constant step `dt`.
///
/// The grid is `t0 + i*dt`; the final step is shortened so the last sample lands on `t1`.
pub fn integrate_fixed<F>(
    rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    dt: f64,
    options: &SolverOptions,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    check_span(y0, t_span)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step dt = {dt} must be positive"
        )));
    }
    let (t0, t1) = t_span;
    let threshold = options.threshold_for(y0);
    let n = y0.len();

    let ratio = (t1 - t0) / dt;
    let steps = if (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) {
        ratio.round().max(1.0) as usize
    } else {
        ratio.ceil() as usize
    };
    if steps > options.max_steps {
        return Ok(Trajectory::empty(
            Status::AbortedStepLimit,
            Some(format!(
                "{steps} steps requested, limit is {}",
                options.max_steps
            )),
        ));
    }

    let mut rec = Recorder::new();
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    rhs(t0, &y, &mut k1);
    if !all_finite(&k1) {
        return Ok(Trajectory::empty(
            Status::AbortedBlowup,
            Some(format!("non-finite derivative at t = {t0}")),
        ));
    }
    rec.push(t0, &y, &k1);

    let mut t = t0;
    for i in 1..=steps {
        let t_next = if i == steps { t1 } else { t0 + i as f64 * dt };
        let h = t_next - t;

        for k in 0..n {
            tmp[k] = y[k] + 0.5 * h * k1[k];
        }
        rhs(t + 0.5 * h, &tmp, &mut k2);
        for k in 0..n {
            tmp[k] = y[k] + 0.5 * h * k2[k];
        }
        rhs(t + 0.5 * h, &tmp, &mut k3);
        for k in 0..n {
            tmp[k] = y[k] + h * k3[k];
        }
        rhs(t_next, &tmp, &mut k4);
        for k in 0..n {
            tmp[k] = y[k] + h * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]) / 6.0;
        }

        if exceeds(&tmp, threshold) {
            let diag = if all_finite(&tmp) {
                format!("|state| exceeded blow-up threshold {threshold:e} at t = {t_next}")
            } else {
                format!("non-finite state at t = {t_next}")
            };
            return Ok(rec.finish(Status::AbortedBlowup, Some(diag), Some(t_next)));
        }
        rhs(t_next, &tmp, &mut k1);
        if !all_finite(&k1) {
            return Ok(rec.finish(
                Status::AbortedBlowup,
                Some(format!("non-finite derivative at t = {t_next}")),
                Some(t_next),
            ));
        }
        y.copy_from_slice(&tmp);
        t = t_next;
        rec.push(t, &y, &k1);
    }
    Ok(rec.finish(Status::Completed, None, None))
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

fn error_norm(err: &[f64], y: &[f64], y_new: &[f64], rtol: f64, atol: f64) -> f64 {
    let sum: f64 = err
        .iter()
        .zip(y.iter().zip(y_new))
        .map(|(e, (a, b))| {
            let scale = atol + rtol * a.abs().max(b.abs());
            (e / scale).powi(2)
        })
        .sum();
    (sum / err.len() as f64).sqrt()
}

/// Adaptive Dormand–Prince 5(4) integration.
///
/// Every accepted step is stored together with its derivative, so
/// [`Trajectory::interpolate`] gives cubic Hermite dense output.
pub fn integrate_adaptive<F>(
    rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    rtol: f64,
    atol: f64,
    options: &SolverOptions,
) -> Result<Trajectory>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    check_span(y0, t_span)?;
    if !(rtol > 0.0 && atol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerances rtol = {rtol}, atol = {atol} must be positive"
        )));
    }
    let (t0, t1) = t_span;
    let threshold = options.threshold_for(y0);
    let n = y0.len();

    let mut rec = Recorder::new();
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];

    rhs(t0, &y, &mut k1);
    if !all_finite(&k1) {
        return Ok(Trajectory::empty(
            Status::AbortedBlowup,
            Some(format!("non-finite derivative at t = {t0}")),
        ));
    }
    rec.push(t0, &y, &k1);

    let mut h = initial_step(&rhs, t0, &y, &k1, t1 - t0, rtol, atol);
    let mut t = t0;
    let mut attempts = 0usize;

    while t < t1 {
        if attempts >= options.max_steps {
            return Ok(rec.finish(
                Status::AbortedStepLimit,
                Some(format!(
                    "step limit {} reached at t = {t}",
                    options.max_steps
                )),
                Some(t),
            ));
        }
        attempts += 1;

        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 8.0 * f64::EPSILON * t.abs().max(1.0) {
            return Ok(rec.finish(
                Status::AbortedStepLimit,
                Some(format!("step size underflow at t = {t}")),
                Some(t),
            ));
        }

        for k in 0..n {
            tmp[k] = y[k] + h * A21 * k1[k];
        }
        rhs(t + C2 * h, &tmp, &mut k2);
        for k in 0..n {
            tmp[k] = y[k] + h * (A31 * k1[k] + A32 * k2[k]);
        }
        rhs(t + C3 * h, &tmp, &mut k3);
        for k in 0..n {
            tmp[k] = y[k] + h * (A41 * k1[k] + A42 * k2[k] + A43 * k3[k]);
        }
        rhs(t + C4 * h, &tmp, &mut k4);
        for k in 0..n {
            tmp[k] = y[k] + h * (A51 * k1[k] + A52 * k2[k] + A53 * k3[k] + A54 * k4[k]);
        }
        rhs(t + C5 * h, &tmp, &mut k5);
        for k in 0..n {
            tmp[k] =
                y[k] + h * (A61 * k1[k] + A62 * k2[k] + A63 * k3[k] + A64 * k4[k] + A65 * k5[k]);
        }
        let t_next = if last { t1 } else { t + h };
        rhs(t_next, &tmp, &mut k6);
        for k in 0..n {
            y_new[k] = y[k] + h * (B1 * k1[k] + B3 * k3[k] + B4 * k4[k] + B5 * k5[k] + B6 * k6[k]);
        }
        rhs(t_next, &y_new, &mut k7);
        for k in 0..n {
            err[k] =
                h * (E1 * k1[k] + E3 * k3[k] + E4 * k4[k] + E5 * k5[k] + E6 * k6[k] + E7 * k7[k]);
        }

        let norm = error_norm(&err, &y, &y_new, rtol, atol);
        if !norm.is_finite() {
            // Stage values overflowed; retry smaller unless the step is already tiny.
            h *= MIN_FACTOR;
            continue;
        }
        if norm <= 1.0 {
            if exceeds(&y_new, threshold) || !all_finite(&k7) {
                let diag = if all_finite(&y_new) && all_finite(&k7) {
                    format!("|state| exceeded blow-up threshold {threshold:e} at t = {t_next}")
                } else {
                    format!("non-finite state or derivative at t = {t_next}")
                };
                return Ok(rec.finish(Status::AbortedBlowup, Some(diag), Some(t_next)));
            }
            t = t_next;
            y.copy_from_slice(&y_new);
            k1.copy_from_slice(&k7);
            rec.push(t, &y, &k1);
            let factor = if norm == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= factor;
        } else {
            h *= (SAFETY * norm.powf(-0.2)).max(MIN_FACTOR);
        }
    }
    Ok(rec.finish(Status::Completed, None, None))
}

/// Starting step from the Hairer–Nørsett–Wanner heuristic.
fn initial_step<F>(rhs: &F, t0: f64, y0: &[f64], f0: &[f64], span: f64, rtol: f64, atol: f64) -> f64
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y0.len() as f64;
    let scale: Vec<f64> = y0.iter().map(|v| atol + rtol * v.abs()).collect();
    let rms = |v: &[f64]| {
        (v.iter()
            .zip(&scale)
            .map(|(a, s)| (a / s).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
    };
    let d0 = rms(y0);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);

    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![0.0; y0.len()];
    rhs(t0 + h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms(&diff) / h0;
    let h1 = if !d2.is_finite() {
        h0 * 1e-3
    } else if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn decay(_t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = -y[0];
    }

    fn harmonic(_t: f64, y: &[f64], dy: &mut [f64]) {
        dy[0] = y[1];
        dy[1] = -y[0];
    }

    fn final_value(traj: &Trajectory, index: usize) -> f64 {
        traj.last().unwrap().1[index]
    }

    #[test]
    fn fixed_exponential_decay() {
        let traj =
            integrate_fixed(decay, &[1.0], (0.0, 1.0), 1e-3, &SolverOptions::default()).unwrap();
        assert_eq!(traj.status(), Status::Completed);
        assert_eq!(traj.last().unwrap().0, 1.0);
        assert!((final_value(&traj, 0) - (-1.0_f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn fixed_cosine_at_pi() {
        let traj = integrate_fixed(
            harmonic,
            &[1.0, 0.0],
            (0.0, PI),
            1e-3,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.last().unwrap().0, PI);
        assert!((final_value(&traj, 0) + 1.0).abs() < 1e-6);
    }

    #[test]
    fn fixed_critical_damping() {
        // x'' + 2x' + x = 0, x(t) = (1 + t) e^-t
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -2.0 * y[1] - y[0];
        };
        let traj = integrate_fixed(
            rhs,
            &[1.0, 0.0],
            (0.0, 1.0),
            1e-3,
            &SolverOptions::default(),
        )
        .unwrap();
        assert!((final_value(&traj, 0) - 2.0 / E).abs() < 1e-8);
    }

    #[test]
    fn fixed_final_partial_step_lands_on_t1() {
        let traj =
            integrate_fixed(decay, &[1.0], (0.0, 1.05), 0.1, &SolverOptions::default()).unwrap();
        let times = traj.times();
        assert_eq!(times.len(), 12);
        assert_eq!(*times.last().unwrap(), 1.05);
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn adaptive_exponential_decay() {
        let traj = integrate_adaptive(
            decay,
            &[1.0],
            (0.0, 1.0),
            1e-10,
            1e-12,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(traj.status(), Status::Completed);
        assert!((final_value(&traj, 0) - 0.3678794412).abs() < 1e-9);
    }

    #[test]
    fn adaptive_unit_sine() {
        let traj = integrate_adaptive(
            harmonic,
            &[0.0, 1.0],
            (0.0, PI / 2.0),
            1e-10,
            1e-12,
            &SolverOptions::default(),
        )
        .unwrap();
        assert!((final_value(&traj, 0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn adaptive_overdamped_matches_closed_form() {
        // x'' + 10x' + x = 0, x(0) = 1, x'(0) = 0; roots r = (-10 ± sqrt(96))/2.
        // x(1) = 0.913233658133308 from the closed form (mpmath, 30 digits)
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -10.0 * y[1] - y[0];
        };
        let traj = integrate_adaptive(
            rhs,
            &[1.0, 0.0],
            (0.0, 1.0),
            1e-10,
            1e-12,
            &SolverOptions::default(),
        )
        .unwrap();
        assert!((final_value(&traj, 0) - 0.913233658133308).abs() < 1e-8);
    }

    #[test]
    fn hermite_dense_output_tracks_cosine() {
        let traj = integrate_adaptive(
            harmonic,
            &[1.0, 0.0],
            (0.0, 10.0),
            1e-10,
            1e-12,
            &SolverOptions::default(),
        )
        .unwrap();
        for i in 0..1000 {
            let t = i as f64 * 0.01;
            let y = traj.interpolate(t).unwrap();
            assert!((y[0] - t.cos()).abs() < 1e-7, "t = {t}");
        }
        assert!(traj.interpolate(10.5).is_none());
    }

    #[test]
    fn blowup_is_a_status() {
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0];
        // y' = y^2, y(0) = 1 diverges at t = 1; |y| = 1e3 at t = 0.999.
        let opts = SolverOptions {
            blowup_threshold: Some(1e3),
            ..SolverOptions::default()
        };
        let fixed = integrate_fixed(rhs, &[1.0], (0.0, 2.0), 1e-4, &opts).unwrap();
        assert_eq!(fixed.status(), Status::AbortedBlowup);
        assert!(fixed.diagnostic().is_some());
        let (t_last, y_last) = fixed.last().unwrap();
        assert!(t_last < 1.0 && y_last.is_finite());
        let adaptive = integrate_adaptive(rhs, &[1.0], (0.0, 2.0), 1e-9, 1e-12, &opts).unwrap();
        assert_eq!(adaptive.status(), Status::AbortedBlowup);
        let (a, b) = (fixed.abort_time().unwrap(), adaptive.abort_time().unwrap());
        assert!((a - 1.0).abs() < 1e-3 && (b - 1.0).abs() < 1e-3);
    }

    #[test]
    fn non_finite_initial_derivative_yields_empty_trajectory() {
        let rhs = |_t: f64, _y: &[f64], dy: &mut [f64]| dy[0] = f64::NAN;
        let traj =
            integrate_fixed(rhs, &[1.0], (0.0, 1.0), 0.1, &SolverOptions::default()).unwrap();
        assert!(traj.is_empty());
        assert_eq!(traj.status(), Status::AbortedBlowup);
    }

    #[test]
    fn step_limit_status() {
        let opts = SolverOptions {
            blowup_threshold: None,
            max_steps: 5,
        };
        let traj =
            integrate_adaptive(harmonic, &[1.0, 0.0], (0.0, 100.0), 1e-10, 1e-12, &opts).unwrap();
        assert_eq!(traj.status(), Status::AbortedStepLimit);
        assert!(traj.diagnostic().unwrap().contains("step limit"));
    }

    #[test]
    fn rejects_bad_arguments() {
        let opts = SolverOptions::default();
        assert!(integrate_fixed(decay, &[1.0], (1.0, 0.0), 0.1, &opts).is_err());
        assert!(integrate_fixed(decay, &[1.0], (0.0, 1.0), 0.0, &opts).is_err());
        assert!(integrate_adaptive(decay, &[1.0], (0.0, 1.0), 0.0, 1e-9, &opts).is_err());
    }

    #[test]
    fn subsample_keeps_endpoints() {
        let traj =
            integrate_fixed(decay, &[1.0], (0.0, 1.0), 0.1, &SolverOptions::default()).unwrap();
        let sub = traj.subsample(3);
        assert_eq!(sub.times().first(), Some(&0.0));
        assert_eq!(sub.times().last(), Some(&1.0));
        assert_eq!(sub.len(), 5);
    }
}
