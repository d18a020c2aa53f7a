//! C ABI for `milne-core`.
//!
//! Every fallible function returns a [`MilneStatus`] and writes results through
//! out-pointers. On failure, [`milne_last_error`] returns a message describing the most
//! recent error on the calling thread. Objects created by `*_load` / `milne_run` are
//! opaque and must be released with the matching `*_free`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use milne_core::environment::{psd_peak_wavenumber, surface_psd, SurfaceSpectrumParams};
use milne_core::milne::envelope_q;
use milne_core::scenario::{
    export_csv, export_json, load_config, run_scenario, ProductKind, ScenarioConfig, ScenarioResult,
};
use milne_core::solver::Status;
use milne_core::transition::{compare_forms, rotation, Matrix2};
use milne_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilneStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    InvalidProfile = 5,
    Domain = 6,
    Singularity = 7,
    InsufficientData = 8,
    InvalidArgument = 9,
    NotComputed = 10,
    Io = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilneSolverStatus {
    Completed = 0,
    AbortedBlowup = 1,
    AbortedStepLimit = 2,
    /// Nothing in the scenario required integrating the pressure equation.
    NotRun = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MilneProduct {
    Trajectory = 0,
    Summary = 1,
    Envelope = 2,
    Transition = 3,
    Spectrum = 4,
    Bathymetry = 5,
}

impl From<MilneProduct> for ProductKind {
    fn from(p: MilneProduct) -> Self {
        match p {
            MilneProduct::Trajectory => ProductKind::Trajectory,
            MilneProduct::Summary => ProductKind::Summary,
            MilneProduct::Envelope => ProductKind::Envelope,
            MilneProduct::Transition => ProductKind::Transition,
            MilneProduct::Spectrum => ProductKind::Spectrum,
            MilneProduct::Bathymetry => ProductKind::Bathymetry,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilneSummary {
    pub e_m: f64,
    pub tau: f64,
    pub delta: f64,
    pub e_m_bound_violated: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilneEnvelope {
    pub t: f64,
    pub q_squared: f64,
    pub magnitude: f64,
    pub imaginary_branch: bool,
}

/// Row-major 2x2 matrix `[m11, m12, m21, m22]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilneMatrix2 {
    pub m: [f64; 4],
}

impl From<Matrix2> for MilneMatrix2 {
    fn from(m: Matrix2) -> Self {
        MilneMatrix2 { m: m.entries() }
    }
}

/// Opaque validated scenario.
pub struct MilneConfig(ScenarioConfig);

/// Opaque scenario result.
pub struct MilneResult(ScenarioResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MilneStatus {
    match e {
        Error::InvalidProfile(_) => MilneStatus::InvalidProfile,
        Error::Domain(_) => MilneStatus::Domain,
        Error::Singularity { .. } => MilneStatus::Singularity,
        Error::InsufficientData(_) => MilneStatus::InsufficientData,
        Error::InvalidArgument(_) => MilneStatus::InvalidArgument,
        Error::Validation(_) => MilneStatus::Validation,
        Error::Parse { .. } => MilneStatus::Parse,
        Error::NotComputed { .. } => MilneStatus::NotComputed,
        Error::Io(_) => MilneStatus::Io,
    }
}

struct Failure(MilneStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MilneStatus::NullPointer, format!("{what} is null"))
}

fn guard<F>(body: F) -> MilneStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MilneStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MilneStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Failure(
            MilneStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the most recent failure on this thread, or null if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn milne_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn milne_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a JSON scenario document.
#[no_mangle]
pub unsafe extern "C" fn milne_config_load(
    json: *const c_char,
    out: *mut *mut MilneConfig,
) -> MilneStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let cfg = load_config(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(MilneConfig(cfg)));
        Ok(())
    })
}

/// Copy of `config` with a different seed.
#[no_mangle]
pub unsafe extern "C" fn milne_config_with_seed(
    config: *const MilneConfig,
    seed: u64,
    out: *mut *mut MilneConfig,
) -> MilneStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let cfg = ref_arg(config, "config")?;
        *out = Box::into_raw(Box::new(MilneConfig(cfg.0.with_seed(seed))));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn milne_config_free(config: *mut MilneConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the full pipeline. A solver blow-up still yields a result; inspect
/// [`milne_result_solver_status`].
#[no_mangle]
pub unsafe extern "C" fn milne_run(
    config: *const MilneConfig,
    out: *mut *mut MilneResult,
) -> MilneStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let cfg = ref_arg(config, "config")?;
        let res = run_scenario(&cfg.0)?;
        *out = Box::into_raw(Box::new(MilneResult(res)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn milne_result_free(result: *mut MilneResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Solver status and the time of the last finite sample (NaN when there is none).
#[no_mangle]
pub unsafe extern "C" fn milne_result_solver_status(
    result: *const MilneResult,
    status: *mut MilneSolverStatus,
    last_finite_time: *mut f64,
) -> MilneStatus {
    guard(|| {
        let res = ref_arg(result, "result")?;
        let status = out_arg(status, "status")?;
        let (s, t) = match &res.0.solver {
            None => (MilneSolverStatus::NotRun, None),
            Some(r) => (
                match r.status {
                    Status::Completed => MilneSolverStatus::Completed,
                    Status::AbortedBlowup => MilneSolverStatus::AbortedBlowup,
                    Status::AbortedStepLimit => MilneSolverStatus::AbortedStepLimit,
                },
                r.last_finite_time,
            ),
        };
        *status = s;
        if let Some(out) = last_finite_time.as_mut() {
            *out = t.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// The `E_M`, `tau`, `delta` used for the envelope and transition products.
#[no_mangle]
pub unsafe extern "C" fn milne_result_summary(
    result: *const MilneResult,
    out: *mut MilneSummary,
) -> MilneStatus {
    guard(|| {
        let res = ref_arg(result, "result")?;
        let out = out_arg(out, "out")?;
        let s = res.0.dynamical.ok_or_else(|| {
            Failure(
                MilneStatus::NotComputed,
                res.0
                    .summary
                    .skip_reason()
                    .unwrap_or("summary not available")
                    .to_owned(),
            )
        })?;
        *out = MilneSummary {
            e_m: s.e_m,
            tau: s.tau,
            delta: s.delta,
            e_m_bound_violated: s.e_m_bound_violated,
        };
        Ok(())
    })
}

/// Copies the trajectory into caller buffers of `capacity` elements each.
///
/// `len` always receives the sample count. Pass null buffers with capacity 0 to query
/// it; a short buffer returns `BufferTooSmall` without copying.
#[no_mangle]
pub unsafe extern "C" fn milne_result_trajectory(
    result: *const MilneResult,
    t: *mut f64,
    p: *mut f64,
    p_dot: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> MilneStatus {
    guard(|| {
        let res = ref_arg(result, "result")?;
        let len = out_arg(len, "len")?;
        let traj = res.0.trajectory.data().ok_or_else(|| {
            Failure(
                MilneStatus::NotComputed,
                res.0
                    .trajectory
                    .skip_reason()
                    .unwrap_or("trajectory not requested")
                    .to_owned(),
            )
        })?;
        let n = traj.len();
        *len = n;
        if n == 0 {
            return Ok(());
        }
        if capacity < n {
            return Err(Failure(
                MilneStatus::BufferTooSmall,
                format!("trajectory needs {n} elements, buffer holds {capacity}"),
            ));
        }
        if t.is_null() || p.is_null() || p_dot.is_null() {
            return Err(null("trajectory buffer"));
        }
        let (t, p, p_dot) = (
            std::slice::from_raw_parts_mut(t, n),
            std::slice::from_raw_parts_mut(p, n),
            std::slice::from_raw_parts_mut(p_dot, n),
        );
        for (i, (time, s)) in traj.times().iter().zip(traj.states()).enumerate() {
            t[i] = *time;
            p[i] = s[0];
            p_dot[i] = s[1];
        }
        Ok(())
    })
}

/// Writes one product as CSV to `path`.
#[no_mangle]
pub unsafe extern "C" fn milne_result_export_csv(
    result: *const MilneResult,
    product: MilneProduct,
    path: *const c_char,
) -> MilneStatus {
    guard(|| {
        let res = ref_arg(result, "result")?;
        let path = str_arg(path, "path")?;
        export_csv(&res.0, product.into(), Path::new(path))?;
        Ok(())
    })
}

/// Writes the JSON run summary to `path`.
#[no_mangle]
pub unsafe extern "C" fn milne_result_export_json(
    result: *const MilneResult,
    path: *const c_char,
) -> MilneStatus {
    guard(|| {
        let res = ref_arg(result, "result")?;
        let path = str_arg(path, "path")?;
        export_json(&res.0, Path::new(path))?;
        Ok(())
    })
}

/// Sea-surface spectral density at wavenumber `k` with the standard constants.
#[no_mangle]
pub unsafe extern "C" fn milne_surface_psd(wind_speed: f64, k: f64, out: *mut f64) -> MilneStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = surface_psd(&SurfaceSpectrumParams::with_wind_speed(wind_speed), k)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn milne_psd_peak_wavenumber(wind_speed: f64, out: *mut f64) -> MilneStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = psd_peak_wavenumber(&SurfaceSpectrumParams::with_wind_speed(wind_speed))?;
        Ok(())
    })
}

/// Envelope at time `t` in the medium of `config`.
#[no_mangle]
pub unsafe extern "C" fn milne_envelope(
    config: *const MilneConfig,
    e_m: f64,
    tau: f64,
    t: f64,
    out: *mut MilneEnvelope,
) -> MilneStatus {
    guard(|| {
        let cfg = ref_arg(config, "config")?;
        let out = out_arg(out, "out")?;
        let s = envelope_q(e_m, tau, cfg.0.signal(), cfg.0.medium(), t)?;
        *out = MilneEnvelope {
            t: s.t,
            q_squared: s.q_squared,
            magnitude: s.magnitude,
            imaginary_branch: s.imaginary_branch,
        };
        Ok(())
    })
}

/// Both transition-matrix forms at time `t` and their largest elementwise difference.
/// Any of the out-pointers may be null.
#[no_mangle]
pub unsafe extern "C" fn milne_transition(
    config: *const MilneConfig,
    e_m: f64,
    delta: f64,
    tau: f64,
    t: f64,
    composed: *mut MilneMatrix2,
    expanded: *mut MilneMatrix2,
    discrepancy: *mut f64,
) -> MilneStatus {
    guard(|| {
        let cfg = ref_arg(config, "config")?;
        let cmp = compare_forms(e_m, delta, tau, cfg.0.signal(), cfg.0.medium(), t)?;
        if let Some(out) = composed.as_mut() {
            *out = cmp.composed.matrix.into();
        }
        if let Some(out) = expanded.as_mut() {
            *out = cmp.expanded.matrix.into();
        }
        if let Some(out) = discrepancy.as_mut() {
            *out = cmp.discrepancy;
        }
        Ok(())
    })
}

/// `D = [[cos tau, -sin tau], [sin tau, cos tau]]`
#[no_mangle]
pub unsafe extern "C" fn milne_rotation(tau: f64, out: *mut MilneMatrix2) -> MilneStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = rotation(tau).matrix().into();
        Ok(())
    })
}
