use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use milne_ffi::*;

const SCENARIO: &str = r#"{
  "signal": {"amplitude": 1.0, "sound_speed": 1.0, "wave_number": 0.1},
  "medium": {"beta": {"kind": "constant", "base": 0.5}},
  "time": {"t0": 1.0, "t1": 1.1},
  "dynamical_params": {"e_m": 0.5, "delta": 0.3, "tau": 1.0},
  "outputs": ["trajectory", "summary", "envelope", "transition"]
}"#;

fn last_error() -> String {
    let p = milne_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn load(text: &str) -> *mut MilneConfig {
    let json = CString::new(text).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { milne_config_load(json.as_ptr(), &mut cfg) },
        MilneStatus::Ok
    );
    assert!(!cfg.is_null());
    cfg
}

#[test]
fn run_and_read_back() {
    let cfg = load(SCENARIO);
    let mut res = ptr::null_mut();
    unsafe {
        assert_eq!(milne_run(cfg, &mut res), MilneStatus::Ok);

        let mut status = MilneSolverStatus::NotRun;
        let mut last = 0.0;
        assert_eq!(
            milne_result_solver_status(res, &mut status, &mut last),
            MilneStatus::Ok
        );
        assert_eq!(status, MilneSolverStatus::Completed);
        assert!((last - 1.1).abs() < 1e-12);

        let mut summary = MilneSummary {
            e_m: 0.0,
            tau: 0.0,
            delta: 0.0,
            e_m_bound_violated: false,
        };
        assert_eq!(milne_result_summary(res, &mut summary), MilneStatus::Ok);
        assert_eq!(summary.e_m, 0.5);
        assert!(summary.e_m_bound_violated);

        let mut len = 0usize;
        let status = milne_result_trajectory(
            res,
            ptr::null_mut(),
            ptr::null_mut(),
            ptr::null_mut(),
            0,
            &mut len,
        );
        assert_eq!(status, MilneStatus::BufferTooSmall);
        assert_eq!(len, 11);
        let (mut t, mut p, mut pd) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
        let status = milne_result_trajectory(
            res,
            t.as_mut_ptr(),
            p.as_mut_ptr(),
            pd.as_mut_ptr(),
            len,
            &mut len,
        );
        assert_eq!(status, MilneStatus::Ok);
        assert_eq!(t[0], 1.0);
        assert_eq!(p[0], 1.0);
        assert_eq!(pd[0], 0.0);

        milne_result_free(res);
        milne_config_free(cfg);
    }
}

#[test]
fn exports_match_between_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = load(SCENARIO);
    let mut texts = Vec::new();
    for i in 0..2 {
        let mut res = ptr::null_mut();
        unsafe {
            assert_eq!(milne_run(cfg, &mut res), MilneStatus::Ok);
            let csv = CString::new(dir.path().join(format!("t{i}.csv")).to_str().unwrap()).unwrap();
            let json =
                CString::new(dir.path().join(format!("s{i}.json")).to_str().unwrap()).unwrap();
            assert_eq!(
                milne_result_export_csv(res, MilneProduct::Transition, csv.as_ptr()),
                MilneStatus::Ok
            );
            assert_eq!(
                milne_result_export_json(res, json.as_ptr()),
                MilneStatus::Ok
            );

            let bathy = CString::new(dir.path().join("b.csv").to_str().unwrap()).unwrap();
            assert_eq!(
                milne_result_export_csv(res, MilneProduct::Bathymetry, bathy.as_ptr()),
                MilneStatus::NotComputed
            );
            assert!(last_error().contains("bathymetry"));
            milne_result_free(res);
        }
        texts.push((
            std::fs::read(dir.path().join(format!("t{i}.csv"))).unwrap(),
            std::fs::read(dir.path().join(format!("s{i}.json"))).unwrap(),
        ));
    }
    assert_eq!(texts[0], texts[1]);
    unsafe { milne_config_free(cfg) };
}

#[test]
fn error_codes() {
    let mut cfg = ptr::null_mut();
    unsafe {
        assert_eq!(
            milne_config_load(ptr::null(), &mut cfg),
            MilneStatus::NullPointer
        );
        let bad =
            CString::new(r#"{"signal": {"amplitude": 1.0}, "time": {"t1": 1.0}, "bogus": 1}"#)
                .unwrap();
        assert_eq!(
            milne_config_load(bad.as_ptr(), &mut cfg),
            MilneStatus::Parse
        );
        assert!(cfg.is_null());
        assert!(last_error().contains("bogus"));
        let invalid =
            CString::new(r#"{"signal": {"amplitude": -1.0}, "time": {"t1": 1.0}}"#).unwrap();
        assert_eq!(
            milne_config_load(invalid.as_ptr(), &mut cfg),
            MilneStatus::Validation
        );
        let mut s = 0.0;
        assert_eq!(milne_surface_psd(10.0, 0.0, &mut s), MilneStatus::Domain);
        assert_eq!(
            milne_surface_psd(10.0, 0.1, ptr::null_mut()),
            MilneStatus::NullPointer
        );
        milne_config_free(ptr::null_mut());
        milne_result_free(ptr::null_mut());
    }
}

#[test]
fn scalar_entry_points() {
    unsafe {
        let mut s = 0.0;
        assert_eq!(milne_surface_psd(10.0, 0.1, &mut s), MilneStatus::Ok);
        assert!((s - 1.984_004_190_719_867).abs() < 1e-12);
        assert_eq!(milne_psd_peak_wavenumber(10.0, &mut s), MilneStatus::Ok);
        assert!((s - 0.068_973_413_235_342_6).abs() < 1e-15);

        let mut r = MilneMatrix2 { m: [0.0; 4] };
        assert_eq!(
            milne_rotation(std::f64::consts::FRAC_PI_2, &mut r),
            MilneStatus::Ok
        );
        assert!((r.m[1] + 1.0).abs() < 1e-15 && (r.m[2] - 1.0).abs() < 1e-15);

        let cfg = load(SCENARIO);
        let mut env = MilneEnvelope {
            t: 0.0,
            q_squared: 0.0,
            magnitude: 0.0,
            imaginary_branch: false,
        };
        assert_eq!(
            milne_envelope(cfg, 1.0, 1.0, 0.0, &mut env),
            MilneStatus::Ok
        );
        assert!(env.imaginary_branch);
        let (mut a, mut b, mut d) = (r, r, 0.0);
        assert_eq!(
            milne_transition(
                cfg,
                1.0,
                0.0,
                std::f64::consts::FRAC_PI_4,
                1.0,
                &mut a,
                &mut b,
                &mut d
            ),
            MilneStatus::Ok
        );
        assert!((d - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        milne_config_free(cfg);

        let v = CStr::from_ptr(milne_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/milne_ffi.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "milne_config_load",
        "milne_run",
        "milne_result_free",
        "MILNE_STATUS_SINGULARITY",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler available; skipping syntax check");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
