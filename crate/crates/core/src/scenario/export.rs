use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{Error, Result};

use crate::environment::BathymetrySample;
use crate::milne::{EnvelopeSample, SignalSummary};
use crate::solver::Trajectory;

use super::config::ProductKind;
use super::run::{Product, ScenarioResult, TransitionSample};

pub const SCHEMA_VERSION: &str = "1";
pub const SUMMARY_FILE: &str = "summary.json";

fn num(out: &mut String, v: f64) {
    let _ = write!(out, "{v:.16e}");
}

fn row(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        num(out, *v);
    }
    out.push('\n');
}

fn missing<T>(product: &Product<T>, kind: ProductKind) -> Error {
    Error::NotComputed {
        product: kind.as_str().into(),
        reason: match product {
            Product::Skipped(r) => r.clone(),
            Product::NotRequested => "not requested".into(),
            Product::Data(_) => unreachable!(),
        },
    }
}

/// `t,p,p_dot`
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,p,p_dot\n");
    for (t, s) in traj.times().iter().zip(traj.states()) {
        row(&mut out, &[*t, s[0], s[1]]);
    }
    out
}

/// `e_m,tau,delta,e_m_bound_violated`
pub fn summary_csv(s: &SignalSummary) -> String {
    let mut out = String::from("e_m,tau,delta,e_m_bound_violated\n");
    num(&mut out, s.e_m);
    out.push(',');
    num(&mut out, s.tau);
    out.push(',');
    num(&mut out, s.delta);
    let _ = writeln!(out, ",{}", s.e_m_bound_violated);
    out
}

/// `t,q_squared,magnitude,imaginary_branch`
pub fn envelope_csv(samples: &[EnvelopeSample]) -> String {
    let mut out = String::from("t,q_squared,magnitude,imaginary_branch\n");
    for s in samples {
        num(&mut out, s.t);
        out.push(',');
        num(&mut out, s.q_squared);
        out.push(',');
        num(&mut out, s.magnitude);
        let _ = writeln!(out, ",{}", s.imaginary_branch);
    }
    out
}

/// `t,m11,m12,m21,m22,provenance,discrepancy`, composed row first at each time.
pub fn transition_csv(samples: &[TransitionSample]) -> String {
    let mut out = String::from("t,m11,m12,m21,m22,provenance,discrepancy\n");
    for s in samples {
        for m in [&s.composed, &s.expanded] {
            num(&mut out, s.t);
            for e in m.matrix.entries() {
                out.push(',');
                num(&mut out, e);
            }
            let _ = write!(out, ",{},", m.provenance);
            num(&mut out, s.discrepancy);
            out.push('\n');
        }
    }
    out
}

/// `k,S`
pub fn spectrum_csv(samples: &[(f64, f64)]) -> String {
    let mut out = String::from("k,S\n");
    for (k, s) in samples {
        row(&mut out, &[*k, *s]);
    }
    out
}

/// `x,zeta`
pub fn bathymetry_csv(samples: &[BathymetrySample]) -> String {
    let mut out = String::from("x,zeta\n");
    for s in samples {
        row(&mut out, &[s.x, s.zeta]);
    }
    out
}

/// Renders one product of a run as CSV text with a header row.
pub fn csv_string(result: &ScenarioResult, kind: ProductKind) -> Result<String> {
    fn get<T>(p: &Product<T>, kind: ProductKind) -> Result<&T> {
        p.data().ok_or_else(|| missing(p, kind))
    }
    Ok(match kind {
        ProductKind::Trajectory => trajectory_csv(get(&result.trajectory, kind)?),
        ProductKind::Summary => summary_csv(get(&result.summary, kind)?),
        ProductKind::Envelope => envelope_csv(get(&result.envelope, kind)?),
        ProductKind::Transition => transition_csv(get(&result.transition, kind)?),
        ProductKind::Spectrum => spectrum_csv(get(&result.spectrum, kind)?),
        ProductKind::Bathymetry => bathymetry_csv(get(&result.bathymetry, kind)?),
    })
}

pub fn export_csv(result: &ScenarioResult, kind: ProductKind, path: &Path) -> Result<()> {
    let text = csv_string(result, kind)?;
    fs::write(path, text)?;
    Ok(())
}

pub fn csv_file_name(kind: ProductKind) -> String {
    format!("{}.csv", kind.as_str())
}

fn product_entry<T>(product: &Product<T>, kind: ProductKind, rows: impl Fn(&T) -> usize) -> Value {
    match product {
        Product::Data(d) => json!({
            "status": "written",
            "file": csv_file_name(kind),
            "rows": rows(d),
        }),
        Product::Skipped(r) => json!({ "status": "skipped", "reason": r }),
        Product::NotRequested => json!({ "status": "not-requested" }),
    }
}

/// The machine-readable run summary. Key order is fixed, so equal inputs give
/// byte-identical output.
pub fn json_report(result: &ScenarioResult) -> Value {
    let config: Value = serde_json::to_value(result.config.document())
        .expect("scenario documents always serialize");
    let summary = match (&result.dynamical, &result.summary) {
        (Some(s), _) => json!({
            "e_m": s.e_m,
            "tau": s.tau,
            "delta": s.delta,
            "source": result.summary_source,
            "flags": { "e_m_bound_violated": s.e_m_bound_violated },
        }),
        (None, Product::Skipped(r)) => json!({ "status": "skipped", "reason": r }),
        (None, _) => Value::Null,
    };
    let solver = match &result.solver {
        Some(r) => json!({
            "status": r.status.as_str(),
            "diagnostic": r.diagnostic,
            "last_finite_time": r.last_finite_time,
            "abort_time": r.abort_time,
            "accepted_steps": r.accepted_steps,
        }),
        None => Value::Null,
    };
    let d = &result.diagnostics;
    let diagnostics = json!({
        "milne_energy": d.milne_energy,
        "e_m_bound_violated": d.e_m_bound_violated,
        "tau": d.period_phase.map(|p| p.tau),
        "delta": d.period_phase.map(|p| p.delta),
        "zero_crossings": d.period_phase.map(|p| p.crossings),
        "period_phase_error": d.period_phase_error,
    });
    let max_discrepancy = result
        .transition
        .data()
        .map(|v| v.iter().map(|s| s.discrepancy).fold(0.0_f64, f64::max));
    let products = json!({
        "trajectory": product_entry(&result.trajectory, ProductKind::Trajectory, |t| t.len()),
        "summary": product_entry(&result.summary, ProductKind::Summary, |_| 1),
        "envelope": product_entry(&result.envelope, ProductKind::Envelope, |v| v.len()),
        "transition": product_entry(&result.transition, ProductKind::Transition, |v| 2 * v.len()),
        "spectrum": product_entry(&result.spectrum, ProductKind::Spectrum, |v| v.len()),
        "bathymetry": product_entry(&result.bathymetry, ProductKind::Bathymetry, |v| v.len()),
    });
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "summary": summary,
        "solver": solver,
        "diagnostics": diagnostics,
        "transition_max_discrepancy": max_discrepancy,
        "products": products,
    })
}

pub fn json_string(result: &ScenarioResult) -> String {
    let mut text =
        serde_json::to_string_pretty(&json_report(result)).expect("json values serialize");
    text.push('\n');
    text
}

pub fn export_json(result: &ScenarioResult, path: &Path) -> Result<()> {
    fs::write(path, json_string(result))?;
    Ok(())
}

/// Writes every computed product as `<product>.csv` plus `summary.json` into `dir`.
/// Returns the paths written.
pub fn write_outputs(result: &ScenarioResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for kind in ProductKind::ALL {
        if kind == ProductKind::Summary || !result.config.requests(kind) {
            continue;
        }
        match csv_string(result, kind) {
            Ok(text) => {
                let path = dir.join(csv_file_name(kind));
                fs::write(&path, text)?;
                written.push(path);
            }
            Err(Error::NotComputed { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let path = dir.join(SUMMARY_FILE);
    export_json(result, &path)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{load_config, run_scenario};

    fn result() -> ScenarioResult {
        let cfg = load_config(
            r#"{"signal": {"amplitude": 1.0, "wave_number": 0.1},
                "medium": {"beta": {"kind": "constant", "base": 0.5}},
                "time": {"t0": 1.0, "t1": 1.05},
                "dynamical_params": {"e_m": 1.0, "delta": 0.3, "tau": 1.0},
                "outputs": ["trajectory", "envelope", "transition"]}"#,
        )
        .unwrap();
        run_scenario(&cfg).unwrap()
    }

    #[test]
    fn csv_layout() {
        let r = result();
        let traj = csv_string(&r, ProductKind::Trajectory).unwrap();
        let lines: Vec<&str> = traj.lines().collect();
        assert_eq!(lines[0], "t,p,p_dot");
        assert_eq!(lines.len(), 1 + r.config.output_grid().len());
        assert!(lines[1].starts_with("1.0000000000000000e0,"));
        let tr = csv_string(&r, ProductKind::Transition).unwrap();
        assert!(tr.lines().nth(1).unwrap().contains(",composed,"));
        assert!(tr.lines().nth(2).unwrap().contains(",expanded,"));
        assert!(!tr.contains("\r"));
        assert!(matches!(
            csv_string(&r, ProductKind::Spectrum),
            Err(Error::NotComputed { .. })
        ));
    }

    #[test]
    fn json_is_deterministic() {
        let a = json_string(&result());
        let b = json_string(&result());
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["summary"]["source"], "supplied");
        assert_eq!(v["summary"]["flags"]["e_m_bound_violated"], false);
        assert_eq!(v["solver"]["status"], "completed");
    }
}
