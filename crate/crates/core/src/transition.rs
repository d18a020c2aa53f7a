//! Medium transition matrix `M = D inner D` and its expanded closed form.
//!
//! The two forms do not agree in general (the expanded entries use `delta` where the
//! product yields `2 delta`, and drop cross terms). Both are kept and
//! [`compare_forms`] measures how far apart they are.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::medium::MediumSpec;
use crate::milne::q_plus_minus_squared;
use crate::signal::SignalSpec;

/// Row-major 2x2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Matrix2([[m11, m12], [m21, m22]])
    }

    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn transpose(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Matrix2([[a, c], [b, d]])
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> [f64; 4] {
        let [[a, b], [c, d]] = self.0;
        [a, b, c, d]
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|v| v.is_finite())
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (self.0, rhs.0);
        Matrix2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// `D = [[cos tau, -sin tau], [sin tau, cos tau]]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix {
    angle: f64,
    matrix: Matrix2,
}

impl RotationMatrix {
    pub fn matrix(&self) -> Matrix2 {
        self.matrix
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Angle reduced to `[0, 2 pi)` for display.
    pub fn reported_angle(&self) -> f64 {
        self.angle.rem_euclid(TAU)
    }
}

pub fn rotation(tau: f64) -> RotationMatrix {
    let (s, c) = tau.sin_cos();
    RotationMatrix {
        angle: tau,
        matrix: Matrix2::new(c, -s, s, c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `D inner D` evaluated as a matrix product.
    Composed,
    /// The printed closed form of the product.
    Expanded,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Composed => "composed",
            Provenance::Expanded => "expanded",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inputs a transition matrix was built from. `e_m` and `t` are absent when the
/// squared envelope amplitudes were injected directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionParams {
    pub e_m: Option<f64>,
    pub delta: f64,
    pub tau: f64,
    pub t: Option<f64>,
    pub q_plus_sq: f64,
    pub q_minus_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub matrix: Matrix2,
    pub provenance: Provenance,
    pub params: TransitionParams,
}

/// `[[cos 2d, q-^2 sin 2d], [-q+^2 sin 2d, cos 2d]]`
pub fn inner_matrix(q_plus_sq: f64, q_minus_sq: f64, delta: f64) -> Matrix2 {
    let (s, c) = (2.0 * delta).sin_cos();
    Matrix2::new(c, q_minus_sq * s, -q_plus_sq * s, c)
}

/// `D inner D` from explicit squared amplitudes.
pub fn composed_from_squares(q_plus_sq: f64, q_minus_sq: f64, delta: f64, tau: f64) -> Matrix2 {
    let d = rotation(tau).matrix();
    d * inner_matrix(q_plus_sq, q_minus_sq, delta) * d
}

/// The closed form with single-angle `delta`, entry by entry as printed.
pub fn expanded_from_squares(q_plus_sq: f64, q_minus_sq: f64, delta: f64, tau: f64) -> Matrix2 {
    let (st, ct) = tau.sin_cos();
    let (sd, cd) = delta.sin_cos();
    Matrix2::new(
        ct * cd + q_minus_sq * st * sd,
        q_minus_sq * sd * ct - st * cd,
        st * cd - q_plus_sq * sd * ct,
        cd * ct + q_plus_sq * st * sd,
    )
}

fn params(
    e_m: f64,
    delta: f64,
    tau: f64,
    t: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
) -> Result<TransitionParams> {
    let (q_plus_sq, q_minus_sq) = q_plus_minus_squared(e_m, tau, spec, medium, t)?;
    Ok(TransitionParams {
        e_m: Some(e_m),
        delta,
        tau,
        t: Some(t),
        q_plus_sq,
        q_minus_sq,
    })
}

pub fn transition_composed(
    e_m: f64,
    delta: f64,
    tau: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> Result<TransitionMatrix> {
    let params = params(e_m, delta, tau, t, spec, medium)?;
    Ok(TransitionMatrix {
        matrix: composed_from_squares(params.q_plus_sq, params.q_minus_sq, delta, tau),
        provenance: Provenance::Composed,
        params,
    })
}

pub fn transition_expanded(
    e_m: f64,
    delta: f64,
    tau: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> Result<TransitionMatrix> {
    let params = params(e_m, delta, tau, t, spec, medium)?;
    Ok(TransitionMatrix {
        matrix: expanded_from_squares(params.q_plus_sq, params.q_minus_sq, delta, tau),
        provenance: Provenance::Expanded,
        params,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormComparison {
    pub composed: TransitionMatrix,
    pub expanded: TransitionMatrix,
    /// Largest elementwise `|composed - expanded|`.
    pub discrepancy: f64,
}

pub fn compare_forms(
    e_m: f64,
    delta: f64,
    tau: f64,
    spec: &SignalSpec,
    medium: &MediumSpec,
    t: f64,
) -> Result<FormComparison> {
    let composed = transition_composed(e_m, delta, tau, spec, medium, t)?;
    let expanded = transition_expanded(e_m, delta, tau, spec, medium, t)?;
    Ok(FormComparison {
        discrepancy: composed.matrix.max_abs_diff(&expanded.matrix),
        composed,
        expanded,
    })
}
