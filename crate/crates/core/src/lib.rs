//! Acoustic signal propagation through a medium of parametric harmonic oscillators.
//!
//! The medium is an oscillator whose frequency `omega(t)` and damping `beta(t)` vary in
//! time and settle to unit frequency away from the interaction. The travelling carrier
//! `alpha cos(k(x - ct))` is substituted into the oscillator, giving a Milne-type
//! nonlinear equation for the pressure `p(t)`. From it the crate derives the Milne
//! energy (effective signal strength), the effective period `tau` and phase shift
//! `delta`, the envelope `q`, and the 2x2 transition matrix of the medium.
//!
//! Modules:
//!
//! - [`solver`]: RK4 and Dormand–Prince integrators with a blow-up guard.
//! - [`medium`]: coefficient profiles `omega(t)`, `beta(t)`.
//! - [`oscillator`]: damped and parametric oscillator dynamics and closed forms.
//! - [`signal`]: carrier, d'Alembert pairs, wave-equation residual, position inversion.
//! - [`milne`]: pressure equation, energy functionals, envelope, period/phase extraction.
//! - [`transition`]: composed and expanded transition matrices.
//! - [`environment`]: sea-surface spectrum and sine-hill bathymetry.
//! - [`scenario`]: JSON scenario files, the end-to-end pipeline, CSV/JSON export.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod environment;
pub mod error;
pub mod medium;
pub mod milne;
pub mod oscillator;
pub mod scenario;
pub mod signal;
pub mod solver;
pub mod transition;

pub use error::{Error, Result};
