//! Scenario files, the end-to-end pipeline and its CSV/JSON outputs.

mod config;
mod export;
mod run;

pub use config::*;
pub use export::*;
pub use run::*;
