//! Batch front end for the diffeo workbench: suite runner, report bundles and plots.

pub mod checks;
pub mod cli;
pub mod config;
pub mod plot;
pub mod suite;

pub use config::{Budgets, Fault, SuiteConfig};
pub use plot::{emit_plot, Curve};
pub use suite::{run_suite, SuiteOutcome};
