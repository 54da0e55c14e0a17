//! Batch tooling around `sizeramsey-core`: colouring adversaries, experiment
//! campaigns, coupling statistics and report files.

pub mod colour;
pub mod coupling;
pub mod experiment;
pub mod io;

pub use colour::{colour_host, Strategy};
pub use coupling::{coupling_marginal_test, CouplingKind, CouplingReport, CouplingSetup};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport, PatternSource};
