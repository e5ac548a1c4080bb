//! Experiment driver for blind centrality selection: configuration, seeded
//! sweeps over random graph models, CSV result files and SVG plots.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod plot;
pub mod records;

pub use config::{ExperimentConfig, ModelKind, PValue, SampleSize};
pub use error::{HarnessError, Result};
pub use experiment::{
    draw_graph, eigengap_table, localization_profile, run_experiment, run_trial, GraphModel,
    PreparedFilter, PreparedGraph,
};
pub use records::{TrialMeasurement, TrialOutcome, TrialRecord};
