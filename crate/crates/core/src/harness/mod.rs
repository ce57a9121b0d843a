//! Experiment orchestration: configuration, scenario execution, activation
//! sweeps and the canned paper suite. This layer owns all file I/O.

pub mod demo;
mod experiment;
pub mod io;
mod spec;
mod sweep;

pub use experiment::{execute, run_experiment, Estimate, ExperimentOutcome, ExperimentSummary, HeatRow};
pub use spec::{
    BellSection, DemonSection, EnvironmentSection, ExperimentSpec, OutputSection, Scenario, SteeringSection, TableSet,
};
pub use sweep::{
    emit_plot_data, hierarchy_comparison, read_plot_data, sweep_activation, HierarchyRow, SweepResult, SweepRow,
    Threshold,
};
