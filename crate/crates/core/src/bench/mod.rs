//! Experiment drivers and file formats behind the command-line harness.

pub mod converge;
pub mod csv;
pub mod grid;
pub mod io;
pub mod plot;
pub mod real;

pub use converge::{run_convergence, ConvergenceSpec, TrajectoryRow};
pub use csv::{
    parse_grid_csv, parse_trajectory_csv, write_grid_csv, write_grid_row, write_real_csv,
    write_trajectory_csv,
};
pub use grid::{
    run_cell, run_phase_grid, run_phase_grid_with, run_trial, GridCellRecord, GridSpec,
};
pub use io::{GraphFormat, ValueRange};
pub use real::{
    build_graph, load_graph, run_real, LoadOptions, RealGraph, RealRunOptions, RealSummary,
};
