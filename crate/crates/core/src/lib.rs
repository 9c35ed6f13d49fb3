//! Simulation engine for a single solid-state qubit driven by a polarized
//! oscillating field while dephasing along its quantization axis.
//!
//! The state lives in the closed Bloch ball. [`dynamics`] integrates its
//! equation of motion in scaled time along three deliberately independent
//! routes (fixed-step RK4 on the Bloch vector, the exact propagator, and an
//! RK4 on the density matrix that never touches the Bloch right-hand side),
//! [`observables`] turns trajectories into purity, von Neumann entropy,
//! Bloch-norm and fidelity series plus decay summaries, and [`scenario`]
//! packages the named figure presets, grid sweeps and the long-time
//! saturation check built on top.

pub mod dynamics;
mod error;
pub mod linalg;
pub mod observables;
pub mod qubit;
pub mod scenario;

pub use dynamics::{
    bloch_rhs, density_rhs, density_trajectory, fixed_point, generator, integrate,
    propagate_exact, rk4_step, FieldParams, FixedPointSet, Generator, Method, ModelParams,
    Trajectory,
};
pub use error::{Error, Result};
pub use linalg::Mat3;
pub use observables::{
    bloch_norm, decay_summary, decay_summary_with_threshold, entropy, fidelity, overlap, purity,
    series, Classification, DecaySummary, ObservableSeries, TrackedObservable, PLATEAU_PURITY,
};
pub use qubit::{
    bloch_to_density, density_to_bloch, validate_density, BlochVector, DensityMatrix,
    ValidationReport, PHYS_TOL,
};
pub use scenario::{
    figure_scenario, preset_ids, run_scenario, saturation_check, summarize_runs, sweep,
    sweep_with, InitialState, SaturationReport, SaturationStatus, ScenarioRun, ScenarioSpec,
    SweepResult, SweepRow, PRESET_DTAU, PRESET_GAMMA_D, SATURATION_SPAN,
};
