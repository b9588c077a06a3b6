//! Doubly periodic Fourier discretisation and time stepping.

mod diagnostics;
mod fft;
mod field;
mod grid;
mod operators;
mod stepper;

use thiserror::Error;

use crate::io::snapshot::Snapshot;

pub use diagnostics::{diagnostics, Diagnostics, Peak};
pub use fft::{Fft2, Spectrum};
pub use field::Field2D;
pub use grid::{make_grid, wavenumbers, Domain, SpectralGrid, MIN_POINTS};
pub use operators::{
    derivative, kp_residual, linear_symbol, nonlinear_coefficient, nonlinear_term, two_thirds_keeps, Dealias,
    LinearSymbol, ZeroModePolicy, DEFAULT_EPS_REG,
};
pub use stepper::{
    run, sha256_hex, step_ifrk4, DiagnosticsSample, Rk4Workspace, RunOutput, SolverConfig, StageFactors, Stepper,
    FACTOR_SATURATION,
};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("non-finite values in {0}")]
    NonFinite(String),
    #[error("numerical instability at t = {time} (step {step})")]
    Instability { time: f64, step: usize, last_finite: Box<Snapshot> },
}
