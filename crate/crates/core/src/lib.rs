//! Canonical quadratic and cubic Kadomtsev–Petviashvili equations for weakly
//! nonlinear, weakly dispersive waves in elastic solids.
//!
//! * [`material`]: material constants to canonical equation coefficients.
//! * [`transforms`]: coordinate maps between physical, slow and canonical variables.
//! * [`analytic`]: line solitons, initial data, shock distance.
//! * [`spectral`]: Fourier integrating-factor RK4 solver.
//! * [`io`]: snapshot files and run configuration.
//! * [`validation`]: reference checks against exact solutions.
//! * [`cli`]: the `kp` command line.

// `!(x > 0.0)` is the NaN-rejecting guard used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod io;
pub mod material;
pub mod spectral;
pub mod transforms;
pub mod validation;
