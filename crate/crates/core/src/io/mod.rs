//! Snapshot files and the run configuration format.

pub mod config;
pub mod snapshot;
