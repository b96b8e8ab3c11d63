//! Experiment harness for the proxgrad toolkit: problem generation, method
//! sweeps, telemetry CSVs, bound-verification reports, and the acceptance
//! suite.

pub mod config;
pub mod instance_io;
pub mod report;
pub mod runner;
pub mod telemetry;
pub mod verify;
