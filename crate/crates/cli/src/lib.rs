//! Batch experiment runner for the otsim simulator.
//!
//! [`config`] describes an experiment (protocol, logical input, error plan,
//! trial count), [`runner`] executes it into a deterministic [`report`], and
//! [`verify`] re-runs the kernel-equivalence, phase, and constants checks
//! behind the `otsim verify` subcommand.

pub mod config;
pub mod report;
pub mod rng;
pub mod runner;
pub mod verify;
