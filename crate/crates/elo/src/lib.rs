//! Energy–latency trade-off toolkit for a wireless sensor that compresses
//! before transmitting.
//!
//! The crate models a single sensor–base-station uplink in two operating
//! modes and solves the constrained design problem in each:
//!
//! * **power-constrained** — minimize a reliability quantile of the
//!   end-to-end latency (compression + ARQ transmission + decompression)
//!   under a total energy budget ([`power_scenario`]);
//! * **time-constrained** — minimize total energy within a fixed slot
//!   split between compression and packet-coded transmission, under a
//!   delivery-reliability floor ([`time_scenario`]).
//!
//! [`comp_model`] and [`comm_model`] hold the physical models,
//! [`specfun`] the numerical kernel, [`montecarlo`] an independent
//! stochastic oracle for every analytic quantity, and [`validate`] the
//! oracle suite run by `elo validate`. [`config`] and [`output`] handle
//! run configuration and deterministic data export.

pub mod comm_model;
pub mod comp_model;
pub mod config;
pub mod montecarlo;
pub mod output;
pub mod power_scenario;
pub mod specfun;
pub mod time_scenario;
pub mod validate;

pub use config::{parse_config, RunConfig, Scenario, SystemParams};
pub use output::run;
