//! Reproducible experiment driver for the product-formula lab: scenario
//! registry, seeded instance generation, config ingestion with dotted-path
//! overrides, and deterministic report emission.

pub mod config;
pub mod instance;
pub mod runner;
pub mod scenario;
