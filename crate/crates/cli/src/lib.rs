//! Command pipelines and scenario handling for the `sirnet` binary.

pub mod commands;
pub mod scenario;
