//! SIR coverage and device-to-device spatial throughput for Poisson
//! cellular networks.
//!
//! The crate has three layers:
//!
//! - [`analytic`]: closed-form coverage probabilities and their integral
//!   form, built on the propagation constants of [`params`];
//! - [`optimize`]: the constrained maximization of the device spatial
//!   throughput over the activity probability, with sweep and
//!   density-scaling helpers;
//! - [`montecarlo`]: an independent stochastic-geometry simulator that
//!   estimates every coverage probability by direct sampling, used to
//!   cross-check the formulas.
//!
//! All analytic operations are pure functions; the simulator is
//! deterministic for a fixed seed regardless of parallelism.

pub mod analytic;
mod error;
pub mod montecarlo;
pub mod optimize;
pub mod params;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use optimize::{OptimizationResult, Regime, ScalingRow, SweepRow};
pub use params::{NetworkParams, PropagationConstants, RMode};
