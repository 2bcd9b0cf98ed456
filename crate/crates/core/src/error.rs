use thiserror::Error;

/// Errors produced by parameter validation and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scenario parameter violates its domain; carries the offending field.
    #[error("invalid parameter `{field}` = {value}: {rule}")]
    InvalidParam {
        field: &'static str,
        value: f64,
        rule: &'static str,
    },

    /// The downlink closed form is only valid on the threshold domain tau_b >= 1.
    #[error("downlink SIR threshold tau_b = {0} is below 1; the coverage expression holds only for tau_b >= 1")]
    ThresholdBelowOne(f64),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: value {value:e}, achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence {
        value: f64,
        achieved: f64,
        requested: f64,
    },

    /// The device tier cannot support an interior throughput optimum.
    #[error("degenerate device tier: {0}")]
    DegenerateDeviceTier(&'static str),

    /// Two fading models were required to share the same 2/beta moment.
    #[error("fading moment mismatch: {0} vs {1}")]
    MomentMismatch(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;
