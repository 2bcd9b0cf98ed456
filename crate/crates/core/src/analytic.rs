//! Closed-form and quadrature evaluation of the coverage probabilities.
//!
//! Everything here is a pure function of its arguments. The downlink
//! expressions are valid on the threshold domain tau_b >= 1 and reject
//! anything below it; the simulator in [`crate::montecarlo`] covers the
//! general domain.

use crate::error::{Error, Result};
use crate::params::{NetworkParams, PropagationConstants};
use crate::quad;
use crate::special::gamma;

/// Absolute tolerance requested from the downlink coverage quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Subdivision budget for the downlink coverage quadrature.
const QUAD_MAX_SUBDIV: usize = 200;

/// Power-law path loss (kappa |x|)^beta at distance `x_distance`.
pub fn path_loss(x_distance: f64, params: &NetworkParams) -> f64 {
    debug_assert!(x_distance >= 0.0);
    (params.kappa * x_distance).powf(params.beta)
}

/// Laplace transform of the aggregate device interference at argument `xi`,
/// for an effective (already thinned) device constant `a_d_effective`:
/// exp(-a_D Gamma(1 - 2/beta) xi^(2/beta)).
pub fn laplace_device_interference(xi: f64, a_d_effective: f64, beta: f64) -> f64 {
    debug_assert!(xi >= 0.0);
    (-a_d_effective * gamma(1.0 - 2.0 / beta) * xi.powf(2.0 / beta)).exp()
}

/// Downlink coverage probability in closed form:
/// tau_b^(-2/beta) / (Gamma(1+2/beta) Gamma(1-2/beta)) * a_B / (a_B + a_D + sum a_extra).
///
/// Valid only on tau_b >= 1; smaller thresholds are rejected because no
/// closed expression is available below that edge.
pub fn coverage_downlink_closed(
    pc: &PropagationConstants,
    tau_b: f64,
    beta: f64,
) -> Result<f64> {
    if tau_b < 1.0 {
        return Err(Error::ThresholdBelowOne(tau_b));
    }
    let q = 2.0 / beta;
    let c = gamma(1.0 + q) * gamma(1.0 - q);
    Ok(tau_b.powf(-q) / c * pc.a_b / pc.total())
}

/// Downlink coverage probability by numerical quadrature of the integral
/// form, for an arbitrary device-interference Laplace transform.
///
/// The integrand is rewritten with t = u^2, which turns the Gaussian
/// factor into a plain exponential:
///
///   P = tau_b^(-2/beta) / Gamma(1+2/beta)
///       * int_0^T exp(-t Gamma(1-2/beta)) L((a_B^(-1/2) sqrt t)^beta) dt,
///
/// truncated where the exponential envelope falls below 1e-14 of its peak.
pub fn coverage_downlink_integral<L: Fn(f64) -> f64>(
    pc: &PropagationConstants,
    tau_b: f64,
    beta: f64,
    laplace_id: L,
) -> Result<f64> {
    if tau_b < 1.0 {
        return Err(Error::ThresholdBelowOne(tau_b));
    }
    debug_assert!(
        (laplace_id(0.0) - 1.0).abs() < 1e-12,
        "a Laplace transform of a nonnegative variable must be 1 at 0"
    );
    let q = 2.0 / beta;
    let g = gamma(1.0 - q);
    // The integrand is bounded by exp(-t g); cut where that envelope
    // reaches 1e-14 of its peak value at t = 0.
    let t_max = -(1e-14f64).ln() / g;
    let half_beta = beta / 2.0;
    let a_b_scale = pc.a_b.powf(-half_beta);
    let integrand = |t: f64| (-t * g).exp() * laplace_id(a_b_scale * t.powf(half_beta));
    let r = quad::integrate(integrand, 0.0, t_max, QUAD_TOL, QUAD_MAX_SUBDIV)?;
    Ok(tau_b.powf(-q) / gamma(1.0 + q) * r.value)
}

/// Device-to-device coverage probability at link distance `r`:
/// exp(-(a_B + a_D) r^2 Gamma(1 - 2/beta) tau_d^(2/beta)).
pub fn coverage_d2d(pc: &PropagationConstants, r: f64, tau_d: f64, beta: f64) -> f64 {
    debug_assert!(r >= 0.0 && tau_d > 0.0);
    let q = 2.0 / beta;
    (-pc.total() * r * r * gamma(1.0 - q) * tau_d.powf(q)).exp()
}
