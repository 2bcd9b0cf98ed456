//! Scenario parameters and the per-tier propagation constants.

use crate::error::{Error, Result};
use crate::special::gamma;

/// Smallest admissible path-loss exponent. The coverage formulas contain
/// Gamma(1 - 2/beta), which diverges as beta -> 2, so values at or below
/// this edge are rejected outright.
pub const BETA_MIN: f64 = 2.0 + 1e-6;

/// How the device-to-device link distance r is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RMode {
    /// r = 1/(2 sqrt(lambda_d)): mean spacing between neighbouring devices.
    IntraCell,
    /// r = 1/(2 sqrt(lambda_b)): mean spacing between neighbouring base stations.
    ExtraCell,
    /// A directly supplied link distance.
    Explicit(f64),
}

/// Full description of one network scenario.
///
/// All quantities are linear-scale; decibel conversion is a front-end
/// concern. `moment_b` and `moment_d` are the fading moments E(F^(2/beta))
/// and E(E^(2/beta)) for the base-station and device signals; a unit-mean
/// exponential gives Gamma(1 + 2/beta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// Base-station density (points per unit area).
    pub lambda_b: f64,
    /// Device density (points per unit area).
    pub lambda_d: f64,
    /// Base-station transmit power.
    pub power_b: f64,
    /// Device transmit power.
    pub power_d: f64,
    /// Path-loss exponent (> 2).
    pub beta: f64,
    /// Path-loss scale constant (inverse length).
    pub kappa: f64,
    /// Fading moment E(F^(2/beta)) of base-station signals.
    pub moment_b: f64,
    /// Fading moment E(E^(2/beta)) of device signals.
    pub moment_d: f64,
    /// Device-to-device SIR threshold.
    pub tau_d: f64,
    /// Lower edge of the downlink SIR constraint domain; the closed-form
    /// solution requires 1.
    pub tau_b_min: f64,
    /// Downlink degradation factor in (0, 1].
    pub delta: f64,
    /// Device link-distance rule.
    pub r_mode: RMode,
}

impl NetworkParams {
    /// Unit-mean exponential fading moment E(X^(2/beta)) = Gamma(1 + 2/beta).
    pub fn rayleigh_moment(beta: f64) -> f64 {
        gamma(1.0 + 2.0 / beta)
    }

    /// Checks every field against its domain, naming the first offender.
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, field: &'static str, value: f64, rule: &'static str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParam { field, value, rule })
            }
        }

        check(
            self.lambda_b > 0.0 && self.lambda_b.is_finite(),
            "lambda_b",
            self.lambda_b,
            "must be finite and > 0",
        )?;
        check(
            self.lambda_d >= 0.0 && self.lambda_d.is_finite(),
            "lambda_d",
            self.lambda_d,
            "must be finite and >= 0",
        )?;
        check(
            self.power_b > 0.0 && self.power_b.is_finite(),
            "power_b",
            self.power_b,
            "must be finite and > 0",
        )?;
        check(
            self.power_d > 0.0 && self.power_d.is_finite(),
            "power_d",
            self.power_d,
            "must be finite and > 0",
        )?;
        check(
            self.beta > BETA_MIN && self.beta.is_finite(),
            "beta",
            self.beta,
            "must be > 2 (the coverage formulas degenerate at beta = 2)",
        )?;
        check(
            self.kappa > 0.0 && self.kappa.is_finite(),
            "kappa",
            self.kappa,
            "must be finite and > 0",
        )?;
        check(
            self.moment_b > 0.0 && self.moment_b.is_finite(),
            "moment_b",
            self.moment_b,
            "must be finite and > 0",
        )?;
        check(
            self.moment_d > 0.0 && self.moment_d.is_finite(),
            "moment_d",
            self.moment_d,
            "must be finite and > 0",
        )?;
        check(
            self.tau_d > 0.0 && self.tau_d.is_finite(),
            "tau_d",
            self.tau_d,
            "must be finite and > 0",
        )?;
        check(
            self.tau_b_min == 1.0,
            "tau_b_min",
            self.tau_b_min,
            "the closed-form solution requires the constraint domain edge tau_b_min = 1",
        )?;
        check(
            self.delta > 0.0 && self.delta <= 1.0,
            "delta",
            self.delta,
            "must lie in (0, 1]",
        )?;
        if let RMode::Explicit(r) = self.r_mode {
            check(
                r >= 0.0 && r.is_finite(),
                "r",
                r,
                "explicit link distance must be finite and >= 0",
            )?;
        }
        Ok(())
    }

    /// Device link distance r implied by the configured rule.
    pub fn link_distance(&self) -> f64 {
        match self.r_mode {
            RMode::IntraCell => 0.5 / self.lambda_d.sqrt(),
            RMode::ExtraCell => 0.5 / self.lambda_b.sqrt(),
            RMode::Explicit(r) => r,
        }
    }

    /// Propagation constants (a_B, a_D) of the two tiers, with no Aloha
    /// thinning applied to the device tier.
    pub fn propagation_constants(&self) -> PropagationConstants {
        let q = 2.0 / self.beta;
        let kappa2 = self.kappa * self.kappa;
        PropagationConstants {
            a_b: self.lambda_b * std::f64::consts::PI * self.moment_b * self.power_b.powf(q)
                / kappa2,
            a_d: self.lambda_d * std::f64::consts::PI * self.moment_d * self.power_d.powf(q)
                / kappa2,
            a_extra: Vec::new(),
        }
    }
}

/// The scalar constants through which coverage depends on each tier:
/// density, power, path loss and fading enter only via these.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationConstants {
    /// Base-station tier constant (> 0).
    pub a_b: f64,
    /// Device tier constant (>= 0).
    pub a_d: f64,
    /// Constants of any additional interfering tiers.
    pub a_extra: Vec<f64>,
}

impl PropagationConstants {
    pub fn new(a_b: f64, a_d: f64) -> Self {
        Self {
            a_b,
            a_d,
            a_extra: Vec::new(),
        }
    }

    /// Total interference constant a_B + a_D + sum of extra tiers.
    pub fn total(&self) -> f64 {
        self.a_b + self.a_d + self.a_extra.iter().sum::<f64>()
    }

    /// Applies Aloha thinning with activity probability `p`: the device
    /// constant scales to p * a_D, everything else is untouched.
    pub fn thinned(&self, p: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p), "activity probability {p}");
        Self {
            a_b: self.a_b,
            a_d: p * self.a_d,
            a_extra: self.a_extra.clone(),
        }
    }
}
