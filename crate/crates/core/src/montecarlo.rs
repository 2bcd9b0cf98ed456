//! Monte Carlo estimation of the coverage probabilities by direct
//! sampling of the point processes.
//!
//! The simulator is the oracle for the closed forms: it never reuses the
//! analytic expressions, only the model description (Poisson tiers,
//! power-law path loss, per-tier fading, SIR success rules).
//!
//! Trials are deterministic and order-insensitive: trial `i` draws from
//! ChaCha substreams keyed by `(seed, i, tier)`, and the estimator only
//! accumulates Bernoulli counts, so the result is bit-identical for any
//! degree of parallelism.
//!
//! Tiers are sampled by radial arrival times: for a Poisson process of
//! density `lambda`, the scaled squared distances `lambda pi |x|^2` of the
//! points, ordered by distance, form a unit-rate Poisson process on the
//! half-line. Walking that process outward until the window budget is
//! exhausted yields exactly the points of the disk — and enlarging the
//! window merely extends the same stream, which is what the
//! window-convergence check relies on (common random numbers for the
//! inner window).

use std::f64::consts::{PI, TAU};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, LogNormal, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::special::gamma;

/// Fraction of the mean far-field interference allowed beyond the window
/// when the default radius is chosen (where the path-loss exponent makes
/// that target reachable; the window-convergence check is authoritative).
pub const WINDOW_TAIL_FRACTION: f64 = 1e-3;

const STREAM_STRIDE: u64 = 4;
const SLOT_BASE_STATIONS: u64 = 0;
const SLOT_DEVICES: u64 = 1;
const SLOT_LINK: u64 = 2;

/// Fading distribution of one tier together with the information needed
/// to reproduce its analytic 2/beta moment.
#[derive(Debug, Clone, PartialEq)]
pub enum FadingModel {
    /// Exponential power gain with the given mean (Rayleigh fading has mean 1).
    Exponential { mean: f64 },
    /// Log-normal gain with the given log-scale sigma, location-shifted so
    /// that E(X^(2/beta)) equals `moment`.
    LogNormal { sigma: f64, moment: f64 },
    /// Deterministic gain.
    Constant { value: f64 },
}

impl FadingModel {
    /// Unit-mean exponential: the Rayleigh-fading power gain.
    pub fn unit_exponential() -> Self {
        FadingModel::Exponential { mean: 1.0 }
    }

    /// Exponential model whose 2/beta moment equals `moment`.
    pub fn matched_exponential(beta: f64, moment: f64) -> Self {
        let q = 2.0 / beta;
        FadingModel::Exponential {
            mean: (moment / gamma(1.0 + q)).powf(1.0 / q),
        }
    }

    /// Constant model whose 2/beta moment equals `moment`.
    pub fn matched_constant(beta: f64, moment: f64) -> Self {
        FadingModel::Constant {
            value: moment.powf(beta / 2.0),
        }
    }

    /// Log-normal model with log-scale `sigma` whose 2/beta moment equals `moment`.
    pub fn matched_lognormal(sigma: f64, moment: f64) -> Self {
        FadingModel::LogNormal { sigma, moment }
    }

    /// The analytic moment E(X^(2/beta)) implied by the model.
    pub fn moment(&self, beta: f64) -> f64 {
        let q = 2.0 / beta;
        match *self {
            FadingModel::Exponential { mean } => mean.powf(q) * gamma(1.0 + q),
            FadingModel::LogNormal { moment, .. } => moment,
            FadingModel::Constant { value } => value.powf(q),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (field, value, ok) = match *self {
            FadingModel::Exponential { mean } => ("fading mean", mean, mean > 0.0),
            FadingModel::LogNormal { sigma, moment } => (
                "fading moment",
                moment,
                sigma >= 0.0 && moment > 0.0 && sigma.is_finite(),
            ),
            FadingModel::Constant { value } => ("fading value", value, value > 0.0),
        };
        if ok && value.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParam {
                field,
                value,
                rule: "fading parameters must be finite and positive",
            })
        }
    }

    fn sampler(&self, beta: f64) -> FadingSampler {
        let q = 2.0 / beta;
        match *self {
            FadingModel::Exponential { mean } => FadingSampler::Exponential { mean },
            FadingModel::LogNormal { sigma, moment } => {
                // E(e^(q(mu + sigma Z))) = e^(q mu + q^2 sigma^2 / 2) = moment.
                let mu = moment.ln() / q - q * sigma * sigma / 2.0;
                FadingSampler::LogNormal(
                    LogNormal::new(mu, sigma).expect("validated sigma is finite and >= 0"),
                )
            }
            FadingModel::Constant { value } => FadingSampler::Constant(value),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum FadingSampler {
    Exponential { mean: f64 },
    LogNormal(LogNormal<f64>),
    Constant(f64),
}

impl FadingSampler {
    #[inline]
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingSampler::Exponential { mean } => mean * rng.sample::<f64, _>(Exp1),
            FadingSampler::LogNormal(d) => d.sample(rng),
            FadingSampler::Constant(c) => c,
        }
    }
}

/// Simulation controls: sampling window, trial count, seed and per-tier
/// fading models. Densities, powers and the path loss come from
/// [`NetworkParams`] so the scenario is described in exactly one place.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Radius of the sampling disk around the origin.
    pub window_radius: f64,
    /// Number of independent trials.
    pub trials: u64,
    /// Base seed; each trial derives its own substreams.
    pub seed: u64,
    /// Fading model of base-station signals (the general gain F).
    pub bs_fading: FadingModel,
    /// Fading model of device signals.
    pub device_fading: FadingModel,
}

impl SimConfig {
    /// Default configuration for a scenario: window sized by
    /// [`default_window_radius`], exponential fading matched to the
    /// scenario's moments.
    pub fn for_params(params: &NetworkParams, trials: u64, seed: u64) -> Self {
        SimConfig {
            window_radius: default_window_radius(params),
            trials,
            seed,
            bs_fading: FadingModel::matched_exponential(params.beta, params.moment_b),
            device_fading: FadingModel::matched_exponential(params.beta, params.moment_d),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.window_radius > 0.0 && self.window_radius.is_finite()) {
            return Err(Error::InvalidParam {
                field: "window_radius",
                value: self.window_radius,
                rule: "must be finite and > 0",
            });
        }
        if self.trials == 0 {
            return Err(Error::InvalidParam {
                field: "trials",
                value: 0.0,
                rule: "must be >= 1",
            });
        }
        self.bs_fading.validate()?;
        self.device_fading.validate()
    }
}

/// Window radius at which the mean interference from beyond the window is
/// a `WINDOW_TAIL_FRACTION` of the near-field reference, relative to the
/// sparsest tier's mean spacing. The factor is clamped: close to beta = 2
/// the far-field tail decays too slowly for any practical window, and the
/// window-convergence check is the authoritative guard.
pub fn default_window_radius(params: &NetworkParams) -> f64 {
    let mut lambda_min = params.lambda_b;
    if params.lambda_d > 0.0 {
        lambda_min = lambda_min.min(params.lambda_d);
    }
    let spacing = 0.5 / lambda_min.sqrt();
    let factor = (1.0 / WINDOW_TAIL_FRACTION).powf(1.0 / (params.beta - 2.0));
    spacing * factor.clamp(10.0, 100.0)
}

/// A Bernoulli estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

impl CoverageEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let mean = successes as f64 / trials as f64;
        CoverageEstimate {
            mean,
            stderr: (mean * (1.0 - mean) / trials as f64).sqrt(),
            trials,
        }
    }

    /// Standardized distance of the estimate from a reference value.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = self.mean - reference;
        if self.stderr == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY * diff.signum()
            }
        } else {
            diff / self.stderr
        }
    }
}

/// Two-sample z-score between independent Bernoulli estimates.
pub fn two_sample_z(a: &CoverageEstimate, b: &CoverageEstimate) -> f64 {
    let denom = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
    let diff = a.mean - b.mean;
    if denom == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY * diff.signum()
        }
    } else {
        diff / denom
    }
}

/// Result of a propagation-invariance comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub estimate_a: CoverageEstimate,
    pub estimate_b: CoverageEstimate,
    pub z: f64,
}

/// A planar point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance_from_origin(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Samples a homogeneous Poisson point process of the given density on the
/// disk of the given radius about the origin.
pub fn sample_ppp<R: Rng + ?Sized>(density: f64, radius: f64, rng: &mut R) -> Vec<Point> {
    debug_assert!(density >= 0.0 && radius > 0.0);
    if density <= 0.0 {
        return Vec::new();
    }
    let mean = density * PI * radius * radius;
    let count = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = TAU * rng.random::<f64>();
            Point {
                x: r * theta.cos(),
                y: r * theta.sin(),
            }
        })
        .collect()
}

fn stream_rng(seed: u64, trial: u64, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial * STREAM_STRIDE + slot);
    rng
}

struct TierSample {
    max_signal: f64,
    interference: f64,
    count: u64,
}

/// Walks one tier outward from the origin, accumulating received powers
/// `power * fading / (kappa |x|)^beta` for every point inside the window.
fn walk_tier<R: Rng + ?Sized>(
    rng: &mut R,
    density: f64,
    power: f64,
    fading: &FadingSampler,
    beta: f64,
    kappa: f64,
    radius: f64,
) -> TierSample {
    let mut out = TierSample {
        max_signal: 0.0,
        interference: 0.0,
        count: 0,
    };
    if density <= 0.0 {
        return out;
    }
    let rate = density * PI;
    let budget = rate * radius * radius;
    let kappa2 = kappa * kappa;
    let half_beta = beta / 2.0;
    let squared_law = half_beta == 2.0;
    let mut t = 0.0f64;
    loop {
        t += rng.sample::<f64, _>(Exp1);
        if t > budget {
            return out;
        }
        let d2 = kappa2 * (t / rate);
        let loss = if squared_law { d2 * d2 } else { d2.powf(half_beta) };
        let signal = power * fading.draw(rng) / loss;
        out.interference += signal;
        if signal > out.max_signal {
            out.max_signal = signal;
        }
        out.count += 1;
    }
}

fn check_downlink_inputs(params: &NetworkParams, cfg: &SimConfig, p: f64, tau_b: f64) -> Result<()> {
    params.validate()?;
    cfg.validate()?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam {
            field: "p",
            value: p,
            rule: "activity probability must lie in [0, 1]",
        });
    }
    if !(tau_b > 0.0 && tau_b.is_finite()) {
        return Err(Error::InvalidParam {
            field: "tau_b",
            value: tau_b,
            rule: "must be finite and > 0 (the simulator covers the whole domain)",
        });
    }
    Ok(())
}

/// Estimates the downlink coverage probability: the chance that the best
/// base-station SIR at the origin exceeds `tau_b`, with interference from
/// all base stations and from active devices thinned to density
/// `p * lambda_d`. A trial with no base station in the window counts as a
/// failure.
pub fn estimate_downlink_coverage(
    params: &NetworkParams,
    cfg: &SimConfig,
    p: f64,
    tau_b: f64,
) -> Result<CoverageEstimate> {
    check_downlink_inputs(params, cfg, p, tau_b)?;
    let bs_sampler = cfg.bs_fading.sampler(params.beta);
    let dev_sampler = cfg.device_fading.sampler(params.beta);
    let device_density = p * params.lambda_d;

    let successes = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let bs = walk_tier(
                &mut stream_rng(cfg.seed, trial, SLOT_BASE_STATIONS),
                params.lambda_b,
                params.power_b,
                &bs_sampler,
                params.beta,
                params.kappa,
                cfg.window_radius,
            );
            if bs.count == 0 {
                return 0u64;
            }
            let dev = walk_tier(
                &mut stream_rng(cfg.seed, trial, SLOT_DEVICES),
                device_density,
                params.power_d,
                &dev_sampler,
                params.beta,
                params.kappa,
                cfg.window_radius,
            );
            // The strongest signal also maximizes s / (I_total - s), so the
            // best-station event is max_signal (1 + tau) > tau I_total.
            let total = bs.interference + dev.interference;
            u64::from(bs.max_signal * (1.0 + tau_b) > tau_b * total)
        })
        .sum();

    Ok(CoverageEstimate::from_counts(successes, cfg.trials))
}

/// Estimates the device-to-device coverage probability: a receiver at the
/// origin, its transmitter at distance `r` with fresh unit-mean
/// exponential fading, against interference from all base stations and
/// from the other active devices (the transmitter is not part of the
/// device process).
///
/// The link budget is normalized the way the closed form is stated: the
/// wanted signal is a unit-mean exponential gain over path loss r^beta,
/// while the path-loss scale and the transmit powers act on the result
/// only through the interference, i.e. through the tier constants.
pub fn estimate_d2d_coverage(
    params: &NetworkParams,
    cfg: &SimConfig,
    p: f64,
    r: f64,
    tau_d: f64,
) -> Result<CoverageEstimate> {
    params.validate()?;
    cfg.validate()?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam {
            field: "p",
            value: p,
            rule: "activity probability must lie in [0, 1]",
        });
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParam {
            field: "r",
            value: r,
            rule: "link distance must be finite and >= 0",
        });
    }
    if !(tau_d > 0.0 && tau_d.is_finite()) {
        return Err(Error::InvalidParam {
            field: "tau_d",
            value: tau_d,
            rule: "must be finite and > 0",
        });
    }

    let bs_sampler = cfg.bs_fading.sampler(params.beta);
    let dev_sampler = cfg.device_fading.sampler(params.beta);
    let device_density = p * params.lambda_d;
    let link_loss = r.powf(params.beta);

    let successes = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            if link_loss == 0.0 {
                // Zero link distance: the SIR is infinite whatever the
                // interference does.
                return 1u64;
            }
            let bs = walk_tier(
                &mut stream_rng(cfg.seed, trial, SLOT_BASE_STATIONS),
                params.lambda_b,
                params.power_b,
                &bs_sampler,
                params.beta,
                params.kappa,
                cfg.window_radius,
            );
            let dev = walk_tier(
                &mut stream_rng(cfg.seed, trial, SLOT_DEVICES),
                device_density,
                params.power_d,
                &dev_sampler,
                params.beta,
                params.kappa,
                cfg.window_radius,
            );
            let link_gain: f64 = stream_rng(cfg.seed, trial, SLOT_LINK).sample(Exp1);
            let total = bs.interference + dev.interference;
            u64::from(link_gain > tau_d * link_loss * total)
        })
        .sum();

    Ok(CoverageEstimate::from_counts(successes, cfg.trials))
}

/// Runs the downlink estimator twice with two fading models of equal
/// 2/beta moment and reports both estimates with their two-sample z-score.
/// The two runs share the seed, so identical models give identical
/// estimates and z = 0.
pub fn propagation_invariance_check(
    params: &NetworkParams,
    cfg: &SimConfig,
    fading_a: &FadingModel,
    fading_b: &FadingModel,
    p: f64,
    tau_b: f64,
) -> Result<InvarianceReport> {
    fading_a.validate()?;
    fading_b.validate()?;
    let (ma, mb) = (fading_a.moment(params.beta), fading_b.moment(params.beta));
    if (ma - mb).abs() > 1e-9 * ma.max(mb) {
        return Err(Error::MomentMismatch(ma, mb));
    }
    let cfg_a = SimConfig {
        bs_fading: fading_a.clone(),
        ..cfg.clone()
    };
    let cfg_b = SimConfig {
        bs_fading: fading_b.clone(),
        ..cfg.clone()
    };
    let estimate_a = estimate_downlink_coverage(params, &cfg_a, p, tau_b)?;
    let estimate_b = estimate_downlink_coverage(params, &cfg_b, p, tau_b)?;
    Ok(InvarianceReport {
        z: two_sample_z(&estimate_a, &estimate_b),
        estimate_a,
        estimate_b,
    })
}
