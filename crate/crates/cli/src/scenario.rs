//! Scenario files: the on-disk TOML shape, its resolution into validated
//! parameters, and the built-in figure scenarios.
//!
//! All physical quantities in the data model are linear-scale. The file
//! format additionally accepts `tau_d_db` / `tau_b_min_db` as explicit
//! decibel alternatives, converted at parse time.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use sirnet_core::montecarlo::FadingModel;
use sirnet_core::{NetworkParams, RMode};

/// Default trial count for simulation runs.
pub const DEFAULT_TRIALS: u64 = 100_000;
/// Default seed for simulation runs.
pub const DEFAULT_SEED: u64 = 42;

/// How a sweep iterates.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    /// Sweep the activity probability p over a uniform grid on [0, 1].
    Activity { points: usize },
    /// Sweep the device density, re-solving the optimization at each value.
    Density { values: Vec<f64> },
}

/// Base-station fading choice for the simulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingKind {
    Exponential,
    LogNormal { sigma: f64 },
    Constant,
}

impl FadingKind {
    /// Concrete model with its 2/beta moment matched to `moment`.
    pub fn model(&self, beta: f64, moment: f64) -> FadingModel {
        match *self {
            FadingKind::Exponential => FadingModel::matched_exponential(beta, moment),
            FadingKind::LogNormal { sigma } => FadingModel::matched_lognormal(sigma, moment),
            FadingKind::Constant => FadingModel::matched_constant(beta, moment),
        }
    }
}

/// A fully resolved scenario: validated parameters plus run controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: NetworkParams,
    pub trials: u64,
    pub seed: u64,
    /// Sampling window override; `None` selects the density-derived default.
    pub window_radius: Option<f64>,
    pub bs_fading: FadingKind,
    pub sweep: SweepSpec,
    pub out: Option<String>,
}

impl Scenario {
    /// Looks up a built-in scenario by name.
    pub fn builtin(name: &str) -> Option<Scenario> {
        let figure = |name: &str, delta: f64, r_mode: RMode, sweep: SweepSpec| Scenario {
            name: name.to_string(),
            params: NetworkParams {
                lambda_b: 1.0,
                lambda_d: 5.0,
                power_b: 25.0,
                power_d: 1.0,
                beta: 4.0,
                kappa: 1.0,
                moment_b: NetworkParams::rayleigh_moment(4.0),
                moment_d: NetworkParams::rayleigh_moment(4.0),
                tau_d: 1.0,
                tau_b_min: 1.0,
                delta,
                r_mode,
            },
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            window_radius: None,
            bs_fading: FadingKind::Exponential,
            sweep,
            out: None,
        };
        let activity = SweepSpec::Activity {
            points: sirnet_core::optimize::DEFAULT_GRID_POINTS,
        };
        match name {
            "fig1" => Some(figure("fig1", 0.45, RMode::IntraCell, activity)),
            "fig3" => Some(figure("fig3", 0.9, RMode::IntraCell, activity)),
            "fig4" => Some(figure("fig4", 0.45, RMode::ExtraCell, activity)),
            "fig5" => Some(figure(
                "fig5",
                0.45,
                RMode::IntraCell,
                SweepSpec::Density {
                    values: (1..=20).map(|i| i as f64 * 0.5).collect(),
                },
            )),
            _ => None,
        }
    }

    /// Names of all built-in scenarios.
    pub fn builtin_names() -> &'static [&'static str] {
        &["fig1", "fig3", "fig4", "fig5"]
    }

    /// Loads and resolves a scenario file.
    pub fn from_path(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let file: ScenarioFile = toml::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        file.resolve()
    }

    /// The serializable file equivalent of this scenario, with every
    /// default made explicit.
    pub fn to_file(&self) -> ScenarioFile {
        let (r_mode, r) = match self.params.r_mode {
            RMode::IntraCell => ("intra-cell", None),
            RMode::ExtraCell => ("extra-cell", None),
            RMode::Explicit(r) => ("explicit", Some(r)),
        };
        let (bs_fading, bs_fading_sigma) = match self.bs_fading {
            FadingKind::Exponential => ("exponential", None),
            FadingKind::LogNormal { sigma } => ("lognormal", Some(sigma)),
            FadingKind::Constant => ("constant", None),
        };
        let (points, lambda_d) = match &self.sweep {
            SweepSpec::Activity { points } => (Some(*points), None),
            SweepSpec::Density { values } => (None, Some(values.clone())),
        };
        ScenarioFile {
            name: Some(self.name.clone()),
            out: self.out.clone(),
            params: ParamsSection {
                lambda_b: self.params.lambda_b,
                lambda_d: self.params.lambda_d,
                power_b: self.params.power_b,
                power_d: self.params.power_d,
                beta: self.params.beta,
                kappa: Some(self.params.kappa),
                moment_b: Some(self.params.moment_b),
                moment_d: Some(self.params.moment_d),
                tau_d: Some(self.params.tau_d),
                tau_d_db: None,
                tau_b_min: Some(self.params.tau_b_min),
                tau_b_min_db: None,
                delta: self.params.delta,
                r_mode: Some(r_mode.to_string()),
                r,
            },
            sim: Some(SimSection {
                trials: Some(self.trials),
                seed: Some(self.seed),
                window_radius: self.window_radius,
                bs_fading: Some(bs_fading.to_string()),
                bs_fading_sigma,
            }),
            sweep: Some(SweepSection { points, lambda_d }),
        }
    }
}

/// Raw TOML shape of a scenario file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub params: ParamsSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub lambda_b: f64,
    pub lambda_d: f64,
    pub power_b: f64,
    pub power_d: f64,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Fading moment E(F^(2/beta)); defaults to the Rayleigh value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_d: Option<f64>,
    /// Decibel alternative to `tau_d`; exclusive with it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_d_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_b_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_b_min_db: Option<f64>,
    pub delta: f64,
    /// "intra-cell" (default), "extra-cell" or "explicit" (with `r`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_radius: Option<f64>,
    /// "exponential" (default), "lognormal" or "constant".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs_fading: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs_fading_sigma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Activity grid resolution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Device-density sweep values; presence switches the sweep kind.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_d: Option<Vec<f64>>,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

impl ScenarioFile {
    /// Resolves defaults, converts decibel fields and validates.
    pub fn resolve(&self) -> Result<Scenario> {
        let p = &self.params;

        let tau_d = match (p.tau_d, p.tau_d_db) {
            (Some(_), Some(_)) => bail!("params.tau_d and params.tau_d_db are exclusive"),
            (Some(v), None) => v,
            (None, Some(db)) => db_to_linear(db),
            (None, None) => 1.0,
        };
        let tau_b_min = match (p.tau_b_min, p.tau_b_min_db) {
            (Some(_), Some(_)) => bail!("params.tau_b_min and params.tau_b_min_db are exclusive"),
            (Some(v), None) => v,
            (None, Some(db)) => db_to_linear(db),
            (None, None) => 1.0,
        };

        let r_mode = match (p.r_mode.as_deref().unwrap_or("intra-cell"), p.r) {
            ("intra-cell", None) => RMode::IntraCell,
            ("extra-cell", None) => RMode::ExtraCell,
            ("explicit", Some(r)) => RMode::Explicit(r),
            ("explicit", None) => bail!("params.r_mode = \"explicit\" requires params.r"),
            ("intra-cell" | "extra-cell", Some(_)) => {
                bail!("params.r is only meaningful with params.r_mode = \"explicit\"")
            }
            (other, _) => {
                bail!("unknown params.r_mode {other:?}; expected intra-cell, extra-cell or explicit")
            }
        };

        let params = NetworkParams {
            lambda_b: p.lambda_b,
            lambda_d: p.lambda_d,
            power_b: p.power_b,
            power_d: p.power_d,
            beta: p.beta,
            kappa: p.kappa.unwrap_or(1.0),
            moment_b: p
                .moment_b
                .unwrap_or_else(|| NetworkParams::rayleigh_moment(p.beta)),
            moment_d: p
                .moment_d
                .unwrap_or_else(|| NetworkParams::rayleigh_moment(p.beta)),
            tau_d,
            tau_b_min,
            delta: p.delta,
            r_mode,
        };
        params.validate().context("invalid [params] section")?;

        let sim = self.sim.clone().unwrap_or(SimSection {
            trials: None,
            seed: None,
            window_radius: None,
            bs_fading: None,
            bs_fading_sigma: None,
        });
        let bs_fading = match sim.bs_fading.as_deref().unwrap_or("exponential") {
            "exponential" => FadingKind::Exponential,
            "lognormal" => FadingKind::LogNormal {
                sigma: sim.bs_fading_sigma.unwrap_or(1.0),
            },
            "constant" => FadingKind::Constant,
            other => bail!("unknown sim.bs_fading {other:?}"),
        };

        let sweep = match &self.sweep {
            Some(SweepSection {
                points: Some(_),
                lambda_d: Some(_),
            }) => bail!("sweep.points and sweep.lambda_d are exclusive"),
            Some(SweepSection {
                lambda_d: Some(values),
                ..
            }) => {
                if values.is_empty() || values.iter().any(|v| *v <= 0.0 || !v.is_finite()) {
                    bail!("sweep.lambda_d must be a non-empty list of positive densities");
                }
                SweepSpec::Density {
                    values: values.clone(),
                }
            }
            Some(SweepSection { points, .. }) => SweepSpec::Activity {
                points: match points {
                    Some(n) if *n >= 2 => *n,
                    Some(n) => bail!("sweep.points = {n} is too few; need at least 2"),
                    None => sirnet_core::optimize::DEFAULT_GRID_POINTS,
                },
            },
            None => SweepSpec::Activity {
                points: sirnet_core::optimize::DEFAULT_GRID_POINTS,
            },
        };

        if let Some(w) = sim.window_radius {
            if !(w > 0.0 && w.is_finite()) {
                bail!("sim.window_radius must be finite and > 0, got {w}");
            }
        }

        Ok(Scenario {
            name: self.name.clone().unwrap_or_else(|| "scenario".to_string()),
            params,
            trials: sim.trials.unwrap_or(DEFAULT_TRIALS),
            seed: sim.seed.unwrap_or(DEFAULT_SEED),
            window_radius: sim.window_radius,
            bs_fading,
            sweep,
            out: self.out.clone(),
        })
    }
}
