//! The four pipelines behind the CLI subcommands. Each one takes a
//! resolved [`Scenario`] and writes plain text or CSV, so they are
//! directly testable without spawning the binary.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use sirnet_core::analytic::coverage_downlink_closed;
use sirnet_core::montecarlo::{
    estimate_d2d_coverage, estimate_downlink_coverage, propagation_invariance_check, FadingModel,
    SimConfig,
};
use sirnet_core::optimize::{scaling_curves, solve, sweep, uniform_grid};

use crate::scenario::{FadingKind, Scenario, SweepSpec};

/// Formats with six significant digits, decimal where compact.
pub fn fmt_sig6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.5e}")
    }
}

/// Prints the propagation constants, the candidate optima and the chosen
/// operating point of a scenario.
pub fn cmd_analyze(scenario: &Scenario, out: &mut dyn Write) -> Result<()> {
    let params = &scenario.params;
    let pc = params.propagation_constants();
    let res = solve(params)?;
    writeln!(out, "scenario    {}", scenario.name)?;
    writeln!(out, "a_B         {}", fmt_sig6(pc.a_b))?;
    writeln!(out, "a_D         {}", fmt_sig6(pc.a_d))?;
    writeln!(out, "p1_star     {}", fmt_sig6(res.p1_star))?;
    writeln!(out, "p2_star     {}", fmt_sig6(res.p2_star))?;
    writeln!(out, "p_star      {}", fmt_sig6(res.p_star))?;
    writeln!(out, "regime      {}", res.regime)?;
    writeln!(out, "D(p_star)   {}", fmt_sig6(res.throughput_at_opt))?;
    writeln!(out, "delta_star  {}", fmt_sig6(res.delta_star))?;
    Ok(())
}

/// Writes the sweep CSV for a scenario.
///
/// Activity sweeps produce `p,D_analytic,coverage_d2d,degradation_ratio,
/// constraint_ok`; density sweeps produce `lambda_d,p_star,regime,
/// throughput`.
pub fn cmd_sweep(scenario: &Scenario, path: &Path) -> Result<()> {
    let mut csv = String::new();
    match &scenario.sweep {
        SweepSpec::Activity { points } => {
            csv.push_str("p,D_analytic,coverage_d2d,degradation_ratio,constraint_ok\n");
            for row in sweep(&scenario.params, &uniform_grid(*points)) {
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    row.p, row.throughput, row.coverage_d2d, row.degradation_ratio, row.constraint_ok
                )?;
            }
        }
        SweepSpec::Density { values } => {
            csv.push_str("lambda_d,p_star,regime,throughput\n");
            for row in scaling_curves(&scenario.params, values)? {
                writeln!(
                    csv,
                    "{},{},{},{}",
                    row.lambda_d, row.p_star, row.regime, row.throughput
                )?;
            }
        }
    }
    std::fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// One verification row of a simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimCheck {
    pub quantity: String,
    pub analytic: f64,
    pub mc_mean: f64,
    pub mc_stderr: f64,
    pub z: f64,
}

impl SimCheck {
    pub fn flagged(&self) -> bool {
        self.z.is_nan() || self.z.abs() >= 3.0
    }
}

/// Outcome of `cmd_simulate`: the individual checks plus the pass budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub checks: Vec<SimCheck>,
    pub allowed_misses: usize,
}

impl SimOutcome {
    pub fn misses(&self) -> usize {
        self.checks.iter().filter(|c| c.flagged()).count()
    }

    /// True when the run stays within its statistical miss budget.
    pub fn passed(&self) -> bool {
        self.misses() <= self.allowed_misses
    }

    /// One-line machine-readable summary.
    pub fn summary(&self) -> String {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| c.flagged())
            .map(|c| format!("\"{}\"", c.quantity))
            .collect();
        format!(
            "{{\"status\":\"{}\",\"checks\":{},\"misses\":{},\"allowed\":{},\"failed\":[{}]}}",
            if self.passed() { "pass" } else { "fail" },
            self.checks.len(),
            self.misses(),
            self.allowed_misses,
            failed.join(",")
        )
    }
}

/// Runs the Monte Carlo verification pipeline: downlink coverage with no
/// active devices and at the optimal activity, device-to-device coverage
/// at the optimum, and the fading-invariance comparisons. Writes a CSV of
/// `quantity,analytic,mc_mean,mc_stderr,z` and returns the checks.
pub fn cmd_simulate(scenario: &Scenario, path: &Path) -> Result<SimOutcome> {
    let params = &scenario.params;
    let pc = params.propagation_constants();
    let res = solve(params)?;
    let tau_b = params.tau_b_min;
    let r = params.link_distance();

    let mut cfg = SimConfig::for_params(params, scenario.trials, scenario.seed);
    if let Some(w) = scenario.window_radius {
        cfg.window_radius = w;
    }
    cfg.bs_fading = scenario.bs_fading.model(params.beta, params.moment_b);

    let mut checks = Vec::new();

    let analytic = coverage_downlink_closed(&pc.thinned(0.0), tau_b, params.beta)?;
    let est = estimate_downlink_coverage(params, &cfg, 0.0, tau_b)?;
    checks.push(SimCheck {
        quantity: "downlink_cov_p0".into(),
        analytic,
        mc_mean: est.mean,
        mc_stderr: est.stderr,
        z: est.z_score(analytic),
    });

    let analytic = coverage_downlink_closed(&pc.thinned(res.p_star), tau_b, params.beta)?;
    let est = estimate_downlink_coverage(params, &cfg, res.p_star, tau_b)?;
    checks.push(SimCheck {
        quantity: "downlink_cov_pstar".into(),
        analytic,
        mc_mean: est.mean,
        mc_stderr: est.stderr,
        z: est.z_score(analytic),
    });

    let analytic =
        sirnet_core::analytic::coverage_d2d(&pc.thinned(res.p_star), r, params.tau_d, params.beta);
    let est = estimate_d2d_coverage(params, &cfg, res.p_star, r, params.tau_d)?;
    checks.push(SimCheck {
        quantity: "d2d_cov_pstar".into(),
        analytic,
        mc_mean: est.mean,
        mc_stderr: est.stderr,
        z: est.z_score(analytic),
    });

    // Fading invariance: the downlink estimate must not care which
    // distribution carries the base-station moment. Run against the
    // device-free network where the closed form is simplest.
    let reference = coverage_downlink_closed(&pc.thinned(0.0), tau_b, params.beta)?;
    let exponential = FadingModel::matched_exponential(params.beta, params.moment_b);
    for (label, other) in [
        (
            "invariance_exp_vs_lognormal",
            FadingKind::LogNormal { sigma: 1.0 }.model(params.beta, params.moment_b),
        ),
        (
            "invariance_exp_vs_constant",
            FadingKind::Constant.model(params.beta, params.moment_b),
        ),
    ] {
        let report =
            propagation_invariance_check(params, &cfg, &exponential, &other, 0.0, tau_b)?;
        checks.push(SimCheck {
            quantity: label.into(),
            analytic: reference,
            mc_mean: report.estimate_b.mean,
            mc_stderr: report.estimate_b.stderr,
            z: report.z,
        });
    }

    let mut csv = String::from("quantity,analytic,mc_mean,mc_stderr,z\n");
    for c in &checks {
        writeln!(
            csv,
            "{},{},{},{},{}",
            c.quantity, c.analytic, c.mc_mean, c.mc_stderr, c.z
        )?;
    }
    std::fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?;

    // One statistical miss is tolerated per twenty checks, rounded up.
    let allowed_misses = checks.len().div_ceil(20);
    Ok(SimOutcome {
        checks,
        allowed_misses,
    })
}

/// Runs every built-in scenario: an analysis report to `out` and one sweep
/// CSV per figure under `dir`. Returns the written paths.
pub fn cmd_figures(dir: &Path, grid_override: Option<usize>, out: &mut dyn Write) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut written = Vec::new();
    for name in Scenario::builtin_names() {
        let mut scenario = Scenario::builtin(name).expect("builtin names are valid");
        if let (Some(points), SweepSpec::Activity { .. }) = (grid_override, &scenario.sweep) {
            scenario.sweep = SweepSpec::Activity { points };
        }
        cmd_analyze(&scenario, out)?;
        let path = dir.join(format!("{name}.csv"));
        cmd_sweep(&scenario, &path)?;
        writeln!(out, "wrote       {}", path.display())?;
        writeln!(out)?;
        written.push(path);
    }
    Ok(written)
}

/// Applies command-line overrides to a scenario.
pub fn apply_overrides(
    scenario: &mut Scenario,
    seed: Option<u64>,
    trials: Option<u64>,
    grid: Option<usize>,
    out: Option<&str>,
) -> Result<()> {
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    if let Some(trials) = trials {
        if trials == 0 {
            bail!("--trials must be at least 1");
        }
        scenario.trials = trials;
    }
    if let Some(points) = grid {
        if points < 2 {
            bail!("--grid must be at least 2 points");
        }
        match &mut scenario.sweep {
            SweepSpec::Activity { points: p } => *p = points,
            SweepSpec::Density { .. } => {
                bail!("--grid applies to activity sweeps; this scenario sweeps the device density")
            }
        }
    }
    if let Some(out) = out {
        scenario.out = Some(out.to_string());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig6(0.8105694691387022), "0.810569");
        assert_eq!(fmt_sig6(13.920819992079), "13.9208");
        assert_eq!(fmt_sig6(1.2222222222), "1.22222");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(f64::INFINITY), "inf");
        assert_eq!(fmt_sig6(123456.789), "123457");
        assert_eq!(fmt_sig6(1.23456789e7), "1.23457e7");
        assert_eq!(fmt_sig6(-0.000123456789), "-0.000123457");
        assert_eq!(fmt_sig6(1e-7), "1.00000e-7");
    }

    #[test]
    fn miss_budget_drives_the_outcome() {
        let check = |z: f64| SimCheck {
            quantity: "q".into(),
            analytic: 0.5,
            mc_mean: 0.5,
            mc_stderr: 0.01,
            z,
        };
        let ok = SimOutcome {
            checks: vec![check(0.4), check(-2.9), check(3.5)],
            allowed_misses: 1,
        };
        assert_eq!(ok.misses(), 1);
        assert!(ok.passed());
        assert!(ok.summary().contains("\"status\":\"pass\""));

        let bad = SimOutcome {
            checks: vec![check(3.2), check(-4.0), check(f64::NAN)],
            allowed_misses: 1,
        };
        assert_eq!(bad.misses(), 3);
        assert!(!bad.passed());
        let summary = bad.summary();
        assert!(summary.contains("\"status\":\"fail\""));
        assert!(summary.contains("\"misses\":3"));
    }

    #[test]
    fn analyze_reports_the_expected_fields() {
        let scenario = Scenario::builtin("fig1").unwrap();
        let mut buf = Vec::new();
        cmd_analyze(&scenario, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for needle in [
            "a_B",
            "a_D",
            "p1_star     0.810569",
            "p2_star     1.22222",
            "p_star      0.810569",
            "regime      unconstrained",
            "delta_star  0.552312",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
        }
    }
}
