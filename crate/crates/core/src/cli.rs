//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 when an exact
//! computation exceeds its enumeration budget.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::harness::config::{parse_settings, ExperimentConfig, Problem, SEED_ENV};
use crate::harness::experiments::{matching_experiment, matching_trace, matroid_experiment};
use crate::harness::{monte_carlo, with_jobs, SimulationReport};
use crate::matching::{concentration_stats, io::write_trace_csv};
use crate::oracle::{enumerate_win_prob, EnumerationBudget};
use crate::secretary::analytic::{format_ratio, ratio_to_f64};
use crate::secretary::{exact_threshold_table, optimize_mu, Policy};

#[derive(Debug, Parser)]
#[command(
    name = "stopping-lab",
    version,
    about = "Returning-secretary simulations, exact oracles and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo estimate for a secretary, matroid or matching configuration.
    Simulate(ExperimentArgs),
    /// Exact win probability by exhaustive enumeration, printed as p/q.
    Exact(ExactArgs),
    /// Maximize the large-n win probability of the time policy.
    OptimizeMu(OptimizeArgs),
    /// Exact win probability of the threshold policy for every f in 0..=n.
    Table(TableArgs),
    /// Returning matroid secretary experiment with diagnostics.
    Matroid(ExperimentArgs),
    /// Returning bipartite matching experiment with diagnostics.
    Matching(MatchingArgs),
    /// Distribution of the number of items seen exactly once after n of 2n rounds.
    Concentration(ConcentrationArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProblemArg {
    Secretary,
    Matroid,
    Matching,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    NoWait,
    Threshold,
    Time,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExactPolicyArg {
    NoWait,
    Threshold,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Flat key=value file; flags given on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Problem to simulate (simulate only; default secretary).
    #[arg(long, value_enum)]
    problem: Option<ProblemArg>,
    /// Number of items (secretary problem).
    #[arg(long)]
    n: Option<usize>,
    /// Arrivals per item (default 2).
    #[arg(long)]
    k: Option<usize>,
    /// Stopping policy (secretary problem).
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Distinct-count threshold for the threshold policy.
    #[arg(long = "f")]
    f_value: Option<usize>,
    /// Time threshold in [0, 1) for the time policy.
    #[arg(long)]
    mu: Option<f64>,
    /// Instance generator, e.g. uniform:10:3, complete-graph:5, graph:6:9,
    /// transversal:5:5[:0.5], adversarial:20[:EPS], complete-bipartite:50:50,
    /// bipartite:20:20:0.3.
    #[arg(long, value_name = "SPEC")]
    generator: Option<String>,
    /// Instance file instead of a generator.
    #[arg(long, value_name = "FILE")]
    instance: Option<PathBuf>,
    /// Draw a fresh instance for every trial.
    #[arg(long)]
    resample: bool,
    /// Number of independent trials (default 10000).
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed (default: $STOPPING_LAB_SEED, else 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Report format (default csv).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct MatchingArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    /// Compute e_t only at first arrivals after round n.
    #[arg(long)]
    first_arrivals_only: bool,
    /// Write the per-round trace of trial 0 as CSV.
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, value_enum, default_value = "no-wait")]
    policy: ExactPolicyArg,
    /// Threshold for the threshold policy.
    #[arg(long = "f")]
    f_value: Option<usize>,
    /// Maximum number of distinguishable orders to enumerate.
    #[arg(long, default_value_t = EnumerationBudget::default().max_orders)]
    max_orders: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct OptimizeArgs {
    /// Tolerance on the maximizer.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = EnumerationBudget::default().max_orders)]
    max_orders: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct ConcentrationArgs {
    #[arg(long)]
    n: usize,
    /// At least 1000.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Normal output goes to `out`, diagnostics to `err`.
pub fn cli_dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    match run(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Simulate(args) => {
            let config = experiment_config(&args, None, false)?;
            let report = monte_carlo(&config)?;
            emit_report(&report, &config, out, err)
        }
        Command::Matroid(args) => {
            let config = experiment_config(&args, Some(Problem::Matroid), false)?;
            let e = matroid_experiment(&config)?;
            writeln!(
                out,
                "ground_size={} trials={} seed={}",
                e.ground_size,
                e.report.trials(),
                config.seed
            )?;
            writeln!(
                out,
                "ratio_mean={} std_err={} bound={}",
                e.report.mean(),
                e.report.std_err(),
                e.bound
            )?;
            writeln!(
                out,
                "continued_ratio_mean={} std_err={}",
                e.continued_ratio.mean, e.continued_ratio.std_err
            )?;
            writeln!(
                out,
                "heaviest_missed={} heaviest_added_late={}",
                e.heaviest_missed, e.heaviest_added_late
            )?;
            if let Some(m) = &e.membership {
                let worst = m
                    .iter()
                    .map(|x| x.z_score(e.bound).abs())
                    .fold(0.0, f64::max);
                writeln!(
                    out,
                    "membership_expected={} max_membership_z={worst}",
                    e.bound
                )?;
            }
            write_report_file(&e.report, &config, err)
        }
        Command::Matching(args) => {
            let config = experiment_config(
                &args.common,
                Some(Problem::Matching),
                args.first_arrivals_only,
            )?;
            let e = matching_experiment(&config)?;
            writeln!(
                out,
                "left_size={} trials={} seed={}",
                e.left_size,
                e.report.trials(),
                config.seed
            )?;
            writeln!(
                out,
                "ratio_mean={} std_err={} bound={}",
                e.report.mean(),
                e.report.std_err(),
                9.0 / 16.0
            )?;
            writeln!(
                out,
                "round_n_ratio_mean={} std_err={} bound={}",
                e.round_n_ratio.mean, e.round_n_ratio.std_err, e.round_n_bound
            )?;
            writeln!(
                out,
                "addable_mean={} std_err={}",
                e.addable.mean, e.addable.std_err
            )?;
            writeln!(
                out,
                "edge_weight_ratio_mean={} std_err={}",
                e.edge_weight_ratio.mean, e.edge_weight_ratio.std_err
            )?;
            writeln!(out, "unmatched_at_n_mean={}", e.unmatched_at_n.mean)?;
            if let Some(path) = &args.trace {
                write_trace_csv(&matching_trace(&config)?, std::fs::File::create(path)?)?;
            }
            write_report_file(&e.report, &config, err)
        }
        Command::Exact(args) => {
            let policy = match (args.policy, args.f_value) {
                (ExactPolicyArg::NoWait, None) => Policy::NoWait,
                (ExactPolicyArg::Threshold, Some(f_value)) => Policy::Threshold { f_value },
                (ExactPolicyArg::NoWait, Some(_)) => {
                    return Err(Error::InvalidArgument(
                        "--f applies only to --policy threshold".into(),
                    ))
                }
                (ExactPolicyArg::Threshold, None) => {
                    return Err(Error::InvalidArgument(
                        "--policy threshold needs --f".into(),
                    ))
                }
            };
            let budget = EnumerationBudget {
                max_orders: args.max_orders,
            };
            let p = with_jobs(args.jobs, || {
                enumerate_win_prob(args.n, args.k, policy, budget)
            })??;
            writeln!(out, "{}", format_ratio(&p))?;
            Ok(())
        }
        Command::OptimizeMu(args) => {
            let r = optimize_mu(args.tol)?;
            match args.format.unwrap_or(FormatArg::Csv) {
                FormatArg::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?,
                FormatArg::Csv => writeln!(
                    out,
                    "mu_star={:.6} x_star={:.6} p={:.6}",
                    r.mu_star, r.x_star, r.win_prob
                )?,
            }
            Ok(())
        }
        Command::Table(args) => {
            let budget = EnumerationBudget {
                max_orders: args.max_orders,
            };
            let table = with_jobs(args.jobs, || exact_threshold_table(args.n, budget))??;
            let mut text = String::from("f,win_prob,approx,best\n");
            for (f, p) in &table.rows {
                text += &format!(
                    "{f},{},{:.10},{}\n",
                    format_ratio(p),
                    ratio_to_f64(p),
                    *f == table.best_f
                );
            }
            write_text(&text, args.output.as_ref(), out)
        }
        Command::Concentration(args) => {
            let seed = match args.seed {
                Some(s) => s,
                None => env_seed()?.unwrap_or(0),
            };
            let stats = with_jobs(args.jobs, || concentration_stats(args.n, args.trials, seed))??;
            let text = match args.format.unwrap_or(FormatArg::Csv) {
                FormatArg::Json => serde_json::to_string_pretty(&stats)? + "\n",
                FormatArg::Csv => {
                    let mut s = format!(
                        "n={} trials={} seed={seed}\nmean={} expected_mean={} std_dev={} std_err={}\n",
                        stats.n, stats.trials, stats.mean, stats.expected_mean, stats.std_dev, stats.std_error
                    );
                    for (c, frac) in &stats.outside {
                        s += &format!("outside_{c}_sqrt_n={frac}\n");
                    }
                    s
                }
            };
            write_text(&text, args.output.as_ref(), out)
        }
    }
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}: cannot parse '{v}'"))),
        Err(_) => Ok(None),
    }
}

fn write_text(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Merges the config file (if any) with the flags actually given.
fn experiment_config(
    args: &ExperimentArgs,
    fixed: Option<Problem>,
    first_arrivals_only: bool,
) -> Result<ExperimentConfig> {
    let mut settings: BTreeMap<String, String> = match &args.config {
        Some(path) => parse_settings(&std::fs::read_to_string(path)?)?,
        None => BTreeMap::new(),
    };
    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            settings.insert(key.to_string(), v);
        }
    };
    let problem = match (fixed, args.problem) {
        (Some(p), None) => Some(p.name().to_string()),
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument(
                "--problem applies only to simulate".into(),
            ))
        }
        (None, p) => p.map(|p| {
            p.to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string()
        }),
    };
    set("problem", problem);
    set("n", args.n.map(|v| v.to_string()));
    set("k", args.k.map(|v| v.to_string()));
    set(
        "policy",
        args.policy.map(|p| {
            p.to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string()
        }),
    );
    set("f", args.f_value.map(|v| v.to_string()));
    set("mu", args.mu.map(|v| v.to_string()));
    set("generator", args.generator.clone());
    set(
        "instance",
        args.instance.as_ref().map(|p| p.display().to_string()),
    );
    set("resample", args.resample.then(|| "true".to_string()));
    set(
        "first_arrivals_only",
        first_arrivals_only.then(|| "true".to_string()),
    );
    set("trials", args.trials.map(|v| v.to_string()));
    set("seed", args.seed.map(|v| v.to_string()));
    set(
        "output",
        args.output.as_ref().map(|p| p.display().to_string()),
    );
    set(
        "format",
        args.format.map(|f| {
            f.to_possible_value()
                .expect("no skipped variants")
                .get_name()
                .to_string()
        }),
    );
    set("jobs", args.jobs.map(|v| v.to_string()));
    ExperimentConfig::from_settings(&settings)
}

fn warn_inconsistent(report: &SimulationReport, err: &mut dyn Write) -> Result<()> {
    if report.consistent() == Some(false) {
        let a = report
            .analytic
            .as_ref()
            .expect("consistency needs a reference");
        writeln!(
            err,
            "warning: estimate {} is {:.1} standard errors from the reference {} ({})",
            report.mean(),
            report.estimate.z_score(a.value),
            a.display_value(),
            a.source
        )?;
    }
    writeln!(err, "wall time: {:.3} s", report.wall_time.as_secs_f64())?;
    Ok(())
}

fn emit_report(
    report: &SimulationReport,
    config: &ExperimentConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    match &config.output {
        Some(path) => report.write_to(path, config.format)?,
        None => out.write_all(report.render(config.format)?.as_bytes())?,
    }
    warn_inconsistent(report, err)
}

fn write_report_file(
    report: &SimulationReport,
    config: &ExperimentConfig,
    err: &mut dyn Write,
) -> Result<()> {
    if let Some(path) = &config.output {
        report.write_to(path, config.format)?;
    }
    warn_inconsistent(report, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("stopping-lab").chain(args.iter().copied());
        let code = cli_dispatch(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exact_prints_ratio() {
        let (code, out, _) = run_cli(&["exact", "--n", "2", "--k", "2", "--policy", "no-wait"]);
        assert_eq!((code, out.as_str()), (0, "5/6\n"));
        let (code, out, _) = run_cli(&["exact", "--n", "3", "--policy", "threshold", "--f", "2"]);
        assert_eq!((code, out.as_str()), (0, "11/15\n"));
    }

    #[test]
    fn budget_exceeded_exits_two() {
        let (code, _, err) = run_cli(&["exact", "--n", "6", "--k", "3", "--max-orders", "100"]);
        assert_eq!(code, 2);
        assert!(err.contains("error"));
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, out, err) = run_cli(&["simulate", "--bogus"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("Usage"));
        assert_eq!(run_cli(&["frobnicate"]).0, 1);
        let (code, _, err) = run_cli(&["simulate", "--n", "5", "--policy", "threshold"]);
        assert_eq!(code, 1);
        assert!(err.contains("needs f"));
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_cli(&["simulate", "--help"]);
        assert_eq!(code, 0);
        for flag in [
            "--config",
            "--policy",
            "--mu",
            "--generator",
            "--jobs",
            "--format",
            "--output",
            "--seed",
        ] {
            assert!(out.contains(flag), "help lacks {flag}");
        }
    }

    #[test]
    fn trivial_simulation() {
        let (code, out, _) = run_cli(&[
            "simulate",
            "--problem",
            "secretary",
            "--n",
            "1",
            "--k",
            "2",
            "--policy",
            "no-wait",
            "--trials",
            "10",
            "--seed",
            "1",
        ]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        assert!(
            row.starts_with("secretary,1,2,no-wait,,10,1.0,0.0,0.0,1/1,"),
            "{row}"
        );
    }

    #[test]
    fn optimize_mu_output() {
        let (code, out, _) = run_cli(&["optimize-mu", "--tol", "1e-6"]);
        assert_eq!(code, 0);
        assert_eq!(out, "mu_star=0.272626 x_star=0.727374 p=0.767974\n");
        assert_eq!(run_cli(&["optimize-mu", "--tol", "0"]).0, 1);
    }
}
