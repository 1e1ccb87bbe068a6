//! Seeded Monte Carlo engine.
//!
//! Trial `t` draws everything it needs from [`rng::trial_rng`]`(seed, t)`.
//! Per-trial results are collected in trial order and reduced sequentially,
//! so a report depends only on the configuration, never on the worker count.

pub mod config;
pub mod experiments;
pub mod report;
pub mod stats;

use std::time::Instant;

use rayon::prelude::*;

pub use config::{ExperimentConfig, GeneratorSpec, InstanceSource, OutputFormat, Problem};
pub use experiments::{
    matching_experiment, matroid_experiment, MatchingExperiment, MatroidExperiment,
};
pub use report::{AnalyticReference, ReferenceKind, SimulationReport, CSV_HEADER};
pub use stats::MeanEstimate;

use crate::arrival::{permutation_sequence_with, timed_sequence_with};
use crate::error::{Error, Result};
use crate::oracle::{self, EnumerationBudget};
use crate::rng;
use crate::secretary::analytic::{asymptotic_win, k3_win_prob_exact, no_wait_win_prob, ratio};
use crate::secretary::{Policy, RankedInstance};

/// Largest enumeration the harness runs to attach an exact reference.
pub const REFERENCE_ENUMERATION_LIMIT: u64 = 200_000;

/// Runs `f` on a pool with `jobs` workers, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {j} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs the configured experiment and summarizes it.
pub fn monte_carlo(config: &ExperimentConfig) -> Result<SimulationReport> {
    match config.problem {
        Problem::Secretary => secretary_monte_carlo(config),
        Problem::Matroid => Ok(matroid_experiment(config)?.report),
        Problem::Matching => Ok(matching_experiment(config)?.report),
    }
}

fn secretary_monte_carlo(config: &ExperimentConfig) -> Result<SimulationReport> {
    let start = Instant::now();
    let n = config
        .n
        .ok_or_else(|| Error::InvalidConfig(vec!["secretary runs need n".into()]))?;
    let policy = config
        .policy
        .ok_or_else(|| Error::InvalidConfig(vec!["secretary runs need a policy".into()]))?;
    let (k, seed) = (config.k, config.seed);
    let ranks = RankedInstance::identity(n);
    let wins: Vec<bool> = with_jobs(config.jobs, || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng::trial_rng(seed, t);
                let seq = if policy.needs_timed() {
                    timed_sequence_with(n, k, &mut rng)?
                } else {
                    permutation_sequence_with(n, k, &mut rng)?
                };
                Ok(policy.run(&seq, &ranks)?.won)
            })
            .collect::<Result<Vec<bool>>>()
    })??;
    let successes = wins.iter().filter(|&&w| w).count() as u64;
    Ok(SimulationReport {
        problem: Problem::Secretary.name().into(),
        n,
        k,
        policy: policy.name().into(),
        param: policy.param(),
        estimate: MeanEstimate::from_successes(successes, config.trials),
        analytic: secretary_reference(n, k, policy)?,
        seed,
        wall_time: start.elapsed(),
    })
}

/// The analytic value covering a secretary configuration, if any.
pub fn secretary_reference(
    n: usize,
    k: usize,
    policy: Policy,
) -> Result<Option<AnalyticReference>> {
    let nn = n as u64;
    Ok(match (policy, k) {
        (Policy::NoWait, 1) => Some(AnalyticReference::exact(
            ratio(1, n as i64),
            "first arrival, 1/n",
        )),
        (Policy::NoWait, 2) => Some(AnalyticReference::exact(
            no_wait_win_prob(nn)?,
            "no-wait closed form (2n+1)/(3n)",
        )),
        (Policy::NoWait, 3) if n >= 2 => Some(AnalyticReference::exact(
            k3_win_prob_exact(nn)?,
            "k=3 no-wait closed form",
        )),
        (Policy::Time { mu }, 2) => {
            // At x = 1 the logarithmic term vanishes and g(1) = 2/3.
            let x = 1.0 - mu;
            let value = if x < 1.0 {
                asymptotic_win(x)?
            } else {
                2.0 / 3.0
            };
            Some(AnalyticReference::approx(
                value,
                "large-n limit of the time policy",
                ReferenceKind::Limit,
            ))
        }
        (Policy::NoWait | Policy::Threshold { .. }, _) => {
            let budget = EnumerationBudget {
                max_orders: REFERENCE_ENUMERATION_LIMIT,
            };
            match oracle::enumerate_win_prob(n, k, policy, budget) {
                Ok(p) => Some(AnalyticReference::exact(p, "exact enumeration")),
                Err(Error::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            }
        }
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item_always_wins() {
        for policy in [
            Policy::NoWait,
            Policy::Threshold { f_value: 0 },
            Policy::Time { mu: 0.0 },
        ] {
            let r = monte_carlo(&ExperimentConfig::secretary(1, 2, policy, 10, 1)).unwrap();
            assert_eq!(r.mean(), 1.0, "{policy:?}");
            assert_eq!(r.std_err(), 0.0);
        }
    }

    #[test]
    fn no_wait_reference_and_consistency() {
        let r = monte_carlo(&ExperimentConfig::secretary(
            5,
            2,
            Policy::NoWait,
            20_000,
            3,
        ))
        .unwrap();
        assert_eq!(r.analytic.as_ref().unwrap().display_value(), "11/15");
        assert_eq!(r.consistent(), Some(true), "{r:?}");
        assert_eq!(r.ci95(), 1.96 * r.std_err());
    }

    #[test]
    fn threshold_reference_comes_from_enumeration() {
        let r = secretary_reference(3, 2, Policy::Threshold { f_value: 1 })
            .unwrap()
            .unwrap();
        assert_eq!(r.display_value(), "5/6");
        assert!(secretary_reference(30, 2, Policy::Threshold { f_value: 1 })
            .unwrap()
            .is_none());
        assert_eq!(
            secretary_reference(10, 1, Policy::NoWait)
                .unwrap()
                .unwrap()
                .display_value(),
            "1/10"
        );
    }

    #[test]
    fn independent_of_worker_count() {
        let mut c = ExperimentConfig::secretary(20, 2, Policy::Time { mu: 0.27 }, 2000, 11);
        c.jobs = Some(1);
        let a = monte_carlo(&c).unwrap();
        c.jobs = Some(3);
        let b = monte_carlo(&c).unwrap();
        assert_eq!(
            a.render(OutputFormat::Csv).unwrap(),
            b.render(OutputFormat::Csv).unwrap()
        );
    }
}
