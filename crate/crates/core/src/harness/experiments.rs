//! Matroid and matching experiments with their diagnostics.

use std::time::Instant;

use rayon::prelude::*;

use super::config::{ExperimentConfig, InstanceSource, Problem};
use super::report::{AnalyticReference, ReferenceKind, SimulationReport};
use super::stats::MeanEstimate;
use super::with_jobs;
use crate::arrival::permutation_sequence_with;
use crate::error::{Error, Result};
use crate::matching::{
    io::parse_bipartite, max_weight_matching, run_returning_matching, BipartiteInstance,
    MatchingOptions, RoundSelection, TraceRow,
};
use crate::matroid::{
    greedy_basis, io::parse_matroid, run_continued_greedy, WeightedMatroidInstance,
};
use crate::rng::{self, StdRng};

/// Stream index reserved for drawing the shared instance.
const INSTANCE_STREAM: u64 = u64::MAX;

/// `n / (2n - 1)`, the probability that an element arrives exactly once in
/// the first `n` of `2n` rounds.
pub fn once_probability(n: usize) -> f64 {
    let n = n as f64;
    n / (2.0 * n - 1.0)
}

fn instance_label(source: &InstanceSource) -> String {
    match source {
        InstanceSource::Generator(g) => g.to_string(),
        InstanceSource::File(p) => p.display().to_string(),
    }
}

fn source_of(config: &ExperimentConfig) -> Result<&InstanceSource> {
    config.instance.as_ref().ok_or_else(|| {
        Error::InvalidConfig(vec![format!(
            "{} runs need a generator or an instance file",
            config.problem.name()
        )])
    })
}

type Draw<T> = Box<dyn Fn(&mut StdRng) -> Result<T> + Send + Sync>;

/// Either one instance shared by every trial or a fresh draw per trial.
enum Instances<T> {
    Fixed(T),
    Resampled(Draw<T>),
}

impl<T: Clone> Instances<T> {
    fn for_trial(&self, rng: &mut StdRng) -> Result<std::borrow::Cow<'_, T>> {
        match self {
            Instances::Fixed(t) => Ok(std::borrow::Cow::Borrowed(t)),
            Instances::Resampled(f) => Ok(std::borrow::Cow::Owned(f(rng)?)),
        }
    }

    fn fixed(&self) -> Option<&T> {
        match self {
            Instances::Fixed(t) => Some(t),
            Instances::Resampled(_) => None,
        }
    }
}

fn matroid_instances(
    config: &ExperimentConfig,
) -> Result<(Instances<WeightedMatroidInstance>, usize)> {
    match source_of(config)? {
        InstanceSource::File(path) => {
            let inst = parse_matroid(&std::fs::read_to_string(path)?)?;
            let n = inst.ground_size();
            Ok((Instances::Fixed(inst), n))
        }
        InstanceSource::Generator(spec) => {
            let first = spec.matroid(&mut rng::trial_rng(config.seed, INSTANCE_STREAM))?;
            let n = first.ground_size();
            if config.resample {
                let spec = spec.clone();
                Ok((Instances::Resampled(Box::new(move |r| spec.matroid(r))), n))
            } else {
                Ok((Instances::Fixed(first), n))
            }
        }
    }
}

fn bipartite_instances(config: &ExperimentConfig) -> Result<(Instances<BipartiteInstance>, usize)> {
    match source_of(config)? {
        InstanceSource::File(path) => {
            let inst = parse_bipartite(&std::fs::read_to_string(path)?)?;
            let n = inst.left_size();
            Ok((Instances::Fixed(inst), n))
        }
        InstanceSource::Generator(spec) => {
            let first = spec.bipartite(&mut rng::trial_rng(config.seed, INSTANCE_STREAM))?;
            let n = first.left_size();
            if config.resample {
                let spec = spec.clone();
                Ok((
                    Instances::Resampled(Box::new(move |r| spec.bipartite(r))),
                    n,
                ))
            } else {
                Ok((Instances::Fixed(first), n))
            }
        }
    }
}

fn require(config: &ExperimentConfig, problem: Problem) -> Result<()> {
    if config.problem != problem {
        return Err(Error::InvalidConfig(vec![format!(
            "expected a {} configuration",
            problem.name()
        )]));
    }
    if config.k != 2 {
        return Err(Error::InvalidConfig(vec![format!(
            "{} runs need k = 2",
            problem.name()
        )]));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatroidExperiment {
    /// Mean of `w(S) / w(B*)`.
    pub report: SimulationReport,
    pub ground_size: usize,
    /// `n / (2n - 1)`: the ratio guarantee and the `E'` membership rate.
    pub bound: f64,
    /// Per-element frequency of landing in `E'` (shared instance only).
    pub membership: Option<Vec<MeanEstimate>>,
    /// Mean of `w / w(B*)` for the continued-greedy diagnostic.
    pub continued_ratio: MeanEstimate,
    /// Trials in which the heaviest element missed `E'`.
    pub heaviest_missed: u64,
    /// Of those, trials in which continued greedy still added it after round `n`.
    pub heaviest_added_late: u64,
}

impl MatroidExperiment {
    pub fn heaviest_late_fraction(&self) -> f64 {
        self.heaviest_added_late as f64 / self.heaviest_missed as f64
    }
}

struct MatroidTrial {
    ratio: f64,
    continued_ratio: f64,
    e_prime: Vec<usize>,
    heaviest_missed: bool,
    heaviest_added_late: bool,
}

pub fn matroid_experiment(config: &ExperimentConfig) -> Result<MatroidExperiment> {
    require(config, Problem::Matroid)?;
    let start = Instant::now();
    let (instances, n) = matroid_instances(config)?;
    let seed = config.seed;
    let trials: Vec<MatroidTrial> = with_jobs(config.jobs, || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng::trial_rng(seed, t);
                let inst = instances.for_trial(&mut rng)?;
                let seq = permutation_sequence_with(inst.ground_size(), 2, &mut rng)?;
                let out = run_continued_greedy(&inst, &seq)?;
                let best = greedy_basis(&inst).weight;
                let heaviest = inst.by_weight_desc(&(0..inst.ground_size()).collect::<Vec<_>>())[0];
                let missed = !out.at_round_n.e_prime.contains(&heaviest);
                Ok(MatroidTrial {
                    ratio: out.at_round_n.weight / best,
                    continued_ratio: out.weight / best,
                    heaviest_missed: missed,
                    heaviest_added_late: missed
                        && out.added_after.iter().any(|&(_, e)| e == heaviest),
                    e_prime: out.at_round_n.e_prime,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let ratios: Vec<f64> = trials.iter().map(|t| t.ratio).collect();
    let continued: Vec<f64> = trials.iter().map(|t| t.continued_ratio).collect();
    let membership = instances.fixed().map(|_| {
        let mut counts = vec![0u64; n];
        for t in &trials {
            for &e in &t.e_prime {
                counts[e] += 1;
            }
        }
        counts
            .into_iter()
            .map(|c| MeanEstimate::from_successes(c, config.trials))
            .collect()
    });
    let bound = once_probability(n);
    let kind = match instances.fixed() {
        Some(inst) => inst.kind().name().to_string(),
        None => "resampled".to_string(),
    };
    let report = SimulationReport {
        problem: Problem::Matroid.name().into(),
        n,
        k: 2,
        policy: kind,
        param: instance_label(source_of(config)?),
        estimate: MeanEstimate::from_samples(&ratios),
        analytic: Some(AnalyticReference::approx(
            bound,
            "ratio lower bound n/(2n-1)",
            ReferenceKind::LowerBound,
        )),
        seed,
        wall_time: start.elapsed(),
    };
    Ok(MatroidExperiment {
        report,
        ground_size: n,
        bound,
        membership,
        continued_ratio: MeanEstimate::from_samples(&continued),
        heaviest_missed: trials.iter().filter(|t| t.heaviest_missed).count() as u64,
        heaviest_added_late: trials.iter().filter(|t| t.heaviest_added_late).count() as u64,
    })
}

/// The competitive guarantee for the final matching.
pub const MATCHING_RATIO_BOUND: f64 = 9.0 / 16.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingExperiment {
    /// Mean of `w(M) / OPT`.
    pub report: SimulationReport,
    pub left_size: usize,
    /// Mean of `w(M_n) / OPT` for the matching fixed at round `n`.
    pub round_n_ratio: MeanEstimate,
    /// `n / (2n - 1)`.
    pub round_n_bound: f64,
    /// Per-trial fraction of first-arrival rounds after `n` whose `e_t`
    /// could be added to `M`.
    pub addable: MeanEstimate,
    /// Mean of `n · w(e_t) / OPT` over first-arrival rounds after `n`, with
    /// `w(e_t) = 0` when the arriving vertex is unmatched in `M_t`.
    pub edge_weight_ratio: MeanEstimate,
    /// Fraction of the right side unmatched right after round `n`.
    pub unmatched_at_n: MeanEstimate,
}

struct MatchingTrial {
    ratio: f64,
    round_n_ratio: f64,
    addable: Option<f64>,
    edge_weight_ratio: Option<f64>,
    unmatched_at_n: f64,
}

pub fn matching_experiment(config: &ExperimentConfig) -> Result<MatchingExperiment> {
    require(config, Problem::Matching)?;
    let start = Instant::now();
    let (instances, n) = bipartite_instances(config)?;
    let seed = config.seed;
    let opts = MatchingOptions {
        rounds: config.rounds,
        record_trace: true,
    };
    let trials: Vec<MatchingTrial> = with_jobs(config.jobs, || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = rng::trial_rng(seed, t);
                let inst = instances.for_trial(&mut rng)?;
                let left = inst.left_size();
                let seq = permutation_sequence_with(left, 2, &mut rng)?;
                let out = run_returning_matching(&inst, &seq, opts)?;
                let opt = max_weight_matching(&inst).weight;
                let norm = |w: f64| if opt > 0.0 { w / opt } else { 1.0 };
                let trace = out.trace.as_deref().unwrap_or_default();
                let rounds: Vec<_> = trace
                    .iter()
                    .filter(|r| r.round > left && r.occurrence == 1)
                    .collect();
                let with_edge: Vec<_> = rounds
                    .iter()
                    .filter(|r| r.candidate_edge.is_some())
                    .collect();
                let addable = (!with_edge.is_empty()).then(|| {
                    with_edge.iter().filter(|r| r.addable).count() as f64 / with_edge.len() as f64
                });
                let edge_weight_ratio = (!rounds.is_empty() && opt > 0.0).then(|| {
                    let total: f64 = rounds
                        .iter()
                        .map(|r| r.candidate_edge.map_or(0.0, |e| e.2))
                        .sum();
                    total / rounds.len() as f64 * left as f64 / opt
                });
                Ok(MatchingTrial {
                    ratio: norm(out.matching.weight),
                    round_n_ratio: norm(out.round_n_matching.weight),
                    addable,
                    edge_weight_ratio,
                    unmatched_at_n: (inst.right_size() - out.round_n_matching.len()) as f64
                        / inst.right_size() as f64,
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let collect = |f: &dyn Fn(&MatchingTrial) -> Option<f64>| -> MeanEstimate {
        MeanEstimate::from_samples(&trials.iter().filter_map(f).collect::<Vec<f64>>())
    };
    let report = SimulationReport {
        problem: Problem::Matching.name().into(),
        n,
        k: 2,
        policy: match config.rounds {
            RoundSelection::AllArrivals => "all-arrivals".into(),
            RoundSelection::FirstArrivalsOnly => "first-arrivals-only".into(),
        },
        param: instance_label(source_of(config)?),
        estimate: collect(&|t| Some(t.ratio)),
        analytic: Some(AnalyticReference::approx(
            MATCHING_RATIO_BOUND,
            "ratio lower bound 9/16",
            ReferenceKind::LowerBound,
        )),
        seed,
        wall_time: start.elapsed(),
    };
    Ok(MatchingExperiment {
        report,
        left_size: n,
        round_n_ratio: collect(&|t| Some(t.round_n_ratio)),
        round_n_bound: once_probability(n),
        addable: collect(&|t| t.addable),
        edge_weight_ratio: collect(&|t| t.edge_weight_ratio),
        unmatched_at_n: collect(&|t| Some(t.unmatched_at_n)),
    })
}

/// Replays trial 0 of a matching configuration with a full trace.
pub fn matching_trace(config: &ExperimentConfig) -> Result<Vec<TraceRow>> {
    require(config, Problem::Matching)?;
    let (instances, _) = bipartite_instances(config)?;
    let mut rng = rng::trial_rng(config.seed, 0);
    let inst = instances.for_trial(&mut rng)?;
    let seq = permutation_sequence_with(inst.left_size(), 2, &mut rng)?;
    let out = run_returning_matching(
        &inst,
        &seq,
        MatchingOptions {
            rounds: config.rounds,
            record_trace: true,
        },
    )?;
    Ok(out.trace.unwrap_or_default())
}
