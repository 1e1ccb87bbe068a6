//! Distribution of `s_n`, the number of items that have arrived exactly once
//! after `n` of the `2n` rounds.

use rayon::prelude::*;
use serde::Serialize;

use crate::arrival::permutation_sequence_with;
use crate::error::{invalid, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationStats {
    pub n: usize,
    pub trials: u64,
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    /// `n² / (2n - 1)`.
    pub expected_mean: f64,
    /// `(c, fraction of trials with |s_n - n/2| > c·√n)` for c in {2, 4, 8}.
    pub outside: Vec<(f64, f64)>,
}

pub const DEVIATION_MULTIPLIERS: [f64; 3] = [2.0, 4.0, 8.0];

pub fn s_n_sample(n: usize, seed: u64, trial: u64) -> usize {
    let seq = permutation_sequence_with(n, 2, &mut rng::trial_rng(seed, trial)).expect("n >= 1");
    seq.arrived_once_by(n).len()
}

pub fn concentration_stats(n: usize, trials: u64, seed: u64) -> Result<ConcentrationStats> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    if trials < 1000 {
        return invalid(format!(
            "concentration experiments need at least 1000 trials, got {trials}"
        ));
    }
    let samples: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| s_n_sample(n, seed, t))
        .collect();
    let count = trials as f64;
    let mean = samples.iter().map(|&s| s as f64).sum::<f64>() / count;
    let var = samples
        .iter()
        .map(|&s| (s as f64 - mean).powi(2))
        .sum::<f64>()
        / (count - 1.0);
    let half = n as f64 / 2.0;
    let root = (n as f64).sqrt();
    let outside = DEVIATION_MULTIPLIERS
        .iter()
        .map(|&c| {
            (
                c,
                samples
                    .iter()
                    .filter(|&&s| (s as f64 - half).abs() > c * root)
                    .count() as f64
                    / count,
            )
        })
        .collect();
    let nf = n as f64;
    Ok(ConcentrationStats {
        n,
        trials,
        mean,
        std_dev: var.sqrt(),
        std_error: (var / count).sqrt(),
        expected_mean: nf * nf / (2.0 * nf - 1.0),
        outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item_always_once() {
        let s = concentration_stats(1, 1000, 3).unwrap();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.std_dev, 0.0);
        assert_eq!(s.expected_mean, 1.0);
    }

    #[test]
    fn rejects_small_trial_counts() {
        assert!(concentration_stats(10, 999, 0).is_err());
        assert!(concentration_stats(0, 1000, 0).is_err());
    }

    #[test]
    fn mean_near_expectation() {
        let s = concentration_stats(200, 4000, 9).unwrap();
        assert!(
            (s.mean - s.expected_mean).abs() <= 4.0 * s.std_error,
            "{s:?}"
        );
        assert_eq!(s.outside.len(), 3);
    }
}
