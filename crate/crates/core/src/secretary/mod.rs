//! The returning secretary problem: stopping policies, closed-form win
//! probabilities, and the optimal time threshold.

pub mod analytic;
pub mod optimize;
pub mod policy;

use num_rational::BigRational;

pub use analytic::{
    asymptotic_win, k3_win_prob, k3_win_prob_exact, no_wait_win_prob, pairwise_dominance_prob,
    win_lower_bound,
};
pub use optimize::{optimize_mu, OptimalMuResult};
pub use policy::{
    run_k_returning_no_wait, run_threshold_policy, run_time_policy, Policy, PolicyOutcome,
    RankedInstance,
};

use crate::error::Result;
use crate::oracle::{enumerate_policy_table, EnumerationBudget, PolicyFamily};

/// Exact win probability of the threshold policy for every `f_value` in
/// `0..=n`, with the best `f_value` (smallest on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    pub rows: Vec<(usize, BigRational)>,
    pub best_f: usize,
}

pub fn exact_threshold_table(n: usize, budget: EnumerationBudget) -> Result<ThresholdTable> {
    let rows = enumerate_policy_table(n, 2, PolicyFamily::Threshold, budget)?;
    let mut best_f = 0;
    for (f, p) in &rows {
        if *p > rows[best_f].1 {
            best_f = *f;
        }
    }
    Ok(ThresholdTable { rows, best_f })
}
