//! Stopping policies for the returning secretary problem.
//!
//! Every policy tracks the *candidate*, the best item observed so far, and
//! only ever accepts the candidate at one of its arrivals.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arrival::{ArrivalSequence, ItemId};
use crate::error::{invalid, Result};

/// Preference order over items. Rank 1 is the best item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedInstance {
    ranks: Vec<u32>,
}

impl RankedInstance {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        let n = ranks.len();
        if n == 0 {
            return invalid("ranked instance needs at least one item");
        }
        let mut seen = vec![false; n];
        for &r in &ranks {
            let r = r as usize;
            if r == 0 || r > n || seen[r - 1] {
                return invalid("ranks must be a bijection onto 1..=n");
            }
            seen[r - 1] = true;
        }
        Ok(Self { ranks })
    }

    /// Item `i` has rank `i + 1`, so item 0 is the best.
    pub fn identity(n: usize) -> Self {
        Self {
            ranks: (1..=n as u32).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut ranks: Vec<u32> = (1..=n as u32).collect();
        ranks.shuffle(rng);
        Self { ranks }
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, item: ItemId) -> u32 {
        self.ranks[item.0]
    }

    pub fn best(&self) -> ItemId {
        ItemId(
            self.ranks
                .iter()
                .position(|&r| r == 1)
                .expect("rank 1 exists"),
        )
    }

    fn better(&self, a: ItemId, b: ItemId) -> bool {
        self.ranks[a.0] < self.ranks[b.0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolicyOutcome {
    pub hired: Option<ItemId>,
    pub decision_round: Option<usize>,
    pub decision_time: Option<f64>,
    pub won: bool,
}

impl PolicyOutcome {
    fn hire(inst: &RankedInstance, item: ItemId, round: usize, time: Option<f64>) -> Self {
        Self {
            hired: Some(item),
            decision_round: Some(round),
            decision_time: time,
            won: inst.rank(item) == 1,
        }
    }

    fn none() -> Self {
        Self::default()
    }
}

fn check_sizes(seq: &ArrivalSequence, inst: &RankedInstance) -> Result<()> {
    if seq.n() != inst.n() {
        return invalid(format!(
            "sequence has {} items but instance has {}",
            seq.n(),
            inst.n()
        ));
    }
    Ok(())
}

/// Waits until more than `f_value` distinct items have arrived, then accepts
/// the candidate when it returns. A candidate whose return falls inside the
/// waiting phase is passed over for good.
pub fn run_threshold_policy(
    seq: &ArrivalSequence,
    inst: &RankedInstance,
    f_value: usize,
) -> Result<PolicyOutcome> {
    check_sizes(seq, inst)?;
    if seq.k() != 2 {
        return invalid(format!("threshold policy needs k = 2, got k = {}", seq.k()));
    }
    if f_value > seq.n() {
        return invalid(format!("f_value {f_value} exceeds n = {}", seq.n()));
    }
    let mut candidate: Option<ItemId> = None;
    let mut distinct = 0;
    for e in seq.events() {
        if e.occurrence == 1 {
            distinct += 1;
        }
        if candidate == Some(e.item) && distinct > f_value {
            return Ok(PolicyOutcome::hire(inst, e.item, e.round, e.time));
        }
        if candidate.is_none_or(|c| inst.better(e.item, c)) {
            candidate = Some(e.item);
        }
    }
    Ok(PolicyOutcome::none())
}

/// Continuous-time variant: accepts the candidate at an arrival whose
/// timestamp is at least `mu`.
pub fn run_time_policy(
    seq: &ArrivalSequence,
    inst: &RankedInstance,
    mu: f64,
) -> Result<PolicyOutcome> {
    check_sizes(seq, inst)?;
    if !seq.is_timed() {
        return invalid("time policy needs a timed sequence");
    }
    if !(0.0..1.0).contains(&mu) {
        return invalid(format!("mu = {mu} outside [0, 1)"));
    }
    let mut candidate: Option<ItemId> = None;
    for e in seq.events() {
        let t = e.time.expect("timed sequence");
        if candidate == Some(e.item) && t >= mu {
            return Ok(PolicyOutcome::hire(inst, e.item, e.round, e.time));
        }
        if candidate.is_none_or(|c| inst.better(e.item, c)) {
            candidate = Some(e.item);
        }
    }
    Ok(PolicyOutcome::none())
}

/// No waiting, any `k`: accepts the candidate on its final (k-th) arrival.
/// With `k = 1` this hires the first item.
pub fn run_k_returning_no_wait(
    seq: &ArrivalSequence,
    inst: &RankedInstance,
) -> Result<PolicyOutcome> {
    check_sizes(seq, inst)?;
    let k = seq.k() as u32;
    let mut candidate: Option<ItemId> = None;
    for e in seq.events() {
        // A new candidate always arrives for the first time, so updating
        // before the check only matters for k = 1.
        if candidate.is_none_or(|c| inst.better(e.item, c)) {
            candidate = Some(e.item);
        }
        if candidate == Some(e.item) && e.occurrence == k {
            return Ok(PolicyOutcome::hire(inst, e.item, e.round, e.time));
        }
    }
    Ok(PolicyOutcome::none())
}

/// A stopping policy with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum Policy {
    NoWait,
    Threshold { f_value: usize },
    Time { mu: f64 },
}

impl Policy {
    pub fn run(&self, seq: &ArrivalSequence, inst: &RankedInstance) -> Result<PolicyOutcome> {
        match *self {
            Policy::NoWait => run_k_returning_no_wait(seq, inst),
            Policy::Threshold { f_value } => run_threshold_policy(seq, inst, f_value),
            Policy::Time { mu } => run_time_policy(seq, inst, mu),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Policy::NoWait => "no-wait",
            Policy::Threshold { .. } => "threshold",
            Policy::Time { .. } => "time",
        }
    }

    pub fn needs_timed(&self) -> bool {
        matches!(self, Policy::Time { .. })
    }

    /// The policy parameter as printed in reports (empty for no-wait).
    pub fn param(&self) -> String {
        match self {
            Policy::NoWait => String::new(),
            Policy::Threshold { f_value } => f_value.to_string(),
            Policy::Time { mu } => format!("{mu}"),
        }
    }
}
