//! The returning matching algorithm.
//!
//! After round `n`, `M` is an optimal matching on the left vertices that have
//! arrived exactly once. In each later round the arriving vertex `l_t` gets
//! its edge `e_t` from an optimal matching on every left vertex seen so far,
//! and `e_t` joins `M` when both endpoints are still free.

use serde::{Deserialize, Serialize};

use super::{max_weight_matching_on, BipartiteInstance, Matching};
use crate::arrival::ArrivalSequence;
use crate::error::{invalid, Result};

/// Which rounds after `n` compute an `e_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RoundSelection {
    /// Every arrival, first or second.
    #[default]
    AllArrivals,
    /// Only rounds where a vertex arrives for the first time.
    FirstArrivalsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatchingOptions {
    pub rounds: RoundSelection,
    pub record_trace: bool,
}

/// State of the algorithm after one round (rounds `n..=2n`).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub round: usize,
    pub event_item: usize,
    pub occurrence: u32,
    pub matching_size: usize,
    pub matching_weight: f64,
    pub added_edge: Option<(usize, usize)>,
    /// `e_t` with its weight, when the round computed one and `l_t` was
    /// matched in `M_t`.
    pub candidate_edge: Option<(usize, usize, f64)>,
    /// Whether `M ∪ {e_t}` was a matching.
    pub addable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReturningMatchingOutcome {
    pub matching: Matching,
    pub round_n_matching: Matching,
    pub trace: Option<Vec<TraceRow>>,
}

pub fn run_returning_matching(
    inst: &BipartiteInstance,
    seq: &ArrivalSequence,
    opts: MatchingOptions,
) -> Result<ReturningMatchingOutcome> {
    if seq.k() != 2 {
        return invalid(format!(
            "returning matching needs k = 2, got k = {}",
            seq.k()
        ));
    }
    if seq.n() != inst.left_size() {
        return invalid(format!(
            "sequence covers {} vertices, left side has {}",
            seq.n(),
            inst.left_size()
        ));
    }
    let n = seq.n();
    let events = seq.events();
    let once: Vec<usize> = seq.arrived_once_by(n).into_iter().map(|i| i.0).collect();
    let round_n_matching = max_weight_matching_on(inst, &once);

    let mut left_used = vec![false; inst.left_size()];
    let mut right_used = vec![false; inst.right_size()];
    for &(l, r, _) in &round_n_matching.edges {
        left_used[l] = true;
        right_used[r] = true;
    }
    let mut edges = round_n_matching.edges.clone();
    let mut weight = round_n_matching.weight;

    let mut seen: Vec<usize> = Vec::with_capacity(n);
    let mut is_seen = vec![false; n];
    for e in &events[..n] {
        if !std::mem::replace(&mut is_seen[e.item.0], true) {
            seen.push(e.item.0);
        }
    }

    let mut trace = opts.record_trace.then(Vec::new);
    if let Some(t) = trace.as_mut() {
        let last = &events[n - 1];
        t.push(TraceRow {
            round: n,
            event_item: last.item.0,
            occurrence: last.occurrence,
            matching_size: edges.len(),
            matching_weight: weight,
            added_edge: None,
            candidate_edge: None,
            addable: false,
        });
    }

    // M_t only changes when a new vertex joins L_t.
    let mut current: Option<Matching> = None;
    for ev in &events[n..] {
        let l = ev.item.0;
        let first = !std::mem::replace(&mut is_seen[l], true);
        if first {
            seen.push(l);
            current = None;
        }
        let mut candidate_edge = None;
        let mut addable = false;
        let mut added_edge = None;
        if first || opts.rounds == RoundSelection::AllArrivals {
            let m_t = current.get_or_insert_with(|| max_weight_matching_on(inst, &seen));
            if let Some((r, w)) = m_t.partner_of_left(l) {
                candidate_edge = Some((l, r, w));
                let already_in = edges.iter().any(|&(a, b, _)| a == l && b == r);
                addable = already_in || (!left_used[l] && !right_used[r]);
                if !already_in && addable {
                    left_used[l] = true;
                    right_used[r] = true;
                    edges.push((l, r, w));
                    weight += w;
                    added_edge = Some((l, r));
                }
            }
        }
        if let Some(t) = trace.as_mut() {
            t.push(TraceRow {
                round: ev.round,
                event_item: l,
                occurrence: ev.occurrence,
                matching_size: edges.len(),
                matching_weight: weight,
                added_edge,
                candidate_edge,
                addable,
            });
        }
    }

    Ok(ReturningMatchingOutcome {
        matching: Matching::from_edges(edges),
        round_n_matching,
        trace,
    })
}

/// Fraction of the right side left unmatched by `M`, per traced round.
pub fn unmatched_right_fraction(trace: &[TraceRow], right_size: usize) -> Vec<(usize, f64)> {
    trace
        .iter()
        .map(|row| {
            (
                row.round,
                (right_size - row.matching_size) as f64 / right_size as f64,
            )
        })
        .collect()
}
