//! The returning matroid secretary algorithm.
//!
//! Let the first `n` of the `2n` arrivals pass, collect the elements that have
//! arrived exactly once (`E'`), and run greedy on them. Every element of `E'`
//! still has its second arrival ahead, so all selections are legal.

use std::collections::HashSet;

use rand::Rng;

use super::greedy::{greedy_basis, greedy_on};
use super::{MatroidKind, WeightedMatroidInstance};
use crate::arrival::ArrivalSequence;
use crate::error::{invalid, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct MatroidSelection {
    /// Elements with exactly one arrival among the first `n` rounds.
    pub e_prime: Vec<usize>,
    pub selected: Vec<usize>,
    pub weight: f64,
}

fn check_sequence(instance: &WeightedMatroidInstance, seq: &ArrivalSequence) -> Result<()> {
    if seq.k() != 2 {
        return invalid(format!(
            "returning matroid secretary needs k = 2, got k = {}",
            seq.k()
        ));
    }
    if seq.n() != instance.ground_size() {
        return invalid(format!(
            "sequence covers {} elements, ground set has {}",
            seq.n(),
            instance.ground_size()
        ));
    }
    Ok(())
}

pub fn run_matroid_secretary(
    instance: &WeightedMatroidInstance,
    seq: &ArrivalSequence,
) -> Result<MatroidSelection> {
    check_sequence(instance, seq)?;
    let e_prime: Vec<usize> = seq
        .arrived_once_by(seq.n())
        .into_iter()
        .map(|i| i.0)
        .collect();
    let greedy = greedy_on(instance, &e_prime);
    Ok(MatroidSelection {
        e_prime,
        selected: greedy.basis,
        weight: greedy.weight,
    })
}

/// Diagnostic variant that keeps adding greedily after round `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuedGreedyOutcome {
    pub at_round_n: MatroidSelection,
    pub selected: Vec<usize>,
    pub weight: f64,
    /// `(round, element)` for every element added after round `n`.
    pub added_after: Vec<(usize, usize)>,
}

/// Runs the algorithm, then for every arrival after round `n` adds the
/// arriving element whenever independence allows. This is not part of the
/// algorithm proper; it exists to show how little such continuation helps.
pub fn run_continued_greedy(
    instance: &WeightedMatroidInstance,
    seq: &ArrivalSequence,
) -> Result<ContinuedGreedyOutcome> {
    let at_round_n = run_matroid_secretary(instance, seq)?;
    let n = seq.n();
    let mut state = instance.independence_state();
    let mut chosen: HashSet<usize> = HashSet::new();
    for &e in &at_round_n.selected {
        assert!(state.try_add(e), "greedy output is independent");
        chosen.insert(e);
    }
    let mut selected = at_round_n.selected.clone();
    let mut added_after = Vec::new();
    for ev in &seq.events()[n..] {
        let e = ev.item.0;
        if !chosen.contains(&e) && state.try_add(e) {
            chosen.insert(e);
            selected.push(e);
            added_after.push((ev.round, e));
        }
    }
    let weight = instance.total_weight(&selected);
    Ok(ContinuedGreedyOutcome {
        at_round_n,
        selected,
        weight,
        added_after,
    })
}

/// True when, sorted by decreasing weight, the i-th greedy pick on `e_prime`
/// weighs at least the i-th element of the optimal basis restricted to
/// `e_prime`, for every i.
pub fn greedy_dominance_check(instance: &WeightedMatroidInstance, e_prime: &[usize]) -> bool {
    let picks = greedy_on(instance, e_prime).basis;
    let in_e_prime: HashSet<usize> = e_prime.iter().copied().collect();
    let restricted: Vec<usize> = greedy_basis(instance)
        .basis
        .into_iter()
        .filter(|e| in_e_prime.contains(e))
        .collect();
    let restricted = instance.by_weight_desc(&restricted);
    picks.len() >= restricted.len()
        && picks
            .iter()
            .zip(&restricted)
            .all(|(&g, &b)| instance.weight(g) >= instance.weight(b))
}

/// Index of the heavy edge `(u, v)` in [`adversarial_instance`].
pub const ADVERSARIAL_HEAVY_EDGE: usize = 0;

pub fn default_adversarial_eps(m: usize) -> f64 {
    1e-3 / (m as f64 + 1.0)
}

/// Graphic matroid on `u = 0`, `v = 1` and `w_i = 2 + i`: the heavy edge
/// `(u, v)` of weight `m + 1` (element 0), then for each `i` the edges
/// `(u, w_i)` with weight in `(eps, 2 eps)` and `(v, w_i)` with weight in
/// `(2 eps, 3 eps)` (elements `1 + 2i` and `2 + 2i`).
pub fn adversarial_instance(m: usize, eps: f64, seed: u64) -> Result<WeightedMatroidInstance> {
    if m == 0 {
        return invalid("m must be at least 1");
    }
    if !(eps.is_finite() && eps > 0.0) {
        return invalid(format!("eps must be positive, got {eps}"));
    }
    let mut rng = rng::seeded(seed);
    let mut used: HashSet<u64> = HashSet::new();
    let mut draw = |lo: f64, rng: &mut rng::StdRng| loop {
        let u: f64 = rng.gen();
        let w = lo + eps * u;
        if u > 0.0 && w < lo + eps && used.insert(w.to_bits()) {
            return w;
        }
    };
    let mut edges = vec![(0, 1)];
    let mut weights = vec![m as f64 + 1.0];
    for i in 0..m {
        let w_i = 2 + i;
        edges.push((0, w_i));
        weights.push(draw(eps, &mut rng));
        edges.push((1, w_i));
        weights.push(draw(2.0 * eps, &mut rng));
    }
    WeightedMatroidInstance::new(
        MatroidKind::Graphic {
            vertices: m + 2,
            edges,
        },
        weights,
    )
}
