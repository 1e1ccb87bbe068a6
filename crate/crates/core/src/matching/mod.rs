//! Returning bipartite edge-weighted matching.
//!
//! Left vertices arrive online, twice each; the right side is known up front.

pub mod concentration;
pub mod hungarian;
pub mod io;
pub mod online;

use rand::Rng;

use crate::error::{invalid, Result};

pub use concentration::{concentration_stats, ConcentrationStats};
pub use online::{
    run_returning_matching, unmatched_right_fraction, MatchingOptions, ReturningMatchingOutcome,
    RoundSelection, TraceRow,
};

/// Bipartite graph with non-negative edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteInstance {
    left_size: usize,
    right_size: usize,
    edges: Vec<(usize, usize, f64)>,
    dense: Vec<Option<f64>>,
}

impl BipartiteInstance {
    pub fn new(
        left_size: usize,
        right_size: usize,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        let mut dense = vec![None; left_size * right_size];
        for &(l, r, w) in &edges {
            if l >= left_size || r >= right_size {
                return invalid(format!("edge ({l}, {r}) out of range"));
            }
            if !(w.is_finite() && w >= 0.0) {
                return invalid(format!("edge ({l}, {r}) has invalid weight {w}"));
            }
            if dense[l * right_size + r].replace(w).is_some() {
                return invalid(format!("duplicate edge ({l}, {r})"));
            }
        }
        Ok(Self {
            left_size,
            right_size,
            edges,
            dense,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn weight(&self, l: usize, r: usize) -> Option<f64> {
        self.dense[l * self.right_size + r]
    }
}

/// A set of vertex-disjoint edges, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matching {
    pub edges: Vec<(usize, usize, f64)>,
    pub weight: f64,
}

impl Matching {
    pub fn from_edges(mut edges: Vec<(usize, usize, f64)>) -> Self {
        edges.sort_by_key(|e| (e.0, e.1));
        let weight = edges.iter().map(|e| e.2).sum();
        Self { edges, weight }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        let mut lefts: Vec<usize> = self.edges.iter().map(|e| e.0).collect();
        let mut rights: Vec<usize> = self.edges.iter().map(|e| e.1).collect();
        lefts.sort_unstable();
        rights.sort_unstable();
        lefts.windows(2).all(|w| w[0] != w[1]) && rights.windows(2).all(|w| w[0] != w[1])
    }

    pub fn partner_of_left(&self, l: usize) -> Option<(usize, f64)> {
        self.edges.iter().find(|e| e.0 == l).map(|e| (e.1, e.2))
    }
}

/// Maximum-weight matching of the whole instance.
pub fn max_weight_matching(inst: &BipartiteInstance) -> Matching {
    let all: Vec<usize> = (0..inst.left_size).collect();
    max_weight_matching_on(inst, &all)
}

/// Maximum-weight matching of the subgraph induced by `lefts` and all of the
/// right side. Zero-weight edges are never reported.
pub fn max_weight_matching_on(inst: &BipartiteInstance, lefts: &[usize]) -> Matching {
    let rows = lefts.len();
    let cols = inst.right_size.max(rows);
    // Missing edges and padding columns cost 0, which is the same as leaving
    // the row unmatched.
    let cost = |i: usize, j: usize| {
        if j < inst.right_size {
            -inst.weight(lefts[i], j).unwrap_or(0.0)
        } else {
            0.0
        }
    };
    let assignment = hungarian::min_cost_assignment(rows, cols, cost);
    let edges = assignment
        .into_iter()
        .enumerate()
        .filter(|&(_, j)| j < inst.right_size)
        .filter_map(|(i, j)| {
            inst.weight(lefts[i], j)
                .filter(|&w| w > 0.0)
                .map(|w| (lefts[i], j, w))
        })
        .collect();
    Matching::from_edges(edges)
}

/// Complete bipartite graph with i.i.d. uniform weights in `(0, 1]`, all
/// distinct.
pub fn random_complete_bipartite<R: Rng + ?Sized>(
    left: usize,
    right: usize,
    rng: &mut R,
) -> BipartiteInstance {
    let weights = crate::matroid::distinct_weights(left * right, rng);
    let edges = (0..left)
        .flat_map(|l| (0..right).map(move |r| (l, r)))
        .zip(weights)
        .map(|((l, r), w)| (l, r, w))
        .collect();
    BipartiteInstance::new(left, right, edges).expect("valid complete bipartite graph")
}

/// Each pair is an edge with probability `density`; weights uniform in
/// `(0, 1]`.
pub fn random_bipartite<R: Rng + ?Sized>(
    left: usize,
    right: usize,
    density: f64,
    rng: &mut R,
) -> BipartiteInstance {
    let mut edges = Vec::new();
    for l in 0..left {
        for r in 0..right {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                edges.push((l, r, 1.0 - rng.gen::<f64>()));
            }
        }
    }
    BipartiteInstance::new(left, right, edges).expect("valid bipartite graph")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Exhaustive search over all matchings.
    pub(crate) fn brute_force_max(inst: &BipartiteInstance) -> f64 {
        fn go(inst: &BipartiteInstance, l: usize, used: &mut Vec<bool>) -> f64 {
            if l == inst.left_size() {
                return 0.0;
            }
            let mut best = go(inst, l + 1, used);
            for r in 0..inst.right_size() {
                if let (false, Some(w)) = (used[r], inst.weight(l, r)) {
                    used[r] = true;
                    best = best.max(w + go(inst, l + 1, used));
                    used[r] = false;
                }
            }
            best
        }
        go(inst, 0, &mut vec![false; inst.right_size()])
    }

    #[test]
    fn single_edge() {
        let inst = BipartiteInstance::new(1, 1, vec![(0, 0, 5.0)]).unwrap();
        let m = max_weight_matching(&inst);
        assert_eq!(m.edges, vec![(0, 0, 5.0)]);
        assert_eq!(m.weight, 5.0);
    }

    #[test]
    fn two_by_two() {
        let inst = BipartiteInstance::new(
            2,
            2,
            vec![(0, 0, 3.0), (0, 1, 1.0), (1, 0, 2.0), (1, 1, 4.0)],
        )
        .unwrap();
        let m = max_weight_matching(&inst);
        assert_eq!(m.edges, vec![(0, 0, 3.0), (1, 1, 4.0)]);
        assert_eq!(m.weight, 7.0);
        assert_eq!(brute_force_max(&inst), 7.0);
    }

    #[test]
    fn empty_edge_set() {
        let inst = BipartiteInstance::new(3, 2, vec![]).unwrap();
        let m = max_weight_matching(&inst);
        assert!(m.is_empty());
        assert_eq!(m.weight, 0.0);
    }

    #[test]
    fn zero_weight_edges_not_forced() {
        let inst = BipartiteInstance::new(2, 1, vec![(0, 0, 0.0), (1, 0, 0.0)]).unwrap();
        assert!(max_weight_matching(&inst).is_empty());
    }

    #[test]
    fn more_left_than_right() {
        let inst =
            BipartiteInstance::new(3, 1, vec![(0, 0, 1.0), (1, 0, 3.0), (2, 0, 2.0)]).unwrap();
        assert_eq!(max_weight_matching(&inst).edges, vec![(1, 0, 3.0)]);
    }

    #[test]
    fn invalid_instances_rejected() {
        assert!(BipartiteInstance::new(1, 1, vec![(0, 0, 1.0), (0, 0, 2.0)]).is_err());
        assert!(BipartiteInstance::new(1, 1, vec![(0, 0, -1.0)]).is_err());
        assert!(BipartiteInstance::new(1, 1, vec![(1, 0, 1.0)]).is_err());
    }

    #[test]
    fn induced_subgraph() {
        let inst = BipartiteInstance::new(
            2,
            2,
            vec![(0, 0, 3.0), (0, 1, 1.0), (1, 0, 2.0), (1, 1, 4.0)],
        )
        .unwrap();
        let m = max_weight_matching_on(&inst, &[1]);
        assert_eq!(m.edges, vec![(1, 1, 4.0)]);
    }
}
