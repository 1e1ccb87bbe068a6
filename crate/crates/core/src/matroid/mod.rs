//! Weighted matroids with native independence oracles, offline greedy, and
//! the returning matroid secretary algorithm.

pub mod greedy;
pub mod io;
pub mod secretary;
pub mod table;
pub mod union_find;

use rand::Rng;

use crate::error::{invalid, Result};
use union_find::UnionFind;

pub use greedy::{greedy_basis, greedy_on, GreedyResult};
pub use secretary::{
    adversarial_instance, default_adversarial_eps, greedy_dominance_check, run_continued_greedy,
    run_matroid_secretary, ContinuedGreedyOutcome, MatroidSelection, ADVERSARIAL_HEAVY_EDGE,
};
pub use table::IndependenceTable;

#[derive(Debug, Clone, PartialEq)]
pub enum MatroidKind {
    /// Every set of at most `rank` elements is independent.
    Uniform { rank: usize },
    /// Elements are the edges; independent sets are forests.
    Graphic {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    /// Elements are left vertices; independent sets can be matched into the
    /// right side. `adjacency[e]` lists the right neighbours of element `e`.
    Transversal {
        right_size: usize,
        adjacency: Vec<Vec<usize>>,
    },
}

impl MatroidKind {
    pub fn name(&self) -> &'static str {
        match self {
            MatroidKind::Uniform { .. } => "uniform",
            MatroidKind::Graphic { .. } => "graphic",
            MatroidKind::Transversal { .. } => "transversal",
        }
    }
}

/// A matroid together with distinct positive element weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatroidInstance {
    kind: MatroidKind,
    weights: Vec<f64>,
}

impl WeightedMatroidInstance {
    pub fn new(kind: MatroidKind, weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return invalid(format!("weights must be positive and finite, got {w}"));
        }
        let mut sorted = weights.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return invalid("weights must be pairwise distinct");
        }
        match &kind {
            MatroidKind::Uniform { .. } => {}
            MatroidKind::Graphic { vertices, edges } => {
                if edges.len() != n {
                    return invalid(format!(
                        "graphic matroid has {} edges but {n} weights",
                        edges.len()
                    ));
                }
                if edges.iter().any(|&(u, v)| u >= *vertices || v >= *vertices) {
                    return invalid("edge endpoint out of range");
                }
            }
            MatroidKind::Transversal {
                right_size,
                adjacency,
            } => {
                if adjacency.len() != n {
                    return invalid(format!(
                        "transversal matroid has {} elements but {n} weights",
                        adjacency.len()
                    ));
                }
                if adjacency.iter().flatten().any(|&r| r >= *right_size) {
                    return invalid("right vertex out of range");
                }
            }
        }
        Ok(Self { kind, weights })
    }

    pub fn ground_size(&self) -> usize {
        self.weights.len()
    }

    pub fn kind(&self) -> &MatroidKind {
        &self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn total_weight(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.weights[e]).sum()
    }

    /// Independence test for an arbitrary subset of the ground set.
    pub fn is_independent(&self, subset: &[usize]) -> Result<bool> {
        let mut seen = vec![false; self.ground_size()];
        for &e in subset {
            if e >= self.ground_size() {
                return invalid(format!(
                    "element {e} outside ground set of size {}",
                    self.ground_size()
                ));
            }
            if std::mem::replace(&mut seen[e], true) {
                return invalid(format!("element {e} repeated in subset"));
            }
        }
        let mut state = self.independence_state();
        Ok(subset.iter().all(|&e| state.try_add(e)))
    }

    /// Incremental independence tracker starting from the empty set.
    pub fn independence_state(&self) -> IndependenceState<'_> {
        let inner = match &self.kind {
            MatroidKind::Uniform { rank } => StateInner::Uniform {
                rank: *rank,
                count: 0,
            },
            MatroidKind::Graphic { vertices, edges } => StateInner::Graphic {
                edges,
                forest: UnionFind::new(*vertices),
            },
            MatroidKind::Transversal {
                right_size,
                adjacency,
            } => StateInner::Transversal {
                adjacency,
                owner: vec![None; *right_size],
            },
        };
        IndependenceState { inner }
    }

    /// Elements sorted by strictly decreasing weight.
    pub fn by_weight_desc(&self, elements: &[usize]) -> Vec<usize> {
        let mut v = elements.to_vec();
        v.sort_by(|&a, &b| self.weights[b].total_cmp(&self.weights[a]));
        v
    }
}

/// Tracks one growing independent set.
pub struct IndependenceState<'a> {
    inner: StateInner<'a>,
}

enum StateInner<'a> {
    Uniform {
        rank: usize,
        count: usize,
    },
    Graphic {
        edges: &'a [(usize, usize)],
        forest: UnionFind,
    },
    Transversal {
        adjacency: &'a [Vec<usize>],
        owner: Vec<Option<usize>>,
    },
}

impl IndependenceState<'_> {
    /// Adds `e` if the set stays independent; reports whether it was added.
    pub fn try_add(&mut self, e: usize) -> bool {
        match &mut self.inner {
            StateInner::Uniform { rank, count } => {
                if *count < *rank {
                    *count += 1;
                    true
                } else {
                    false
                }
            }
            StateInner::Graphic { edges, forest } => {
                let (u, v) = edges[e];
                forest.union(u, v)
            }
            StateInner::Transversal { adjacency, owner } => {
                let mut visited = vec![false; owner.len()];
                augment(e, adjacency, owner, &mut visited)
            }
        }
    }
}

/// Kuhn-style augmenting path from left vertex `left`.
fn augment(
    left: usize,
    adjacency: &[Vec<usize>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in &adjacency[left] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if owner[r].is_none_or(|other| augment(other, adjacency, owner, visited)) {
            owner[r] = Some(left);
            return true;
        }
    }
    false
}

/// `n` distinct weights in `(0, 1]`, redrawn on collision.
pub fn distinct_weights<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut seen = std::collections::HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w = 1.0 - rng.gen::<f64>();
        if seen.insert(w.to_bits()) {
            out.push(w);
        }
    }
    out
}

pub fn random_uniform<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    rng: &mut R,
) -> WeightedMatroidInstance {
    WeightedMatroidInstance::new(MatroidKind::Uniform { rank }, distinct_weights(n, rng))
        .expect("valid uniform matroid")
}

/// Graphic matroid of the complete graph on `vertices` vertices.
pub fn random_complete_graphic<R: Rng + ?Sized>(
    vertices: usize,
    rng: &mut R,
) -> WeightedMatroidInstance {
    let edges: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect();
    let weights = distinct_weights(edges.len(), rng);
    WeightedMatroidInstance::new(MatroidKind::Graphic { vertices, edges }, weights)
        .expect("valid graphic matroid")
}

/// Graphic matroid of a random multigraph-free graph with `edges` edges
/// (capped at the number of vertex pairs).
pub fn random_graphic<R: Rng + ?Sized>(
    vertices: usize,
    edges: usize,
    rng: &mut R,
) -> WeightedMatroidInstance {
    use rand::seq::SliceRandom;
    let mut pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(edges);
    let weights = distinct_weights(pairs.len(), rng);
    WeightedMatroidInstance::new(
        MatroidKind::Graphic {
            vertices,
            edges: pairs,
        },
        weights,
    )
    .expect("valid graphic matroid")
}

/// Transversal matroid where each left-right pair is an edge with
/// probability `density`.
pub fn random_transversal<R: Rng + ?Sized>(
    left: usize,
    right: usize,
    density: f64,
    rng: &mut R,
) -> WeightedMatroidInstance {
    let adjacency: Vec<Vec<usize>> = (0..left)
        .map(|_| {
            (0..right)
                .filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
                .collect()
        })
        .collect();
    let weights = distinct_weights(left, rng);
    WeightedMatroidInstance::new(
        MatroidKind::Transversal {
            right_size: right,
            adjacency,
        },
        weights,
    )
    .expect("valid transversal matroid")
}
