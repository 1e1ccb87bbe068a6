//! Exhaustive independence table for small ground sets.
//!
//! The table is filled by brute-force definitions (component counting for
//! forests, backtracking search for matchings) that share no code with the
//! incremental oracles, so it can serve as their reference.

use std::collections::VecDeque;

use super::{MatroidKind, WeightedMatroidInstance};
use crate::error::{invalid, Result};

pub const MAX_TABLE_GROUND: usize = 16;

#[derive(Debug, Clone)]
pub struct IndependenceTable {
    ground: usize,
    independent: Vec<bool>,
}

fn members(mask: u32, ground: usize) -> Vec<usize> {
    (0..ground).filter(|i| mask & (1 << i) != 0).collect()
}

fn forest_by_components(vertices: usize, edges: &[(usize, usize)], chosen: &[usize]) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    let mut touched = vec![false; vertices];
    for &e in chosen {
        let (u, v) = edges[e];
        adj[u].push(v);
        adj[v].push(u);
        touched[u] = true;
        touched[v] = true;
    }
    let mut seen = vec![false; vertices];
    let mut components = 0;
    for s in (0..vertices).filter(|&s| touched[s]) {
        if seen[s] {
            continue;
        }
        components += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let vertex_count = touched.iter().filter(|&&t| t).count();
    chosen.len() + components == vertex_count
}

fn matchable_by_search(adjacency: &[Vec<usize>], chosen: &[usize], used: &mut Vec<bool>) -> bool {
    let Some((&first, rest)) = chosen.split_first() else {
        return true;
    };
    for &r in &adjacency[first] {
        if !used[r] {
            used[r] = true;
            let ok = matchable_by_search(adjacency, rest, used);
            used[r] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

impl IndependenceTable {
    pub fn build(instance: &WeightedMatroidInstance) -> Result<Self> {
        let ground = instance.ground_size();
        if ground > MAX_TABLE_GROUND {
            return invalid(format!(
                "exhaustive table limited to {MAX_TABLE_GROUND} elements, got {ground}"
            ));
        }
        let independent = (0u32..1 << ground)
            .map(|mask| {
                let chosen = members(mask, ground);
                match instance.kind() {
                    MatroidKind::Uniform { rank } => chosen.len() <= *rank,
                    MatroidKind::Graphic { vertices, edges } => {
                        forest_by_components(*vertices, edges, &chosen)
                    }
                    MatroidKind::Transversal {
                        right_size,
                        adjacency,
                    } => matchable_by_search(adjacency, &chosen, &mut vec![false; *right_size]),
                }
            })
            .collect();
        Ok(Self {
            ground,
            independent,
        })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn is_independent_mask(&self, mask: u32) -> bool {
        self.independent[mask as usize]
    }

    /// Checks the empty-set, hereditary and exchange axioms, returning a
    /// description of the first violation.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        if !self.independent[0] {
            return Err("empty set is dependent".into());
        }
        let n = self.ground;
        for a in 0u32..1 << n {
            if !self.independent[a as usize] {
                continue;
            }
            for i in 0..n {
                if a & (1 << i) != 0 && !self.independent[(a & !(1 << i)) as usize] {
                    return Err(format!("hereditary property fails: {a:#b} minus {i}"));
                }
            }
        }
        for a in 0u32..1 << n {
            if !self.independent[a as usize] {
                continue;
            }
            for b in 0u32..1 << n {
                if !self.independent[b as usize] || b.count_ones() <= a.count_ones() {
                    continue;
                }
                let extendable = (0..n)
                    .any(|x| b & !a & (1 << x) != 0 && self.independent[(a | 1 << x) as usize]);
                if !extendable {
                    return Err(format!("exchange property fails for A={a:#b}, B={b:#b}"));
                }
            }
        }
        Ok(())
    }

    /// Maximal independent sets.
    pub fn bases(&self) -> Vec<u32> {
        let n = self.ground;
        (0u32..1 << n)
            .filter(|&m| {
                self.independent[m as usize]
                    && (0..n).all(|x| m & (1 << x) != 0 || !self.independent[(m | 1 << x) as usize])
            })
            .collect()
    }

    /// Brute-force maximum basis weight.
    pub fn max_basis_weight(&self, weights: &[f64]) -> f64 {
        self.bases()
            .into_iter()
            .map(|m| {
                members(m, self.ground)
                    .iter()
                    .map(|&e| weights[e])
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}
