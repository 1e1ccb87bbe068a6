use super::WeightedMatroidInstance;

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyResult {
    /// Chosen elements in the order greedy picked them (heaviest first).
    pub basis: Vec<usize>,
    pub weight: f64,
}

/// Maximum-weight basis of the whole matroid.
pub fn greedy_basis(instance: &WeightedMatroidInstance) -> GreedyResult {
    let all: Vec<usize> = (0..instance.ground_size()).collect();
    greedy_on(instance, &all)
}

/// Maximum-weight basis of the restriction to `elements`: scan in decreasing
/// weight and keep whatever preserves independence.
pub fn greedy_on(instance: &WeightedMatroidInstance, elements: &[usize]) -> GreedyResult {
    let mut state = instance.independence_state();
    let basis: Vec<usize> = instance
        .by_weight_desc(elements)
        .into_iter()
        .filter(|&e| state.try_add(e))
        .collect();
    let weight = instance.total_weight(&basis);
    GreedyResult { basis, weight }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::union_find::UnionFind;
    use crate::matroid::{random_complete_graphic, MatroidKind};

    #[test]
    fn uniform_takes_heaviest() {
        let inst = WeightedMatroidInstance::new(
            MatroidKind::Uniform { rank: 2 },
            vec![0.5, 0.9, 0.1, 0.7],
        )
        .unwrap();
        let g = greedy_basis(&inst);
        assert_eq!(g.basis, vec![1, 3]);
        assert!((g.weight - 1.6).abs() < 1e-12);
    }

    #[test]
    fn triangle_keeps_two_heaviest() {
        let inst = WeightedMatroidInstance::new(
            MatroidKind::Graphic {
                vertices: 3,
                edges: vec![(0, 1), (1, 2), (0, 2)],
            },
            vec![3.0, 2.0, 1.0],
        )
        .unwrap();
        let g = greedy_basis(&inst);
        assert_eq!(g.basis, vec![0, 1]);
        assert_eq!(g.weight, 5.0);
    }

    #[test]
    fn k4_matches_spanning_tree_enumeration() {
        let mut rng = crate::rng::seeded(17);
        for _ in 0..50 {
            let inst = random_complete_graphic(4, &mut rng);
            let MatroidKind::Graphic { edges, .. } = inst.kind() else {
                unreachable!()
            };
            let mut trees = 0;
            let mut best = 0.0f64;
            for mask in 0u32..64 {
                if mask.count_ones() != 3 {
                    continue;
                }
                let mut uf = UnionFind::new(4);
                let chosen: Vec<usize> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
                if chosen.iter().all(|&e| uf.union(edges[e].0, edges[e].1)) {
                    trees += 1;
                    best = best.max(inst.total_weight(&chosen));
                }
            }
            assert_eq!(trees, 16);
            assert!((greedy_basis(&inst).weight - best).abs() < 1e-12);
        }
    }

    #[test]
    fn restriction_only_uses_given_elements() {
        let inst = WeightedMatroidInstance::new(
            MatroidKind::Uniform { rank: 2 },
            vec![0.5, 0.9, 0.1, 0.7],
        )
        .unwrap();
        let g = greedy_on(&inst, &[0, 2]);
        assert_eq!(g.basis, vec![0, 2]);
        assert!(greedy_on(&inst, &[]).basis.is_empty());
    }
}
