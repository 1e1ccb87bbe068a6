//! Exhaustive enumeration of arrival orders for tiny instances.
//!
//! The `k` arrivals of an item are indistinguishable, so the state space is
//! the set of multiset permutations, `(kn)! / (k!)^n` orders, each equally
//! likely. Ranks stay fixed at the identity; by symmetry this loses nothing.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::arrival::ArrivalSequence;
use crate::error::{invalid, Error, Result};
use crate::secretary::{Policy, RankedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_orders: u64,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        Self {
            max_orders: 10_000_000,
        }
    }
}

/// `(kn)! / (k!)^n`.
pub fn distinguishable_orders(n: usize, k: usize) -> BigUint {
    let fact = |m: usize| (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i));
    let kf = fact(k);
    let mut denom = BigUint::one();
    for _ in 0..n {
        denom *= &kf;
    }
    fact(k * n) / denom
}

fn check_budget(n: usize, k: usize, budget: EnumerationBudget) -> Result<u64> {
    if n == 0 || k == 0 {
        return invalid("n and k must be at least 1");
    }
    let required = distinguishable_orders(n, k);
    match required.to_u64() {
        Some(c) if c <= budget.max_orders => Ok(c),
        _ => Err(Error::BudgetExceeded {
            required,
            budget: budget.max_orders,
        }),
    }
}

/// Rearranges `v` into the next lexicographic permutation; false when `v` was
/// the last one. Repeated values are handled, so this walks multiset
/// permutations without duplicates.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Visits every distinguishable order, grouped by first item so groups can run
/// in parallel. `visit` returns one win flag per policy; totals are summed.
fn enumerate<F>(n: usize, k: usize, width: usize, visit: F) -> (Vec<u64>, u64)
where
    F: Fn(&[usize]) -> Vec<bool> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<usize> = (0..n)
                .flat_map(|i| std::iter::repeat_n(i, if i == first { k - 1 } else { k }))
                .collect();
            let mut order = Vec::with_capacity(n * k);
            let mut wins = vec![0u64; width];
            let mut total = 0u64;
            loop {
                order.clear();
                order.push(first);
                order.extend_from_slice(&rest);
                for (w, won) in wins.iter_mut().zip(visit(&order)) {
                    *w += won as u64;
                }
                total += 1;
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            (wins, total)
        })
        .reduce(
            || (vec![0; width], 0),
            |(mut a, ta), (b, tb)| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                (a, ta + tb)
            },
        )
}

fn check_policy(policy: &Policy, k: usize) -> Result<()> {
    match policy {
        Policy::Time { .. } => invalid("the continuous-time policy has no finite enumeration"),
        Policy::Threshold { .. } if k != 2 => invalid("threshold policies need k = 2"),
        _ => Ok(()),
    }
}

fn run_all(
    n: usize,
    k: usize,
    policies: &[Policy],
    inst: &RankedInstance,
    budget: EnumerationBudget,
) -> Result<Vec<BigRational>> {
    if inst.n() != n {
        return invalid("instance size does not match n");
    }
    for p in policies {
        check_policy(p, k)?;
    }
    let expected = check_budget(n, k, budget)?;
    let (wins, total) = enumerate(n, k, policies.len(), |order| {
        let seq = ArrivalSequence::from_items(n, k, order).expect("enumerated order is valid");
        policies
            .iter()
            .map(|p| p.run(&seq, inst).expect("policy validated").won)
            .collect()
    });
    debug_assert_eq!(total, expected);
    Ok(wins
        .into_iter()
        .map(|w| BigRational::new(BigInt::from(w), BigInt::from(total)))
        .collect())
}

/// Exact win probability of `policy` over all arrival orders.
pub fn enumerate_win_prob(
    n: usize,
    k: usize,
    policy: Policy,
    budget: EnumerationBudget,
) -> Result<BigRational> {
    enumerate_win_prob_ranked(n, k, policy, &RankedInstance::identity(n), budget)
}

/// As [`enumerate_win_prob`] with an explicit rank assignment.
pub fn enumerate_win_prob_ranked(
    n: usize,
    k: usize,
    policy: Policy,
    inst: &RankedInstance,
    budget: EnumerationBudget,
) -> Result<BigRational> {
    Ok(run_all(n, k, &[policy], inst, budget)?.remove(0))
}

/// Policy families with one integer parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyFamily {
    /// Threshold policy, parameter `f_value` in `0..=n`.
    Threshold,
    /// The no-waiting policy alone, reported at parameter 0.
    NoWait,
}

/// Exact win probability for every parameter of `family`, from one pass over
/// the orders.
pub fn enumerate_policy_table(
    n: usize,
    k: usize,
    family: PolicyFamily,
    budget: EnumerationBudget,
) -> Result<Vec<(usize, BigRational)>> {
    let policies: Vec<Policy> = match family {
        PolicyFamily::Threshold => (0..=n)
            .map(|f_value| Policy::Threshold { f_value })
            .collect(),
        PolicyFamily::NoWait => vec![Policy::NoWait],
    };
    let probs = run_all(n, k, &policies, &RankedInstance::identity(n), budget)?;
    Ok(probs.into_iter().enumerate().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::secretary::analytic::ratio;

    #[test]
    fn order_counts() {
        assert_eq!(distinguishable_orders(3, 2), BigUint::from(90u32));
        assert_eq!(distinguishable_orders(2, 3), BigUint::from(20u32));
        assert_eq!(distinguishable_orders(3, 3), BigUint::from(1680u32));
    }

    #[test]
    fn next_permutation_visits_each_multiset_order_once() {
        let mut v = vec![0, 0, 1, 1];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn no_wait_small_values() {
        let b = EnumerationBudget::default();
        assert_eq!(
            enumerate_win_prob(1, 2, Policy::NoWait, b).unwrap(),
            ratio(1, 1)
        );
        assert_eq!(
            enumerate_win_prob(2, 2, Policy::NoWait, b).unwrap(),
            ratio(5, 6)
        );
        assert_eq!(
            enumerate_win_prob(3, 2, Policy::NoWait, b).unwrap(),
            ratio(7, 9)
        );
    }

    #[test]
    fn threshold_table_single_item() {
        let t = enumerate_policy_table(1, 2, PolicyFamily::Threshold, EnumerationBudget::default())
            .unwrap();
        assert_eq!(t, vec![(0, ratio(1, 1)), (1, ratio(0, 1))]);
    }

    #[test]
    fn budget_error_names_required_count() {
        let err = enumerate_win_prob(4, 2, Policy::NoWait, EnumerationBudget { max_orders: 100 })
            .unwrap_err();
        match err {
            Error::BudgetExceeded { required, budget } => {
                assert_eq!(required, BigUint::from(2520u32));
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(format!(
            "{}",
            enumerate_win_prob(4, 2, Policy::NoWait, EnumerationBudget { max_orders: 1 })
                .unwrap_err()
        )
        .contains("2520"));
    }

    #[test]
    fn unsupported_policies_rejected() {
        let b = EnumerationBudget::default();
        assert!(enumerate_win_prob(2, 2, Policy::Time { mu: 0.3 }, b).is_err());
        assert!(enumerate_win_prob(2, 3, Policy::Threshold { f_value: 0 }, b).is_err());
    }

    #[test]
    fn relabeling_invariance() {
        let b = EnumerationBudget::default();
        let base = enumerate_win_prob(3, 2, Policy::Threshold { f_value: 1 }, b).unwrap();
        for ranks in [vec![2, 3, 1], vec![3, 1, 2], vec![1, 3, 2]] {
            let inst = RankedInstance::new(ranks).unwrap();
            assert_eq!(
                enumerate_win_prob_ranked(3, 2, Policy::Threshold { f_value: 1 }, &inst, b)
                    .unwrap(),
                base
            );
        }
    }
}
