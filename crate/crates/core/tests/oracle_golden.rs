//! Exact enumeration against the committed golden files and the closed forms.

use std::path::PathBuf;

use num_rational::BigRational;
use stopping_lab::oracle::{
    distinguishable_orders, enumerate_policy_table, enumerate_win_prob, enumerate_win_prob_ranked,
    EnumerationBudget, PolicyFamily,
};
use stopping_lab::secretary::analytic::{k3_win_prob_exact, no_wait_win_prob, parse_ratio, ratio};
use stopping_lab::secretary::{exact_threshold_table, Policy, RankedInstance};
use stopping_lab::Error;

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

#[test]
fn no_wait_golden_files() {
    for (n, k) in [
        (1, 1),
        (3, 1),
        (4, 1),
        (1, 2),
        (2, 2),
        (3, 2),
        (4, 2),
        (2, 3),
        (3, 3),
        (4, 3),
    ] {
        let expected =
            parse_ratio(golden(&format!("oracle_n{n}_k{k}_no-wait.txt")).trim()).unwrap();
        let got = enumerate_win_prob(n, k, Policy::NoWait, budget()).unwrap();
        assert_eq!(got, expected, "n={n} k={k}");
    }
}

#[test]
fn threshold_golden_tables() {
    for n in 1..=4usize {
        let expected: Vec<(usize, BigRational)> = golden(&format!("oracle_n{n}_k2_threshold.txt"))
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let (f, p) = l.split_once(' ').unwrap();
                (f.parse().unwrap(), parse_ratio(p).unwrap())
            })
            .collect();
        let table = exact_threshold_table(n, budget()).unwrap();
        assert_eq!(table.rows, expected, "n={n}");
        let best = expected.iter().map(|r| &r.1).max().unwrap();
        assert_eq!(&table.rows[table.best_f].1, best);
    }
}

#[test]
fn closed_form_matches_enumeration_for_two_returns() {
    for n in 1..=4usize {
        assert_eq!(
            no_wait_win_prob(n as u64).unwrap(),
            enumerate_win_prob(n, 2, Policy::NoWait, budget()).unwrap()
        );
    }
}

#[test]
fn threshold_zero_is_no_wait() {
    for n in 1..=4usize {
        let t = exact_threshold_table(n, budget()).unwrap();
        assert_eq!(t.rows[0].1, no_wait_win_prob(n as u64).unwrap());
    }
}

#[test]
fn policy_table_examples() {
    assert_eq!(
        enumerate_policy_table(1, 2, PolicyFamily::Threshold, budget()).unwrap(),
        vec![(0, ratio(1, 1)), (1, ratio(0, 1))]
    );
    assert_eq!(
        enumerate_policy_table(2, 2, PolicyFamily::Threshold, budget()).unwrap()[0].1,
        ratio(5, 6)
    );
    let singleton = enumerate_policy_table(2, 3, PolicyFamily::NoWait, budget()).unwrap();
    assert_eq!(singleton, vec![(0, k3_win_prob_exact(2).unwrap())]);
}

#[test]
fn win_probability_invariant_under_relabeling() {
    let perms: [&[u32]; 4] = [&[1, 2, 3], &[3, 1, 2], &[2, 3, 1], &[3, 2, 1]];
    for policy in [
        Policy::NoWait,
        Policy::Threshold { f_value: 1 },
        Policy::Threshold { f_value: 2 },
    ] {
        let base = enumerate_win_prob(3, 2, policy, budget()).unwrap();
        for ranks in perms {
            let inst = RankedInstance::new(ranks.to_vec()).unwrap();
            assert_eq!(
                enumerate_win_prob_ranked(3, 2, policy, &inst, budget()).unwrap(),
                base,
                "{policy:?} {ranks:?}"
            );
        }
    }
    let inst = RankedInstance::new(vec![2, 1]).unwrap();
    assert_eq!(
        enumerate_win_prob_ranked(2, 3, Policy::NoWait, &inst, budget()).unwrap(),
        enumerate_win_prob(2, 3, Policy::NoWait, budget()).unwrap()
    );
}

#[test]
fn budget_error_names_the_order_count() {
    let err = enumerate_win_prob(5, 3, Policy::NoWait, EnumerationBudget { max_orders: 1000 })
        .unwrap_err();
    match &err {
        Error::BudgetExceeded { required, budget } => {
            assert_eq!(*required, distinguishable_orders(5, 3));
            assert_eq!(*budget, 1000);
        }
        other => panic!("unexpected error {other:?}"),
    }
    assert!(err
        .to_string()
        .contains(&distinguishable_orders(5, 3).to_string()));
}

#[test]
fn unsupported_policies_rejected() {
    assert!(enumerate_win_prob(2, 2, Policy::Time { mu: 0.3 }, budget()).is_err());
    assert!(enumerate_win_prob(2, 3, Policy::Threshold { f_value: 1 }, budget()).is_err());
}
