use num_bigint::BigUint;
use proptest::prelude::*;

use schurtrace::partitions::{dim_sym, enumerate_partitions, factorial, hook_lengths};
use schurtrace::Partition;

/// Partitions of `n` with all parts at most `max`, by the usual recurrence.
fn count_partitions(n: u32, max: u32, memo: &mut Vec<Vec<Option<u64>>>) -> u64 {
    if n == 0 {
        return 1;
    }
    if max == 0 {
        return 0;
    }
    if let Some(v) = memo[n as usize][max as usize] {
        return v;
    }
    let without = count_partitions(n, max - 1, memo);
    let with = if max <= n { count_partitions(n - max, max, memo) } else { 0 };
    memo[n as usize][max as usize] = Some(without + with);
    without + with
}

/// Standard Young tableaux counted by removing corners one at a time.
fn count_syt(rows: &mut Vec<u32>) -> u64 {
    if rows.iter().all(|&r| r == 0) {
        return 1;
    }
    let mut total = 0;
    for i in 0..rows.len() {
        let below = rows.get(i + 1).copied().unwrap_or(0);
        if rows[i] > below {
            rows[i] -= 1;
            total += count_syt(rows);
            rows[i] += 1;
        }
    }
    total
}

#[test]
fn sum_of_squared_dimensions_is_factorial() {
    for n in 1..=14 {
        let sum: BigUint = enumerate_partitions(n, None)
            .unwrap()
            .iter()
            .map(|l| {
                let f = dim_sym(l);
                &f * &f
            })
            .sum();
        assert_eq!(sum, factorial(n), "n = {n}");
    }
}

#[test]
fn partition_counts_match_recurrence() {
    let mut memo = vec![vec![None; 41]; 41];
    for n in 1..=40u32 {
        let listed = enumerate_partitions(n, None).unwrap().len() as u64;
        assert_eq!(listed, count_partitions(n, n, &mut memo), "n = {n}");
    }
    assert_eq!(enumerate_partitions(40, None).unwrap().len(), 37338);
}

#[test]
fn dimensions_match_tableau_enumeration() {
    for n in 1..=8 {
        for lambda in enumerate_partitions(n, None).unwrap() {
            let mut rows = lambda.rows().to_vec();
            assert_eq!(dim_sym(&lambda), BigUint::from(count_syt(&mut rows)), "{lambda}");
        }
    }
}

#[test]
fn enumeration_is_descending_lexicographic_and_distinct() {
    for n in 1..=20 {
        let all = enumerate_partitions(n, None).unwrap();
        assert!(all.windows(2).all(|w| w[0].rows() > w[1].rows()), "n = {n}");
        assert!(all.iter().all(|l| l.n() == n));
    }
}

#[test]
fn row_limit_filters_enumeration() {
    for n in 1..=15 {
        for d in 1..=5 {
            let limited = enumerate_partitions(n, Some(d)).unwrap();
            let filtered: Vec<_> = enumerate_partitions(n, None)
                .unwrap()
                .into_iter()
                .filter(|l| l.len() <= d)
                .collect();
            assert_eq!(limited, filtered);
        }
    }
}

proptest! {
    #[test]
    fn padded_rows_normalize(mut rows in prop::collection::vec(0u32..12, 0..8)) {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        if rows.iter().all(|&r| r == 0) {
            prop_assert!(Partition::from_padded(rows).is_err());
            return Ok(());
        }
        let lambda = Partition::from_padded(rows.clone()).unwrap();
        prop_assert!(lambda.rows().iter().all(|&r| r > 0));
        prop_assert_eq!(lambda.n(), rows.iter().sum::<u32>());
        prop_assert!(lambda.rows().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn hooks_cover_cells_and_conjugate_symmetry(mut rows in prop::collection::vec(1u32..8, 1..6)) {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let lambda = Partition::new(rows).unwrap();
        let hooks = hook_lengths(&lambda);
        prop_assert_eq!(hooks.len() as u32, lambda.n());
        prop_assert!(hooks.iter().all(|&h| h >= 1));
        let conj: Vec<u32> = (0..lambda.row(1)).map(|j| lambda.column_len(j)).collect();
        let conj = Partition::new(conj).unwrap();
        prop_assert_eq!(dim_sym(&lambda), dim_sym(&conj));
    }

    #[test]
    fn unsorted_rows_are_rejected(a in 1u32..10, b in 1u32..10) {
        prop_assume!(a < b);
        prop_assert!(Partition::new(vec![a, b]).is_err());
    }
}
