use std::collections::HashSet;

use nekrasov::partitions::{
    count_decomposition_types, decomposition_count_closed_form, decomposition_types, enumerate_compositions,
    enumerate_tuples, partition_counts, tuple_count, Composition, Partition, PartitionTuple,
};
use num_bigint::BigUint;
use proptest::prelude::*;

// p(0), …, p(20)
const PARTITION_NUMBERS: [u32; 21] = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627];

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..8, 0..7).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn tuple() -> impl Strategy<Value = PartitionTuple> {
    prop::collection::vec(partition(), 1..4).prop_map(PartitionTuple::new)
}

fn choose2(x: u32) -> i64 {
    (x as i64) * (x as i64 - 1) / 2
}

/// Number of r-tuples of total weight n, by summing over weight vectors.
fn tuples_by_weights(r: usize, n: u32) -> u64 {
    if r == 0 {
        return (n == 0) as u64;
    }
    (0..=n)
        .map(|k| Partition::all_of_weight(k).len() as u64 * tuples_by_weights(r - 1, n - k))
        .sum()
}

/// Block assignments `{1..n} → {unused, 1..k}` with the given sizes and
/// decreasing block minima.
fn brute_decompositions(n: u32, sizes: &[u32]) -> u64 {
    let k = sizes.len() as u32;
    let total = (k + 1).pow(n);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let mut size = vec![0u32; k as usize];
        let mut min = vec![u32::MAX; k as usize];
        for x in 0..n {
            let b = c % (k + 1);
            c /= k + 1;
            if b > 0 {
                size[b as usize - 1] += 1;
                min[b as usize - 1] = min[b as usize - 1].min(x);
            }
        }
        if size == sizes && min.windows(2).all(|w| w[0] > w[1]) {
            count += 1;
        }
    }
    count
}

#[test]
fn partition_numbers() {
    let counts = partition_counts(20);
    for (n, &p) in PARTITION_NUMBERS.iter().enumerate() {
        assert_eq!(counts[n], BigUint::from(p), "p({n})");
        if n <= 12 {
            assert_eq!(Partition::all_of_weight(n as u32).len() as u32, p);
        }
    }
}

#[test]
fn partitions_of_weight_are_distinct_and_ordered() {
    for n in 0..=10 {
        let all = Partition::all_of_weight(n);
        assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
        assert!(all.iter().all(|p| p.weight() == n));
    }
}

#[test]
fn tuple_counts_match_enumeration() {
    for r in 1..=4 {
        for n in 0..=6u32 {
            let seen: HashSet<PartitionTuple> = enumerate_tuples(r, n as usize).collect();
            let listed = enumerate_tuples(r, n as usize).count();
            assert_eq!(seen.len(), listed, "duplicates at r={r} n={n}");
            assert!(seen.iter().all(|t| t.rank() == r && t.weight() == n));
            let expected = tuples_by_weights(r, n);
            assert_eq!(listed as u64, expected, "r={r} n={n}");
            assert_eq!(tuple_count(r, n as usize), BigUint::from(expected));
        }
    }
}

#[test]
fn compositions_of_k() {
    for k in 1..=10u32 {
        let all: Vec<Composition> = enumerate_compositions(k).collect();
        assert_eq!(all.len(), 1 << (k - 1));
        let distinct: HashSet<&[u32]> = all.iter().map(|c| c.parts()).collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|c| c.total() == k));
        assert!(all.windows(2).all(|w| w[0].len() <= w[1].len()));
    }
}

#[test]
fn decomposition_counts_against_assignment_enumeration() {
    for n in 1..=6u32 {
        for k in 1..=n {
            for p in enumerate_compositions(k) {
                let brute = brute_decompositions(n, p.parts());
                assert_eq!(count_decomposition_types(n, &p), BigUint::from(brute), "n={n} p={:?}", p.parts());
                assert_eq!(decomposition_count_closed_form(n, &p), BigUint::from(brute), "n={n} p={:?}", p.parts());
                let listed = decomposition_types(n, &p);
                assert_eq!(listed.len() as u64, brute);
                assert!(listed.iter().all(|d| d.is_valid() && d.sizes() == p.parts()));
            }
        }
    }
}

proptest! {
    #[test]
    fn transpose_is_an_involution(p in partition()) {
        let t = p.transpose();
        prop_assert_eq!(t.transpose(), p.clone());
        prop_assert_eq!(t.weight(), p.weight());
        prop_assert_eq!(t.width() as u32, p.parts().first().copied().unwrap_or(0));
    }

    #[test]
    fn arm_and_leg_swap_under_transpose(p in partition(), i in 1usize..10, j in 1usize..10) {
        let t = p.transpose();
        prop_assert_eq!(p.arm(i, j), t.leg(j, i));
        prop_assert_eq!(p.leg(i, j), t.arm(j, i));
        prop_assert_eq!(p.contains(i, j), t.contains(j, i));
        prop_assert_eq!(p.contains(i, j), p.arm(i, j) >= 0);
    }

    #[test]
    fn hooks_inside_the_diagram(p in partition()) {
        let boxes: Vec<(usize, usize)> = p.boxes().collect();
        prop_assert_eq!(boxes.len() as u32, p.weight());
        for &(i, j) in &boxes {
            prop_assert!(p.arm(i, j) >= 0 && p.leg(i, j) >= 0);
        }
        let arms: i64 = boxes.iter().map(|&(i, j)| p.arm(i, j)).sum();
        let legs: i64 = boxes.iter().map(|&(i, j)| p.leg(i, j)).sum();
        prop_assert_eq!(arms, p.parts().iter().map(|&h| choose2(h)).sum::<i64>());
        prop_assert_eq!(legs, p.transpose().parts().iter().map(|&h| choose2(h)).sum::<i64>());
    }

    #[test]
    fn text_round_trip(t in tuple()) {
        for p in t.components() {
            let back: Partition = p.to_string().parse().unwrap();
            prop_assert_eq!(&back, p);
        }
        let back: PartitionTuple = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn tuple_transpose_acts_componentwise(t in tuple()) {
        let tt = t.transpose();
        prop_assert_eq!(tt.weight(), t.weight());
        for (a, b) in t.components().iter().zip(tt.components()) {
            prop_assert_eq!(&a.transpose(), b);
        }
    }
}

#[test]
fn rejects_malformed_literals() {
    assert!("1,2".parse::<Partition>().is_err());
    assert!("3,0".parse::<Partition>().is_err());
    assert!("x".parse::<Partition>().is_err());
    assert!(Partition::new(vec![1, 3]).is_err());
    assert_eq!("[3,1|-]".parse::<PartitionTuple>().unwrap().weight(), 4);
}
