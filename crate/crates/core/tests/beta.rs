mod common;

use common::brute_force_matches;
use gu_core::beta::{
    beta_encode, beta_eval, enumerate_matches, fit_characteristic_beta, next_value_distribution,
    superpose, BetaPair, TaggedSequence, ValueSequence,
};
use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;

fn small_pairs(pairs: &[BetaPair]) -> Vec<(u64, u64)> {
    pairs.iter().map(|p| p.to_small().unwrap()).collect()
}

#[test]
fn single_zero_prediction_by_hand() {
    // Matching pairs for [0] within 2: (0,1), (2,1), (0,2).
    // Index 1 moduli: 1 + 2c → 3, 3, 5. Predictions: 0, 2, 0.
    let s: ValueSequence = "0".parse().unwrap();
    let d = next_value_distribution(&s, 2).unwrap();
    let expected: Vec<(u64, u64)> = vec![(0, 2), (2, 1)];
    assert_eq!(d.counts.into_iter().collect::<Vec<_>>(), expected);
}

#[test]
fn enumeration_matches_brute_force_on_small_grids() {
    for seq in [
        vec![0],
        vec![1, 0],
        vec![2, 3, 1],
        vec![0, 0, 0, 0],
        vec![5],
    ] {
        let s = ValueSequence::new(seq.clone()).unwrap();
        for bound in [1, 7, 40, 200] {
            assert_eq!(
                small_pairs(&enumerate_matches(&s, bound).unwrap()),
                brute_force_matches(&seq, bound),
                "{seq:?} within {bound}"
            );
        }
    }
}

#[test]
fn characteristic_pair_is_least_match() {
    let s: ValueSequence = "1,2,0".parse().unwrap();
    let all = enumerate_matches(&s, 150).unwrap();
    assert_eq!(fit_characteristic_beta(&s, 150), all.first().cloned());
    let mut sorted = all.clone();
    sorted.sort();
    assert_eq!(sorted, all);
}

#[test]
fn general_merge_is_explored_not_asserted() {
    // Merging shifts indices; the merged sequence is still encodable.
    let a: TaggedSequence = "0:1,3:2".parse().unwrap();
    let b: TaggedSequence = "1:0,2:4".parse().unwrap();
    let merged = superpose(&a, &b).unwrap();
    assert_eq!(merged.values(), vec![1, 0, 4, 2]);
    let s = ValueSequence::new(merged.values()).unwrap();
    let p = beta_encode(&s);
    for (i, v) in s.iter().enumerate() {
        assert_eq!(beta_eval(&p, i as u64), BigUint::from(*v));
    }
}

fn sequence() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..=8, 1..=6)
}

fn tagged(max: usize) -> impl Strategy<Value = Vec<(u64, u64)>> {
    prop::collection::btree_map(0u64..200, 0u64..10, 0..max).prop_map(|m| m.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encode_roundtrips(seq in sequence()) {
        let s = ValueSequence::new(seq.clone()).unwrap();
        let p = beta_encode(&s);
        for (i, v) in seq.iter().enumerate() {
            prop_assert_eq!(beta_eval(&p, i as u64), BigUint::from(*v));
        }
    }

    #[test]
    fn extension_shrinks_the_match_set(seq in prop::collection::vec(0u64..6, 1..4), m in 0u64..6, bound in 1u64..120) {
        let s = ValueSequence::new(seq).unwrap();
        let short = enumerate_matches(&s, bound).unwrap();
        let long = enumerate_matches(&s.extended(m), bound).unwrap();
        prop_assert!(long.iter().all(|p| short.contains(p)));
        if let (Ok(d_long), Ok(d_short)) = (
            next_value_distribution(&s.extended(m), bound),
            next_value_distribution(&s, bound),
        ) {
            prop_assert!(d_long.total <= d_short.total);
        }
    }

    #[test]
    fn frequencies_sum_to_one(seq in prop::collection::vec(0u64..4, 1..3), bound in 1u64..80) {
        let s = ValueSequence::new(seq).unwrap();
        if let Ok(d) = next_value_distribution(&s, bound) {
            prop_assert_eq!(d.counts.values().sum::<u64>(), d.total);
            let sum: Ratio<u64> = d.frequencies().map(|(_, f)| f).sum();
            prop_assert_eq!(sum, Ratio::from_integer(1));
        }
    }

    #[test]
    fn superpose_length_adds(a in tagged(8), b in tagged(8)) {
        // Drop colliding tags from b to keep the inputs disjoint.
        let b: Vec<_> = b.into_iter().filter(|(t, _)| a.iter().all(|(u, _)| u != t)).collect();
        let (a, b) = (TaggedSequence::new(a).unwrap(), TaggedSequence::new(b).unwrap());
        let merged = superpose(&a, &b).unwrap();
        prop_assert_eq!(merged.len(), a.len() + b.len());
        prop_assert!(merged.entries().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert_eq!(superpose(&b, &a).unwrap(), merged);
    }
}
