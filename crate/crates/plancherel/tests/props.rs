//! Property-based invariants over randomized inputs: structural facts that
//! must hold for every partition, permutation, and sample set, not just the
//! hand-picked cases in the unit tests.

use num::{BigRational, One, Zero};
use plancherel::combinat::{self, Partition};
use plancherel::rsk::{self, Permutation, ScaledSampleSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1u32..=9, 0..=7).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts).expect("sorted positive parts form a partition")
    })
}

fn arb_permutation() -> impl Strategy<Value = Permutation> {
    (1usize..=40, any::<u64>()).prop_map(|(n, seed)| {
        let mut values: Vec<u32> = (1..=n as u32).collect();
        values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Permutation::new(values).expect("shuffle preserves the 1..=N multiset")
    })
}

proptest! {
    #[test]
    fn transpose_is_an_involution(mu in arb_partition()) {
        let back = combinat::transpose(&combinat::transpose(&mu));
        prop_assert_eq!(back.parts(), mu.parts());
        prop_assert_eq!(combinat::transpose(&mu).size(), mu.size());
    }

    #[test]
    fn dimension_formulas_agree(mu in arb_partition()) {
        prop_assert_eq!(combinat::dim_hook(&mu), combinat::dim_frobenius(&mu));
    }

    #[test]
    fn transpose_preserves_dimension(mu in arb_partition()) {
        prop_assert_eq!(
            combinat::dim_hook(&mu),
            combinat::dim_hook(&combinat::transpose(&mu))
        );
    }

    #[test]
    fn exact_cdf_is_a_distribution_function(k in 1u8..=2, big_n in 0u32..=9) {
        let mut prev = BigRational::zero();
        for n in 0..=big_n {
            let q = combinat::exact_row_cdf(k, n, big_n).unwrap();
            prop_assert!(q >= prev, "CDF must be nondecreasing in n");
            prop_assert!(q <= BigRational::one());
            prev = q;
        }
        prop_assert_eq!(combinat::exact_row_cdf(k, big_n, big_n).unwrap(), BigRational::one());
    }

    #[test]
    fn rsk_shape_first_rows_match_patience_lengths(pi in arb_permutation()) {
        let shape = rsk::rsk_shape(&pi);
        let (l1, l2) = rsk::two_row_lengths(&pi);
        prop_assert_eq!(shape.row(1), l1);
        prop_assert_eq!(shape.row(2), l2);
        prop_assert_eq!(shape.size(), pi.len() as u64);
    }

    #[test]
    fn greene_sums_match_rsk_rows(n in 1usize..=9, seed in any::<u64>()) {
        let mut values: Vec<u32> = (1..=n as u32).collect();
        values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let pi = Permutation::new(values).unwrap();
        let shape = rsk::rsk_shape(&pi);
        prop_assert_eq!(rsk::greene_k_increasing(&pi, 1).unwrap(), shape.row(1));
        prop_assert_eq!(
            rsk::greene_k_increasing(&pi, 2).unwrap(),
            shape.row(1) + shape.row(2)
        );
    }

    #[test]
    fn empirical_cdf_is_monotone_and_bounded(
        samples in prop::collection::vec(-10.0f64..10.0, 1..=60),
        offsets in prop::collection::vec(0.01f64..1.0, 1..=20),
    ) {
        let set = ScaledSampleSet { k: 1, n: 100, seed: 0, samples };
        let mut grid = Vec::with_capacity(offsets.len());
        let mut x = -12.0;
        for dx in offsets {
            x += dx;
            grid.push(x);
        }
        let emp = rsk::empirical_cdf(&set, &grid).unwrap();
        for pair in emp.windows(2) {
            prop_assert!(pair[1] >= pair[0]);
        }
        for v in &emp {
            prop_assert!((0.0..=1.0).contains(v));
        }
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>()) {
        let a = rsk::sample_scaled(1, 60, 12, seed).unwrap();
        let b = rsk::sample_scaled(1, 60, 12, seed).unwrap();
        prop_assert_eq!(a.samples, b.samples);
    }
}
