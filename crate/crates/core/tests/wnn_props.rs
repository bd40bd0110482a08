//! Property tests for the weightless core: response bounds, self-recognition,
//! training monotonicity, mapping determinism and the parallel-response sum.

use proptest::prelude::*;
use pwot_core::quantize::{corrupt_bits, CorruptionSpec};
use pwot_core::wnn::{
    make_input_mapping, new_discriminator, partition_central_peripheral, ParallelDiscriminator,
    PAD_SLOT,
};
use pwot_core::{BitPattern, SplitMix64};

fn pattern_from_seed(width: u32, height: u32, seed: u64) -> BitPattern {
    let mut rng = SplitMix64::new(seed);
    let bits: Vec<bool> = (0..(width as usize * height as usize))
        .map(|_| rng.next_u64() & 1 == 1)
        .collect();
    BitPattern::from_bits(width, height, &bits).unwrap()
}

proptest! {
    #[test]
    fn response_bounded_and_self_recognition(
        width in 1u32..40,
        height in 1u32..20,
        node_size in 1usize..12,
        seed in any::<u64>(),
        query_seed in any::<u64>(),
    ) {
        let total = width as usize * height as usize;
        let mapping = make_input_mapping(total, node_size, seed).unwrap();
        let k = mapping.node_count() as u32;
        let mut d = new_discriminator(mapping);
        let trained = pattern_from_seed(width, height, seed ^ 0x5555);
        d.train(&trained).unwrap();
        prop_assert_eq!(d.respond(&trained).unwrap(), k);
        let query = pattern_from_seed(width, height, query_seed);
        let r = d.respond(&query).unwrap();
        prop_assert!(r <= k);
    }

    #[test]
    fn training_never_decreases_responses(
        node_size in 1usize..10,
        seed in any::<u64>(),
        extra in 1usize..6,
    ) {
        let (width, height) = (16u32, 8u32);
        let mapping = make_input_mapping(128, node_size, seed).unwrap();
        let mut d = new_discriminator(mapping);
        let query = pattern_from_seed(width, height, 1);
        let mut last = d.respond(&query).unwrap();
        for i in 0..extra {
            d.train(&pattern_from_seed(width, height, 1000 + i as u64)).unwrap();
            let now = d.respond(&query).unwrap();
            prop_assert!(now >= last, "response dropped {last} -> {now}");
            last = now;
        }
    }

    #[test]
    fn mapping_is_deterministic_and_partitions(
        total in 1usize..500,
        node_size in 1usize..12,
        seed in any::<u64>(),
    ) {
        let a = make_input_mapping(total, node_size, seed).unwrap();
        let b = make_input_mapping(total, node_size, seed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.node_count(), total.div_ceil(node_size));
        let mut seen = vec![0usize; total];
        for node in 0..a.node_count() {
            for &slot in a.node_slots(node) {
                if slot != PAD_SLOT {
                    seen[slot] += 1;
                }
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1), "not a partition");
    }

    #[test]
    fn flipped_bits_perturb_at_most_one_node_each(
        node_size in 1usize..10,
        seed in any::<u64>(),
        flips in 0usize..64,
    ) {
        let (width, height) = (16u32, 8u32);
        let mapping = make_input_mapping(128, node_size, seed).unwrap();
        let k = mapping.node_count() as u32;
        let mut d = new_discriminator(mapping);
        let trained = pattern_from_seed(width, height, 7);
        d.train(&trained).unwrap();
        let mut query = trained.clone();
        for i in 0..flips {
            query.flip(i * 2); // distinct positions in 0..128
        }
        let r = d.respond(&query).unwrap();
        prop_assert!(r <= k);
        prop_assert!(r >= k.saturating_sub(flips as u32));
    }

    #[test]
    fn parallel_response_equals_part_sum(
        width in 2u32..24,
        height in 2u32..16,
        fraction in 0.0f64..=1.0,
        seed in any::<u64>(),
        query_seed in any::<u64>(),
    ) {
        let mut pd = ParallelDiscriminator::new(width, height, fraction, 3, 15, seed).unwrap();
        let trained = pattern_from_seed(width, height, seed ^ 0xAAAA);
        pd.train(&trained).unwrap();
        let query = pattern_from_seed(width, height, query_seed);

        let (inner_idx, outer_idx) = partition_central_peripheral(width, height, fraction);
        let project = |p: &BitPattern, idx: &[usize]| -> Option<BitPattern> {
            if idx.is_empty() {
                return None;
            }
            let bits: Vec<bool> = idx.iter().map(|&i| p.get(i)).collect();
            Some(BitPattern::from_bits(bits.len() as u32, 1, &bits).unwrap())
        };
        let standalone = |idx: &[usize], node: usize| -> u32 {
            match (project(&trained, idx), project(&query, idx)) {
                (Some(t), Some(q)) => {
                    let mut d = new_discriminator(make_input_mapping(idx.len(), node, seed).unwrap());
                    d.train(&t).unwrap();
                    d.respond(&q).unwrap()
                }
                _ => 0,
            }
        };
        let dr1 = standalone(&inner_idx, 3);
        let dr2 = standalone(&outer_idx, 15);
        prop_assert_eq!(pd.respond(&query).unwrap(), dr1 + dr2);
    }

    #[test]
    fn partition_is_exact_and_bounded(
        width in 1u32..50,
        height in 1u32..50,
        fraction in 0.0f64..=1.0,
    ) {
        let (inner, outer) = partition_central_peripheral(width, height, fraction);
        let area = width as usize * height as usize;
        prop_assert_eq!(inner.len() + outer.len(), area);
        let mut all: Vec<usize> = inner.iter().chain(outer.iter()).copied().collect();
        all.sort_unstable();
        all.dedup();
        prop_assert_eq!(all.len(), area);
        prop_assert!(inner.len() as f64 <= fraction * area as f64 + 1e-9);
    }
}

// Statistical invariant: mean response over many corruption seeds decreases
// as the flip fraction grows.
#[test]
fn mean_response_decreases_with_noise() {
    let (width, height) = (20u32, 20u32);
    let mapping = make_input_mapping(400, 3, 11).unwrap();
    let mut d = new_discriminator(mapping);
    let trained = pattern_from_seed(width, height, 3);
    d.train(&trained).unwrap();

    let mean_at = |fraction: f64| -> f64 {
        let mut sum = 0u64;
        for trial in 0..120u64 {
            let noisy = corrupt_bits(
                &trained,
                &CorruptionSpec {
                    flip_fraction: fraction,
                    seed: trial,
                },
            );
            sum += d.respond(&noisy).unwrap() as u64;
        }
        sum as f64 / 120.0
    };

    let fractions = [0.05, 0.1, 0.2, 0.4];
    let means: Vec<f64> = fractions.iter().map(|&f| mean_at(f)).collect();
    for pair in means.windows(2) {
        assert!(
            pair[0] >= pair[1],
            "means not monotone over {fractions:?}: {means:?}"
        );
    }
}

#[test]
fn footprint_matches_table_allocation() {
    for (total, node_size) in [(680usize, 3usize), (680, 9), (123, 7), (4096, 15)] {
        let d = new_discriminator(make_input_mapping(total, node_size, 1).unwrap());
        let exact = d.memory_footprint_bits();
        assert_eq!(
            exact,
            (total.div_ceil(node_size) as u64) << node_size,
            "footprint formula"
        );
        assert!(d.allocated_bits() >= exact && d.allocated_bits() < exact + 64);
    }
}
