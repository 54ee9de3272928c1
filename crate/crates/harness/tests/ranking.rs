mod common;

use common::{oracle_rank, random_matrix};
use mefb_harness::rank;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn rank_matches_counting_oracle(seed in any::<u64>(), algs in 1usize..7, pairs in 1usize..5, metrics in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_matrix(&mut rng, algs, pairs, metrics);
        let Ok(t) = rank(&s) else {
            // only when no cell at all has a value
            prop_assert!(oracle_rank(&s).averages.iter().flatten().all(Option::is_none));
            return Ok(());
        };
        let o = oracle_rank(&s);
        for (m, mr) in t.metrics.iter().enumerate() {
            prop_assert_eq!(&mr.averages, &o.averages[m]);
            prop_assert_eq!(&mr.ranks, &o.ranks[m]);
            prop_assert_eq!(&mr.awards, &o.awards[m]);
        }
        prop_assert_eq!(&t.counts, &o.counts);
    }

    #[test]
    fn counts_are_conserved(seed in any::<u64>(), algs in 1usize..7, metrics in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_matrix(&mut rng, algs, 3, metrics);
        if let Ok(t) = rank(&s) {
            let total: usize = t.counts.iter().flatten().sum();
            let expected: usize = t
                .metrics
                .iter()
                .map(|m| m.averages.iter().filter(|a| a.is_some()).count().min(3))
                .sum();
            prop_assert_eq!(total, expected);
            for m in &t.metrics {
                for place in 0..3 {
                    prop_assert!(m.awards.iter().filter(|&&a| a == Some(place)).count() <= 1);
                }
            }
        }
    }

    #[test]
    fn sorting_commutes_with_ranking(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_matrix(&mut rng, 4, 3, 3);
        let (Ok(a), Ok(b)) = (rank(&s), rank(&s.sorted())) else { return Ok(()) };
        prop_assert_eq!(a.metrics.len(), b.metrics.len());
        for (x, y) in a.metrics.iter().zip(&b.metrics) {
            prop_assert_eq!(&x.averages, &y.averages);
        }
    }
}
