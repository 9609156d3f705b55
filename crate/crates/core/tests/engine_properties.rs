mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::check_engine_invariants;
use specgame::engine::Alphabet;
use specgame::GameConfig;

fn small_config() -> impl Strategy<Value = GameConfig> {
    (
        5usize..40,
        1usize..4,
        1usize..4,
        prop_oneof![Just(0.0), 0.01f64..1.5],
        any::<u64>(),
    )
        .prop_map(|(n, m, s, pb, seed)| GameConfig {
            n_players: n,
            memory: m,
            n_strategies: s,
            perturbation: pb,
            horizon: 300,
            rng_seed: seed,
            ..GameConfig::default()
        })
}

// `Strategy` above is proptest's trait; the table type is reached by path.
type Table = specgame::engine::Strategy;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engine_invariants_hold(config in small_config()) {
        if let Err(violation) = check_engine_invariants(&config) {
            return Err(TestCaseError::fail(violation));
        }
    }

    #[test]
    fn identical_seeds_give_identical_runs(config in small_config()) {
        let a = specgame::engine::run(&config).unwrap();
        let b = specgame::engine::run(&config).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn pattern_index_matches_base_conversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for alphabet in [Alphabet::Quinary, Alphabet::Quaternary] {
        for memory in 1..=5 {
            for _ in 0..200 {
                let tail: Vec<i8> = (0..memory).map(|_| alphabet.sample(&mut rng)).collect();
                let base = alphabet.size();
                let expected = tail.iter().fold(0, |acc, &d| {
                    acc * base + alphabet.symbols().iter().position(|&s| s == d).unwrap()
                });
                assert_eq!(alphabet.pattern_index(&tail), Some(expected));
            }
            assert_eq!(alphabet.patterns(memory), base_pow(alphabet.size(), memory));
        }
    }
}

fn base_pow(b: usize, e: usize) -> usize {
    (0..e).fold(1, |acc, _| acc * b)
}

#[test]
fn random_tables_use_each_action_about_equally() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0usize; 3];
    for _ in 0..50 {
        let s = Table::random(Alphabet::Quinary, 5, &mut rng);
        assert_eq!(s.len(), 3125);
        for a in s.entries() {
            counts[(a.value() + 1) as usize] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    for c in counts {
        let frac = c as f64 / total as f64;
        assert!((frac - 1.0 / 3.0).abs() < 0.01, "{counts:?}");
    }
}

#[test]
fn zero_perturbation_consumes_no_noise() {
    let config = GameConfig {
        n_players: 200,
        horizon: 2_000,
        ..GameConfig::default()
    };
    let sim = specgame::engine::run(&config).unwrap();
    assert!(sim.records.iter().all(|r| r.perturbation_draw == 0.0));
    assert!(sim
        .records
        .iter()
        .all(|r| r.price_change == r.speculative_imbalance));
}
