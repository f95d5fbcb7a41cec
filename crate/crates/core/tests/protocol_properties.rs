mod common;

use proptest::prelude::*;
use qpq_core::protocol::{
    alice_measure, bob_announce, bob_prepare, encrypt_database, interpret, reduce_key, run_protocol, transmit,
    AnnouncementMode, Round,
};
use qpq_core::rng::stream;
use qpq_core::stats::{chi_square_homogeneity, sigma_distance};
use qpq_core::{AliceStrategy, BobStrategy, Interpretation, ProtocolConfig, SargSymbol};
use rand::Rng;

#[test]
fn preparation_is_uniform() {
    let mut rng = stream(1, 0);
    let n = 1_000_000u64;
    let mut counts = [0u64; 4];
    for _ in 0..n {
        counts[bob_prepare(&mut rng).index()] += 1;
    }
    for c in counts {
        assert!(sigma_distance(c, n, 0.25) < 3.0, "{counts:?}");
    }
    assert!(sigma_distance(counts[0] + counts[2], n, 0.5) < 3.0);
}

#[test]
fn detection_rate_matches_eta() {
    let mut rng = stream(2, 0);
    let n = 1_000_000u64;
    let hits = (0..n).filter(|_| transmit(SargSymbol::Left, 0.1, &mut rng)).count() as u64;
    assert!(sigma_distance(hits, n, 0.1) < 3.0);
}

#[test]
fn honest_rates() {
    // One quarter conclusive; two thirds of inconclusive results come from matching bases.
    let mut rng = stream(3, 0);
    let n = 1_000_000u64;
    let (mut conclusive, mut inconclusive, mut same_basis) = (0u64, 0u64, 0u64);
    for _ in 0..n {
        let sent = bob_prepare(&mut rng);
        let (basis, outcome) = alice_measure(sent, &mut rng);
        let pair = bob_announce(sent, &mut rng);
        match interpret(basis, outcome, pair).unwrap() {
            Interpretation::Conclusive { bit } => {
                assert_eq!(bit, sent.bit());
                conclusive += 1;
            }
            Interpretation::Inconclusive { p_one } => {
                assert!((p_one - 1.0 / 3.0).abs() < 1e-15 || (p_one - 2.0 / 3.0).abs() < 1e-15);
                inconclusive += 1;
                same_basis += (basis == sent.basis()) as u64;
            }
        }
    }
    assert!(sigma_distance(conclusive, n, 0.25) < 3.0);
    assert!(sigma_distance(same_basis, inconclusive, 2.0 / 3.0) < 3.0);
}

#[test]
fn loss_does_not_change_alice_view() {
    let lossless = Round::new(AliceStrategy::Honest, BobStrategy::Honest, 1.0, AnnouncementMode::Sarg).unwrap();
    let lossy = Round::new(AliceStrategy::Honest, BobStrategy::Honest, 0.1, AnnouncementMode::Sarg).unwrap();
    let a = common::alice_view_histogram(&lossless, 100_000, &mut stream(4, 0)).unwrap();
    let b = common::alice_view_histogram(&lossy, 100_000, &mut stream(4, 1)).unwrap();
    let t = chi_square_homogeneity(&a, &b);
    assert!(t.p_value > 0.01, "{t:?}");
}

#[test]
fn reduce_key_worked_example() {
    let raw = [1, 0, 1, 1];
    let interp = [
        Interpretation::Conclusive { bit: 1 },
        Interpretation::Inconclusive { p_one: 2.0 / 3.0 },
        Interpretation::Conclusive { bit: 1 },
        Interpretation::Inconclusive { p_one: 1.0 / 3.0 },
    ];
    let key = reduce_key(&raw, &interp, 2, 2).unwrap();
    assert_eq!(key.bob_key, vec![0, 1]);
    assert_eq!(key.alice_known.into_iter().collect::<Vec<_>>(), vec![(0, 0)]);
}

#[test]
fn encryption_worked_example() {
    assert_eq!(encrypt_database(&[1, 0, 1], &[1, 1, 0], 1).unwrap(), vec![0, 0, 0]);
}

#[test]
fn usd_memory_attack_runs() {
    let cfg = ProtocolConfig::new(2000, 3).with_seed(8);
    let t = run_protocol(&cfg, &vec![0; 2000], 5, AliceStrategy::IndividualUsd, BobStrategy::Honest).unwrap();
    assert!(t.key.mismatches().is_empty());
    assert!(t.is_correct());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn honest_runs_are_sound(seed in any::<u64>(), n in 1usize..300, k in 1usize..4, eta in 0.05f64..=1.0) {
        let mut rng = stream(seed, 1);
        let db: Vec<u8> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let target = rng.random_range(0..n);
        let mut cfg = ProtocolConfig::new(n, k).with_seed(seed);
        cfg.eta = eta;
        cfg.max_restarts = 200;
        let t = run_protocol(&cfg, &db, target, AliceStrategy::Honest, BobStrategy::Honest).unwrap();
        prop_assert!(t.key.mismatches().is_empty());
        prop_assert_eq!(t.retrieved_bit, db[target]);
        prop_assert!(t.key.alice_known.contains_key(&t.chosen_j));
        prop_assert_eq!(t.shift, (t.chosen_j + n - target) % n);
        let sent = t.attempts.last().unwrap().sent;
        prop_assert!(sent >= n * k);
    }

    #[test]
    fn transcripts_are_deterministic(seed in any::<u64>()) {
        let cfg = ProtocolConfig::new(60, 2).with_seed(seed);
        let db = vec![1u8; 60];
        let a = run_protocol(&cfg, &db, 3, AliceStrategy::Honest, BobStrategy::Honest).unwrap();
        let b = run_protocol(&cfg, &db, 3, AliceStrategy::Honest, BobStrategy::Honest).unwrap();
        prop_assert_eq!(a.to_json(true).to_string(), b.to_json(true).to_string());
    }
}
