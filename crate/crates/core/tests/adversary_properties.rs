mod common;

use qpq_core::adversaries::{
    alice_joint_helstrom, bob_attack, bob_entangled_round, no_signaling_audit, phi_grid, RegisterMode,
};
use qpq_core::experiments::monte_carlo;
use qpq_core::protocol::{AnnouncementMode, Round};
use qpq_core::rng::stream;
use qpq_core::stats::chi_square_homogeneity;
use qpq_core::{AliceStrategy, BobStrategy, ProtocolConfig};

#[test]
fn entangled_honest_basis_looks_honest_to_alice() {
    let honest = Round::new(AliceStrategy::Honest, BobStrategy::Honest, 1.0, AnnouncementMode::Sarg).unwrap();
    let entangled = Round::new(
        AliceStrategy::Honest,
        BobStrategy::EntangledRegister { mode: RegisterMode::HonestBasis },
        1.0,
        AnnouncementMode::Sarg,
    )
    .unwrap();
    let a = common::alice_view_histogram(&honest, 200_000, &mut stream(1, 0)).unwrap();
    let b = common::alice_view_histogram(&entangled, 200_000, &mut stream(1, 1)).unwrap();
    let t = chi_square_homogeneity(&a, &b);
    assert!(t.p_value > 0.01, "{t:?}");
}

#[test]
fn entangled_honest_basis_recovers_sent_bit() {
    let r = bob_attack(BobStrategy::EntangledRegister { mode: RegisterMode::HonestBasis }, 100_000, 2).unwrap();
    assert_eq!(r.bit_error_rate.value, 0.0);
    assert!(r.p_c.contains(0.25));
}

#[test]
fn entangled_round_keeps_register() {
    let mut rng = stream(3, 0);
    let out = bob_entangled_round(RegisterMode::ConclusivenessBasis, &mut rng).unwrap();
    assert_eq!(out.register.map(|r| r.num_qubits()), Some(1));
}

#[test]
fn usd_attack_never_wrong_across_seeds() {
    for seed in 0..20 {
        let cfg = ProtocolConfig::new(300, 2).with_seed(seed);
        let mc = monte_carlo(&cfg, AliceStrategy::IndividualUsd, BobStrategy::Honest, 10).unwrap();
        assert_eq!(mc.total_mismatches(), 0);
    }
}

#[test]
fn joint_helstrom_closed_form_agrees_with_matrices() {
    for k in 1..=10 {
        assert!(alice_joint_helstrom(k).unwrap().max_deviation() < 1e-9, "k = {k}");
    }
    let far = alice_joint_helstrom(40).unwrap();
    assert!((far.closed_form - 0.5).abs() < 1e-6);
}

#[test]
fn sweep_confined_and_bounded() {
    let lo = std::f64::consts::FRAC_PI_8.sin().powi(2);
    let hi = std::f64::consts::FRAC_PI_8.cos().powi(2);
    let reports = no_signaling_audit(181, 20_000, 4).unwrap();
    for r in &reports {
        assert!(r.analytic.p_c >= lo - 1e-12 && r.analytic.p_c <= hi + 1e-12);
        assert!(r.analytic.product <= 0.5);
        assert!(r.product() <= 0.5 + 3.0 * (r.p_c.half_width() + r.p_b.half_width()));
    }
    assert_eq!(phi_grid(181).len(), 181);
}

#[test]
fn biased_attack_runs_through_protocol() {
    let cfg = ProtocolConfig::new(500, 2).with_seed(5);
    let mc = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::BiasedState { phi: 1.0 }, 50).unwrap();
    let r = mc.report();
    assert!(r.analytic.contains_key("n_bar"));
}
