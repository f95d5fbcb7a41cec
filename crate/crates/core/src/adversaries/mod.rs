//! Dishonest strategies for both parties and the machinery that checks the
//! resulting security bounds.

pub mod alice;
pub mod audit;
pub mod bob;
pub mod strategy;

pub use alice::{
    alice_joint_helstrom, alice_usd_interpret, bb84_memory_attack, bb84_memory_attack_basis_mode,
    joint_helstrom_trials, JointHelstrom, USD_SUCCESS,
};
pub use audit::{
    bob_attack, cheat_detection, detection_probability, final_bit_mismatch, max_analytic_product,
    no_signaling_audit, sweep_csv, transcript_cheat_check, xor_error, AttackReport, CheatDetection,
};
pub use bob::{
    analytic_bob, biased_bit_guess, biased_conclusive_weights, biased_p_b, biased_p_c, bob_biased_send,
    bob_entangled_round, bob_family, entangled_conclusiveness_bound, entangled_pair_state, phi_grid,
    register_ensembles, AnalyticBob, RegisterEnsembles,
};
pub use strategy::{AliceStrategy, BobStrategy, RegisterMode};
