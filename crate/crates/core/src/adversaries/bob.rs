//! Attacks by the database owner on user privacy.
//!
//! Bob wants to learn which final-key bits Alice knows. All modeled attacks act
//! on single qubits: a state other than the announced pair, or half of an
//! entangled state whose other half he keeps.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{AliceStrategy, BobStrategy, RegisterMode};
use crate::error::Result;
use crate::protocol::{AnnouncedPair, AnnouncementMode, Round, RoundOutcome};
use crate::quantum::linalg::RealMatrix;
use crate::quantum::{helstrom_guess, rho_conclusive, rho_inconclusive, PureState};
use crate::rng;

/// Probabilities of Alice's two conclusive outcomes for the state at angle `phi`
/// against the announced pair `{↑, →}`: `(P(←) → bit 0, P(↓) → bit 1)`.
pub fn biased_conclusive_weights(phi: f64) -> (f64, f64) {
    let bit0 = 0.5 * (phi - 3.0 * FRAC_PI_4).cos().powi(2);
    let bit1 = 0.5 * phi.sin().powi(2);
    (bit0, bit1)
}

/// Probability that Alice obtains a conclusive result.
pub fn biased_p_c(phi: f64) -> f64 {
    let (a0, a1) = biased_conclusive_weights(phi);
    a0 + a1
}

/// Bob's maximum-likelihood bit guess.
pub fn biased_bit_guess(phi: f64) -> u8 {
    let (a0, a1) = biased_conclusive_weights(phi);
    (a1 > a0) as u8
}

/// Accuracy of the maximum-likelihood guess given a conclusive result.
pub fn biased_p_b(phi: f64) -> f64 {
    let (a0, a1) = biased_conclusive_weights(phi);
    a0.max(a1) / (a0 + a1)
}

/// The state Bob sends and the pair he announces.
pub fn bob_biased_send(phi: f64) -> Result<(PureState, AnnouncedPair)> {
    BobStrategy::biased(phi)?;
    Ok((PureState::from_angle(phi), AnnouncedPair::CANONICAL))
}

/// `(|a⟩_A|R₀⟩_B + |b⟩_A|R₁⟩_B)/√2` with Alice's qubit most significant, using
/// representatives of `a` and `b` that have overlap `+1/√2`.
pub fn entangled_pair_state(pair: AnnouncedPair) -> PureState {
    let [t0, t1] = pair.member_angles();
    let h = FRAC_1_SQRT_2;
    PureState::new(vec![h * t0.cos(), h * t1.cos(), h * t0.sin(), h * t1.sin()])
        .expect("normalized by construction")
}

/// One qubit of the entangled-register attack, played against honest Alice.
pub fn bob_entangled_round<R: Rng + ?Sized>(mode: RegisterMode, rng: &mut R) -> Result<RoundOutcome> {
    Round::new(
        AliceStrategy::Honest,
        BobStrategy::EntangledRegister { mode },
        1.0,
        AnnouncementMode::Sarg,
    )?
    .play(rng)
}

/// Best conclusiveness guess from the register: Helstrom for `(ρ_c, ρ_n)` with prior ¼.
pub fn entangled_conclusiveness_bound() -> f64 {
    helstrom_guess(&rho_conclusive(), &rho_inconclusive(), 0.25).expect("2×2 states")
}

/// Register states averaged over Alice's conclusive and inconclusive rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterEnsembles {
    pub conclusive: RealMatrix,
    pub inconclusive: RealMatrix,
    pub n_conclusive: u64,
    pub n_inconclusive: u64,
}

pub fn register_ensembles(trials: u64, seed: u64) -> Result<RegisterEnsembles> {
    let round = Round::new(
        AliceStrategy::Honest,
        BobStrategy::EntangledRegister { mode: RegisterMode::HonestBasis },
        1.0,
        AnnouncementMode::Sarg,
    )?;
    let mut rng = rng::stream(seed, 0);
    let mut sums = [RealMatrix::zeros(2), RealMatrix::zeros(2)];
    let mut counts = [0u64; 2];
    for _ in 0..trials {
        let out = round.play(&mut rng)?;
        let conclusive = out.interpretation.is_some_and(|i| i.is_conclusive());
        let register = out.register.expect("register kept");
        let slot = (!conclusive) as usize;
        sums[slot].add_outer(register.amplitudes(), 1.0);
        counts[slot] += 1;
    }
    let [c, n] = sums;
    Ok(RegisterEnsembles {
        conclusive: c.scaled(1.0 / counts[0].max(1) as f64),
        inconclusive: n.scaled(1.0 / counts[1].max(1) as f64),
        n_conclusive: counts[0],
        n_inconclusive: counts[1],
    })
}

/// Analytic `(p_c, p_b)` for a strategy, with `p_c` the probability that Alice is
/// conclusive on rounds Bob flags and `p_b` his bit accuracy on those rounds.
pub fn analytic_bob(bob: BobStrategy) -> (f64, f64) {
    match bob {
        BobStrategy::Honest | BobStrategy::EntangledRegister { mode: RegisterMode::HonestBasis } => (0.25, 1.0),
        BobStrategy::BiasedState { phi } => (biased_p_c(phi), biased_p_b(phi)),
        BobStrategy::EntangledRegister { mode: RegisterMode::ConclusivenessBasis } => {
            let minus = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
            let flag_c = 0.25 * rho_conclusive().matrix().quadratic_form(&minus);
            let flag_n = 0.75 * rho_inconclusive().matrix().quadratic_form(&minus);
            (flag_c / (flag_c + flag_n), 0.5)
        }
    }
}

/// Sweep grid `φ_i = iπ/points`, covering `[0, π)`.
pub fn phi_grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| i as f64 * PI / points as f64).collect()
}

/// The family swept by the no-signaling audit: biased states on the grid plus both register modes.
pub fn bob_family(points: usize) -> Vec<BobStrategy> {
    phi_grid(points)
        .into_iter()
        .map(|phi| BobStrategy::BiasedState { phi })
        .chain([
            BobStrategy::EntangledRegister { mode: RegisterMode::HonestBasis },
            BobStrategy::EntangledRegister { mode: RegisterMode::ConclusivenessBasis },
        ])
        .collect()
}

/// Serializable form of [`analytic_bob`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticBob {
    pub p_c: f64,
    pub p_b: f64,
    pub product: f64,
}

impl From<BobStrategy> for AnalyticBob {
    fn from(bob: BobStrategy) -> Self {
        let (p_c, p_b) = analytic_bob(bob);
        Self { p_c, p_b, product: p_c * p_b }
    }
}
