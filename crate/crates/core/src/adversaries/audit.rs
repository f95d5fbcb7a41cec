//! Empirical attack statistics, the no-signaling sweep and cheat detection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bob::{biased_bit_guess, bob_family, AnalyticBob};
use super::{AliceStrategy, BobStrategy};
use crate::error::{Error, Result};
use crate::protocol::{run_protocol_with, AnnouncementMode, ProtocolConfig, Round, Transcript};
use crate::rng;
use crate::stats::{proportion, Estimate};

/// Per-strategy statistics over single-qubit rounds against honest Alice.
///
/// `p_c` is the probability that Alice is conclusive on rounds Bob flags as
/// conclusive and `p_b` his bit accuracy on flagged conclusive rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub strategy: BobStrategy,
    pub trials: u64,
    pub analytic: AnalyticBob,
    pub p_c: Estimate,
    pub p_b: Estimate,
    /// Bob's raw bit disagrees with Alice's conclusive bit.
    pub bit_error_rate: Estimate,
    /// Bob's flag equals Alice's conclusiveness, over all rounds.
    pub conclusiveness_guess_rate: Estimate,
    /// Bob names Alice's measurement basis, over all rounds.
    pub basis_guess_rate: Estimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub known_bits_mean: Option<Estimate>,
}

impl AttackReport {
    pub fn product(&self) -> f64 {
        self.p_c.value * self.p_b.value
    }
}

/// Plays `trials` lossless rounds of `bob` against honest Alice on stream `(seed, 0)`.
pub fn bob_attack(bob: BobStrategy, trials: u64, seed: u64) -> Result<AttackReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let round = Round::new(AliceStrategy::Honest, bob, 1.0, AnnouncementMode::Sarg)?;
    let mut rng = rng::stream(seed, 0);
    let (mut flagged, mut flagged_conclusive, mut bit_right) = (0u64, 0u64, 0u64);
    let (mut conclusive, mut bit_wrong_all) = (0u64, 0u64);
    let (mut flag_right, mut basis_right) = (0u64, 0u64);
    for _ in 0..trials {
        let out = round.play(&mut rng)?;
        let interp = out.interpretation.expect("lossless channel");
        let alice_bit = interp.conclusive_bit();
        if out.bob_flags_conclusive {
            flagged += 1;
            if let Some(b) = alice_bit {
                flagged_conclusive += 1;
                bit_right += (b == out.bob_bit) as u64;
            }
        }
        if let Some(b) = alice_bit {
            conclusive += 1;
            bit_wrong_all += (b != out.bob_bit) as u64;
        }
        flag_right += (out.bob_flags_conclusive == alice_bit.is_some()) as u64;
        basis_right += (out.alice_basis == Some(out.bob_basis_guess())) as u64;
    }
    Ok(AttackReport {
        strategy: bob,
        trials,
        analytic: bob.into(),
        p_c: proportion(flagged_conclusive, flagged),
        p_b: proportion(bit_right, flagged_conclusive),
        bit_error_rate: proportion(bit_wrong_all, conclusive),
        conclusiveness_guess_rate: proportion(flag_right, trials),
        basis_guess_rate: proportion(basis_right, trials),
        known_bits_mean: None,
    })
}

/// Biased states on a `points`-grid over `[0, π)` plus both register modes.
///
/// Every strategy runs on the same stream so that the biased points share the
/// same basis choices by Alice.
pub fn no_signaling_audit(points: usize, trials_per_point: u64, seed: u64) -> Result<Vec<AttackReport>> {
    bob_family(points)
        .into_par_iter()
        .map(|bob| bob_attack(bob, trials_per_point, seed))
        .collect()
}

/// Largest analytic `p_c·p_b` in a set of reports.
pub fn max_analytic_product(reports: &[AttackReport]) -> f64 {
    reports.iter().map(|r| r.analytic.product).fold(f64::NEG_INFINITY, f64::max)
}

/// CSV with columns `phi, p_c, p_b, product, basis_guess, ci` for the biased
/// points: analytic `p_c`, `p_b` and product, empirical basis-guess rate and its
/// 99% half-width.
pub fn sweep_csv(reports: &[AttackReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(["phi", "p_c", "p_b", "product", "basis_guess", "ci"]).map_err(ser)?;
    for r in reports {
        if let BobStrategy::BiasedState { phi } = r.strategy {
            w.write_record([
                format!("{phi:.12}"),
                format!("{:.12}", r.analytic.p_c),
                format!("{:.12}", r.analytic.p_b),
                format!("{:.12}", r.analytic.product),
                format!("{:.12}", r.basis_guess_rate.value),
                format!("{:.12}", r.basis_guess_rate.half_width()),
            ])
            .map_err(ser)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}

/// Alice buys `n_check` of her extra known bits and compares Bob's answers.
///
/// `None` when she has fewer than `n_check` known bits besides the one used for
/// her query.
pub fn transcript_cheat_check(t: &Transcript, n_check: usize) -> Option<bool> {
    let extras: Vec<(usize, u8)> = t
        .key
        .alice_known
        .iter()
        .filter(|(&j, _)| j != t.chosen_j)
        .map(|(&j, &b)| (j, b))
        .collect();
    if n_check == 0 || extras.len() < n_check {
        return None;
    }
    Some(extras[..n_check].iter().any(|&(j, b)| t.key.bob_key[j] != b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheatDetection {
    pub n_check: usize,
    /// Runs in which Alice had enough extra known bits.
    pub eligible: u64,
    pub runs: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detection: Option<Estimate>,
}

/// Detection rate over seeded protocol runs against honest Alice.
pub fn cheat_detection(config: &ProtocolConfig, bob: BobStrategy, n_check: usize, runs: u64) -> Result<CheatDetection> {
    let outcomes: Vec<Option<bool>> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(config.seed, i);
            let db = vec![0u8; config.n];
            match run_protocol_with(config, &db, 0, AliceStrategy::Honest, bob, &mut rng) {
                Ok(t) => Ok(transcript_cheat_check(&t, n_check)),
                Err(Error::RestartLimitExceeded { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let eligible = outcomes.iter().flatten().count() as u64;
    let detected = outcomes.iter().flatten().filter(|&&d| d).count() as u64;
    Ok(CheatDetection {
        n_check,
        eligible,
        runs,
        detection: (eligible > 0).then(|| proportion(detected, eligible)),
    })
}

/// Error of an XOR of `k` independent bits that are each wrong with probability `e`.
pub fn xor_error(e: f64, k: usize) -> f64 {
    0.5 * (1.0 - (1.0 - 2.0 * e).powi(k as i32))
}

/// Probability that at least one of `n_check` independent checks fails.
pub fn detection_probability(mismatch: f64, n_check: usize) -> f64 {
    1.0 - (1.0 - mismatch).powi(n_check as i32)
}

/// Mismatch rate of one known final bit under the biased attack, simulated by
/// collecting `k` conclusive rounds per trial.
pub fn final_bit_mismatch(phi: f64, k: usize, trials: u64, seed: u64) -> Result<Estimate> {
    let round = Round::new(
        AliceStrategy::Honest,
        BobStrategy::biased(phi)?,
        1.0,
        AnnouncementMode::Sarg,
    )?;
    let bob_bit = biased_bit_guess(phi);
    let mut rng = rng::stream(seed, 0);
    let mut wrong = 0u64;
    for _ in 0..trials {
        let mut x = 0u8;
        let mut got = 0;
        while got < k {
            if let Some(b) = round.play(&mut rng)?.interpretation.and_then(|i| i.conclusive_bit()) {
                x ^= b ^ bob_bit;
                got += 1;
            }
        }
        wrong += x as u64;
    }
    Ok(proportion(wrong, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::NORTH_EAST;

    /// Distribution of the number of wrong bits among `k` by repeated convolution.
    fn xor_error_by_convolution(e: f64, k: usize) -> f64 {
        let mut dist = vec![1.0];
        for _ in 0..k {
            let mut next = vec![0.0; dist.len() + 1];
            for (w, p) in dist.iter().enumerate() {
                next[w] += p * (1.0 - e);
                next[w + 1] += p * e;
            }
            dist = next;
        }
        dist.iter().enumerate().filter(|(w, _)| w % 2 == 1).map(|(_, p)| p).sum()
    }

    #[test]
    fn xor_error_matches_convolution() {
        for k in 1..=9 {
            for e in [0.0, 0.1, 0.25, 0.5, 0.9] {
                assert!((xor_error(e, k) - xor_error_by_convolution(e, k)).abs() < 1e-12);
            }
        }
        assert!((xor_error_by_convolution(0.5, 7) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn detection_non_decreasing() {
        let v: Vec<f64> = (1..10).map(|n| detection_probability(0.3, n)).collect();
        assert!(v.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(detection_probability(0.0, 5), 0.0);
    }

    #[test]
    fn biased_final_bit_mismatch_is_half() {
        let e = final_bit_mismatch(NORTH_EAST, 7, 20_000, 8).unwrap();
        assert!(e.contains(0.5), "{e:?}");
        let honest_like = final_bit_mismatch(0.0, 7, 2_000, 8).unwrap();
        assert_eq!(honest_like.value, 0.0);
    }

    #[test]
    fn honest_bob_never_detected() {
        let cfg = ProtocolConfig::new(400, 2).with_seed(6);
        let d = cheat_detection(&cfg, BobStrategy::Honest, 1, 50).unwrap();
        assert!(d.eligible > 0);
        assert_eq!(d.detection.unwrap().value, 0.0);
    }

    #[test]
    fn biased_bob_detected() {
        let cfg = ProtocolConfig::new(400, 2).with_seed(6);
        let d = cheat_detection(&cfg, BobStrategy::BiasedState { phi: NORTH_EAST }, 1, 100).unwrap();
        let e = d.detection.unwrap();
        assert!(e.value > 0.2, "{d:?}");
    }

    #[test]
    fn no_extra_bits_is_indeterminate() {
        let cfg = ProtocolConfig::new(4, 8).with_seed(1);
        let mut c = cfg.clone();
        c.max_restarts = 0;
        let d = cheat_detection(&c, BobStrategy::Honest, 3, 10).unwrap();
        assert_eq!(d.eligible, 0);
        assert!(d.detection.is_none());
    }

    #[test]
    fn sweep_csv_header_and_rows() {
        let reports = no_signaling_audit(4, 2_000, 1).unwrap();
        assert_eq!(reports.len(), 6);
        let csv = sweep_csv(&reports).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "phi,p_c,p_b,product,basis_guess,ci");
        assert_eq!(lines.len(), 5);
        assert!(max_analytic_product(&reports) <= 0.5);
    }
}
