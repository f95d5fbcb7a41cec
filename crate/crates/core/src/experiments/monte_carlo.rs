use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::key_stats::key_stats;
use super::report::ExperimentReport;
use crate::adversaries::{biased_p_c, AliceStrategy, BobStrategy, USD_SUCCESS};
use crate::error::{Error, Result};
use crate::protocol::{run_protocol_with, AnnouncementMode, ProtocolConfig};
use crate::rng;
use crate::stats::{dispersion_index, mean, proportion, sigma_distance, Estimate};

/// Outcome of one seeded protocol run. Counts refer to the first attempt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub known_first: usize,
    /// Kept and conclusive qubits, absent when the run hit the restart limit.
    pub kept_first: Option<usize>,
    pub conclusive_first: Option<usize>,
    pub restarts: usize,
    pub restart_limit_hit: bool,
    pub correct: Option<bool>,
    /// Known final bits that disagree with Bob's key.
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo {
    pub config: ProtocolConfig,
    pub alice: AliceStrategy,
    pub bob: BobStrategy,
    pub records: Vec<TrialRecord>,
}

/// Per-qubit conclusive probability implied by the strategies, when there is a closed form.
pub fn expected_conclusive_rate(config: &ProtocolConfig, alice: AliceStrategy, bob: BobStrategy) -> Option<f64> {
    match (config.announcement, alice, bob) {
        (AnnouncementMode::Sarg, AliceStrategy::Honest, BobStrategy::BiasedState { phi }) => Some(biased_p_c(phi)),
        (AnnouncementMode::Sarg, AliceStrategy::Honest, _) => Some(0.25),
        (AnnouncementMode::Sarg, AliceStrategy::IndividualUsd | AliceStrategy::Bb84Memory, _) => Some(USD_SUCCESS),
        (AnnouncementMode::Bb84, AliceStrategy::Honest, _) => Some(0.5),
        (AnnouncementMode::Bb84, AliceStrategy::IndividualUsd | AliceStrategy::Bb84Memory, _) => Some(1.0),
        (_, AliceStrategy::JointHelstrom, _) => None,
    }
}

/// Runs `trials` independent protocol runs. Trial `i` draws its database,
/// target and protocol randomness from stream `(seed, i)`.
pub fn monte_carlo(config: &ProtocolConfig, alice: AliceStrategy, bob: BobStrategy, trials: usize) -> Result<MonteCarlo> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    config.validate()?;
    let records = (0..trials as u64)
        .into_par_iter()
        .map(|i| run_trial(config, alice, bob, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonteCarlo {
        config: config.clone(),
        alice,
        bob,
        records,
    })
}

fn run_trial(config: &ProtocolConfig, alice: AliceStrategy, bob: BobStrategy, index: u64) -> Result<TrialRecord> {
    let mut rng = rng::stream(config.seed, index);
    let db: Vec<u8> = (0..config.n).map(|_| rng.random_range(0..2u8)).collect();
    let target = rng.random_range(0..config.n);
    match run_protocol_with(config, &db, target, alice, bob, &mut rng) {
        Ok(t) => {
            let first = &t.attempts[0];
            Ok(TrialRecord {
                known_first: first.known,
                kept_first: Some(config.raw_len()),
                conclusive_first: Some(first.conclusive),
                restarts: t.restarts(),
                restart_limit_hit: false,
                correct: Some(t.is_correct()),
                mismatches: t.key.mismatches().len(),
            })
        }
        Err(Error::RestartLimitExceeded { attempts }) => Ok(TrialRecord {
            known_first: 0,
            kept_first: None,
            conclusive_first: None,
            restarts: attempts,
            restart_limit_hit: true,
            correct: None,
            mismatches: 0,
        }),
        Err(e) => Err(e),
    }
}

impl MonteCarlo {
    pub fn trials(&self) -> usize {
        self.records.len()
    }

    fn known_counts(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.known_first as f64).collect()
    }

    /// Mean known final bits on the first attempt, zeros included.
    pub fn known_mean(&self) -> Estimate {
        mean(&self.known_counts())
    }

    /// Fraction of first attempts with no known bit.
    pub fn failure_rate(&self) -> Estimate {
        let failures = self.records.iter().filter(|r| r.known_first == 0).count();
        proportion(failures as u64, self.trials() as u64)
    }

    pub fn dispersion(&self) -> Estimate {
        dispersion_index(&self.known_counts())
    }

    /// `(conclusive, kept)` qubit counts over first attempts.
    pub fn conclusive_counts(&self) -> (u64, u64) {
        self.records.iter().fold((0, 0), |(c, n), r| {
            (
                c + r.conclusive_first.unwrap_or(0) as u64,
                n + r.kept_first.unwrap_or(0) as u64,
            )
        })
    }

    pub fn conclusive_rate(&self) -> Estimate {
        let (c, n) = self.conclusive_counts();
        proportion(c, n)
    }

    pub fn retrieval_accuracy(&self) -> Estimate {
        let done: Vec<bool> = self.records.iter().filter_map(|r| r.correct).collect();
        proportion(done.iter().filter(|&&c| c).count() as u64, done.len() as u64)
    }

    pub fn total_mismatches(&self) -> usize {
        self.records.iter().map(|r| r.mismatches).sum()
    }

    pub fn restart_limit_hits(&self) -> usize {
        self.records.iter().filter(|r| r.restart_limit_hit).count()
    }

    pub fn report(&self) -> ExperimentReport {
        let mut r = ExperimentReport::new("monte_carlo");
        r.param("config", &self.config)
            .param("alice", self.alice)
            .param("bob", self.bob)
            .param("trials", self.trials());
        r.empirical("known_bits_mean", self.known_mean())
            .empirical("failure_rate", self.failure_rate())
            .empirical("dispersion_index", self.dispersion())
            .empirical("conclusive_rate", self.conclusive_rate())
            .empirical("retrieval_accuracy", self.retrieval_accuracy());
        if let Some(p) = expected_conclusive_rate(&self.config, self.alice, self.bob) {
            let ks = key_stats(self.config.n, self.config.k, p).expect("validated config");
            r.analytic("conclusive_rate", p)
                .analytic("n_bar", ks.n_bar)
                .analytic("p0", ks.p0);
            let (c, n) = self.conclusive_counts();
            let sigmas = sigma_distance(c, n, p);
            r.check("conclusive_rate_3sigma", sigmas <= 3.0, format!("{sigmas:.2}σ from {p:.6}"));
            let m = self.known_mean();
            r.check(
                "known_mean_ci",
                m.contains(ks.n_bar),
                format!("{:.4} in [{:.4}, {:.4}] vs {:.4}", m.value, m.lo, m.hi, ks.n_bar),
            );
        }
        if self.trials() >= 2 {
            let d = self.dispersion();
            r.check(
                "poisson_dispersion_ci",
                d.contains(1.0),
                format!("{:.4} in [{:.4}, {:.4}]", d.value, d.lo, d.hi),
            );
        }
        if self.bob.is_honest() {
            r.check(
                "known_bits_error_free",
                self.total_mismatches() == 0,
                format!("{} mismatched known bits", self.total_mismatches()),
            );
            let acc = self.retrieval_accuracy();
            r.check(
                "retrieval_always_correct",
                acc.n == 0 || acc.value == 1.0,
                format!("{} of {} retrievals correct", (acc.value * acc.n as f64).round(), acc.n),
            );
        }
        r
    }
}

/// [`monte_carlo`] followed by its report, with the wall-clock time filled in.
pub fn monte_carlo_report(
    config: &ProtocolConfig,
    alice: AliceStrategy,
    bob: BobStrategy,
    trials: usize,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mc = monte_carlo(config, alice, bob, trials)?;
    let mut r = mc.report();
    r.runtime = start.elapsed();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_order_preserving() {
        let cfg = ProtocolConfig::new(100, 2).with_seed(3);
        let a = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 40).unwrap();
        let b = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 40).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.report().to_json(), b.report().to_json());
        let single = run_trial(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 17).unwrap();
        assert_eq!(a.records[17], single);
    }

    #[test]
    fn restart_limit_counts_as_failure() {
        let mut cfg = ProtocolConfig::new(2, 9).with_seed(1);
        cfg.max_restarts = 0;
        let mc = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 20).unwrap();
        assert!(mc.restart_limit_hits() > 15);
        assert!(mc.failure_rate().value > 0.75);
    }

    #[test]
    fn honest_small_run_passes_checks() {
        let cfg = ProtocolConfig::new(200, 2).with_seed(11);
        let r = monte_carlo(&cfg, AliceStrategy::Honest, BobStrategy::Honest, 300).unwrap().report();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.analytic["n_bar"], 12.5);
    }

    #[test]
    fn expected_rates() {
        let sarg = ProtocolConfig::default();
        let bb84 = ProtocolConfig {
            announcement: AnnouncementMode::Bb84,
            ..ProtocolConfig::default()
        };
        assert_eq!(expected_conclusive_rate(&sarg, AliceStrategy::Honest, BobStrategy::Honest), Some(0.25));
        assert_eq!(expected_conclusive_rate(&bb84, AliceStrategy::Bb84Memory, BobStrategy::Honest), Some(1.0));
        assert_eq!(expected_conclusive_rate(&sarg, AliceStrategy::JointHelstrom, BobStrategy::Honest), None);
    }
}
