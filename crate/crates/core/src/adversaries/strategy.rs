use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How Alice treats the qubits she receives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AliceStrategy {
    /// Measure immediately in a random basis, interpret after the announcement.
    #[default]
    Honest,
    /// Store each qubit and apply the optimal unambiguous discrimination of the announced pair.
    IndividualUsd,
    /// Store all qubits and guess each final-key bit with the minimum-error joint measurement.
    JointHelstrom,
    /// Store each qubit and measure in the announced basis (BB84 announcements),
    /// falling back to unambiguous discrimination against SARG pair announcements.
    Bb84Memory,
}

/// Which basis Bob measures his register in after Alice has accepted a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegisterMode {
    /// `{|R₀⟩, |R₁⟩}`: recovers the sent bit.
    HonestBasis,
    /// `{(|R₀⟩ ± |R₁⟩)/√2}`: Helstrom measurement for conclusiveness.
    ConclusivenessBasis,
}

/// How Bob prepares qubits.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BobStrategy {
    #[default]
    Honest,
    /// Send the state at Hilbert angle `phi` while announcing `{↑, →}`.
    BiasedState { phi: f64 },
    /// Send half of `(|a⟩|R₀⟩ + |b⟩|R₁⟩)/√2` and keep the register.
    EntangledRegister { mode: RegisterMode },
}

impl BobStrategy {
    pub fn biased(phi: f64) -> Result<Self> {
        let s = BobStrategy::BiasedState { phi };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BobStrategy::BiasedState { phi } if !(0.0..PI).contains(&phi) => {
                Err(Error::InvalidParameter(format!("phi = {phi} outside [0, π)")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_honest(&self) -> bool {
        matches!(self, BobStrategy::Honest)
    }
}

impl fmt::Display for AliceStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AliceStrategy::Honest => "honest",
            AliceStrategy::IndividualUsd => "individual-usd",
            AliceStrategy::JointHelstrom => "joint-helstrom",
            AliceStrategy::Bb84Memory => "bb84-memory",
        })
    }
}

impl fmt::Display for BobStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BobStrategy::Honest => f.write_str("honest"),
            BobStrategy::BiasedState { phi } => write!(f, "biased(phi={phi:.6})"),
            BobStrategy::EntangledRegister { mode: RegisterMode::HonestBasis } => {
                f.write_str("entangled(honest-basis)")
            }
            BobStrategy::EntangledRegister {
                mode: RegisterMode::ConclusivenessBasis,
            } => f.write_str("entangled(conclusiveness-basis)"),
        }
    }
}
