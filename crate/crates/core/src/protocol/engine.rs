//! The two-party protocol as a sequence of explicit phases.
//!
//! A run moves `Preparing → Reducing → Querying → Answering → Done`, looping
//! back to `Preparing` on a restart. Each qubit goes through one
//! [`Round`]: Bob prepares, the channel may lose it, Alice measures or stores
//! it, Bob announces, Alice interprets. Only classical messages cross between
//! the parties' private state; they are logged in the transcript.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::key::{decrypt_bit, encrypt_database, query_shift, reduce_key, ObliviousKey};
use super::symbols::{AnnouncedPair, Announcement, Basis, Interpretation, SargSymbol};
use crate::adversaries::{self, AliceStrategy, BobStrategy, RegisterMode};
use crate::error::{Error, Result};
use crate::quantum::{measure, measure_qubit, sarg_state, MeasurementBasis, PureState};
use crate::rng;

/// What Bob announces for each detected qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnouncementMode {
    /// Sent state plus one adjacent state from the other basis.
    #[default]
    Sarg,
    /// The preparation basis (contrast mode, BB84 bit coding).
    Bb84,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProtocolConfig {
    /// Database size.
    pub n: usize,
    /// Number of raw substrings XORed into the final key.
    pub k: usize,
    /// Detection probability per qubit.
    pub eta: f64,
    pub max_restarts: usize,
    pub seed: u64,
    pub announcement: AnnouncementMode,
    /// Keep the per-qubit records of the final attempt.
    pub record_qubits: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            k: 4,
            eta: 1.0,
            max_restarts: 20,
            seed: 0,
            announcement: AnnouncementMode::Sarg,
            record_qubits: false,
        }
    }
}

impl ProtocolConfig {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta = {} outside (0, 1]", self.eta)));
        }
        self.n
            .checked_mul(self.k)
            .ok_or_else(|| Error::InvalidParameter("k·N overflows".into()))?;
        Ok(())
    }

    pub fn raw_len(&self) -> usize {
        self.n * self.k
    }
}

/// Uniform over the four symbols.
pub fn bob_prepare<R: Rng + ?Sized>(rng: &mut R) -> SargSymbol {
    SargSymbol::from_index(rng.random_range(0..4))
}

/// Loss model: detected with probability `eta`, independent of the state.
pub fn transmit<R: Rng + ?Sized>(_symbol: SargSymbol, eta: f64, rng: &mut R) -> bool {
    eta >= 1.0 || rng.random_bool(eta)
}

/// Random basis choice followed by a Born-rule measurement.
pub fn alice_measure<R: Rng + ?Sized>(symbol: SargSymbol, rng: &mut R) -> (Basis, SargSymbol) {
    let basis = random_basis(rng);
    let mb = MeasurementBasis::from_angle(basis.angle());
    let idx = measure(&sarg_state(symbol), &mb, rng).expect("single-qubit basis");
    (basis, basis.member(idx))
}

/// Sent symbol plus one of its two neighbours from the other basis.
pub fn bob_announce<R: Rng + ?Sized>(sent: SargSymbol, rng: &mut R) -> AnnouncedPair {
    if rng.random_bool(0.5) {
        AnnouncedPair::starting_at(sent)
    } else {
        AnnouncedPair::starting_at(SargSymbol::from_index(sent.index() + 3))
    }
}

/// Alice's honest interpretation of a measurement against an announced pair.
///
/// An outcome orthogonal to one member rules it out. Otherwise the posterior
/// follows from Bayes with a uniform prior over the pair.
pub fn interpret(basis: Basis, outcome: SargSymbol, pair: AnnouncedPair) -> Result<Interpretation> {
    if outcome.basis() != basis {
        return Err(Error::OutcomeNotInBasis { outcome, basis });
    }
    let [a, b] = pair.members();
    if outcome.orthogonal() == a {
        return Ok(Interpretation::Conclusive { bit: b.bit() });
    }
    if outcome.orthogonal() == b {
        return Ok(Interpretation::Conclusive { bit: a.bit() });
    }
    let (la, lb) = (outcome.overlap_sq(a), outcome.overlap_sq(b));
    let p_one = if a.bit() == 1 { la } else { lb } / (la + lb);
    Ok(Interpretation::Inconclusive { p_one })
}

/// Interpretation when Bob reveals the preparation basis (BB84 coding).
pub fn interpret_bb84(basis: Basis, outcome: SargSymbol, announced: Basis) -> Result<Interpretation> {
    if outcome.basis() != basis {
        return Err(Error::OutcomeNotInBasis { outcome, basis });
    }
    Ok(if basis == announced {
        Interpretation::Conclusive { bit: outcome.bb84_bit() }
    } else {
        Interpretation::Inconclusive { p_one: 0.5 }
    })
}

fn random_basis<R: Rng + ?Sized>(rng: &mut R) -> Basis {
    if rng.random_bool(0.5) {
        Basis::Diagonal
    } else {
        Basis::Rectilinear
    }
}

/// What Bob put on the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preparation {
    Symbol(SargSymbol),
    /// Single-qubit state at a Hilbert angle.
    Angle(f64),
    /// Alice's half of an entangled state built on this pair.
    Entangled(AnnouncedPair),
}

/// Full record of one qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundOutcome {
    pub prepared: Preparation,
    pub detected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alice_basis: Option<Basis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<SargSymbol>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub announcement: Option<Announcement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<Interpretation>,
    /// Bob's raw key bit (his best guess under an attack).
    pub bob_bit: u8,
    /// Bob's prediction that Alice's result is conclusive.
    pub bob_flags_conclusive: bool,
    /// Bob's register right after Alice's measurement (entangled attack only).
    #[serde(skip)]
    pub register: Option<PureState>,
}

impl RoundOutcome {
    /// Basis Bob would infer for Alice from his bit guess, assuming a conclusive result.
    ///
    /// A conclusive bit `b` rules out the member carrying `1 − b`, which requires
    /// measuring in the basis of that member.
    pub fn bob_basis_guess(&self) -> Basis {
        Basis::from_sarg_bit(1 - self.bob_bit)
    }
}

/// Per-qubit simulator for a fixed pair of strategies.
#[derive(Debug, Clone)]
pub struct Round {
    alice: AliceStrategy,
    bob: BobStrategy,
    eta: f64,
    mode: AnnouncementMode,
    symbol_states: [PureState; 4],
    entangled_states: [PureState; 4],
    alice_bases: [MeasurementBasis; 2],
    register_bases: [MeasurementBasis; 2],
}

impl Round {
    pub fn new(alice: AliceStrategy, bob: BobStrategy, eta: f64, mode: AnnouncementMode) -> Result<Self> {
        bob.validate()?;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta = {eta} outside (0, 1]")));
        }
        match (alice, bob, mode) {
            (AliceStrategy::JointHelstrom, _, _) => {
                return Err(Error::UnsupportedStrategy(
                    "joint Helstrom guesses are not certain bits; use adversaries::joint_helstrom_trials".into(),
                ))
            }
            (AliceStrategy::IndividualUsd | AliceStrategy::Bb84Memory, b, _) if !b.is_honest() => {
                return Err(Error::UnsupportedStrategy(format!("{alice} against a dishonest Bob ({b})")))
            }
            (_, b, AnnouncementMode::Bb84) if !b.is_honest() => {
                return Err(Error::UnsupportedStrategy(format!("{b} with BB84 announcements")))
            }
            _ => {}
        }
        Ok(Self {
            alice,
            bob,
            eta,
            mode,
            symbol_states: SargSymbol::ALL.map(sarg_state),
            entangled_states: AnnouncedPair::all().map(adversaries::entangled_pair_state),
            alice_bases: Basis::BOTH.map(|b| MeasurementBasis::from_angle(b.angle())),
            register_bases: [
                MeasurementBasis::from_angle(0.0),
                MeasurementBasis::from_angle(std::f64::consts::FRAC_PI_4),
            ],
        })
    }

    pub fn alice(&self) -> AliceStrategy {
        self.alice
    }

    pub fn bob(&self) -> BobStrategy {
        self.bob
    }

    fn alice_basis(&self, basis: Basis) -> &MeasurementBasis {
        &self.alice_bases[basis as usize]
    }

    /// Simulates one qubit from preparation through interpretation.
    pub fn play<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<RoundOutcome> {
        // Bob prepares.
        let (prepared, joint) = match self.bob {
            BobStrategy::Honest => {
                let s = bob_prepare(rng);
                (Preparation::Symbol(s), self.symbol_states[s.index()].clone())
            }
            BobStrategy::BiasedState { phi } => (Preparation::Angle(phi), PureState::from_angle(phi)),
            BobStrategy::EntangledRegister { .. } => {
                let pair = AnnouncedPair::all()[rng.random_range(0..4)];
                (Preparation::Entangled(pair), self.entangled_states[pair.index()].clone())
            }
        };
        let sent_symbol = match prepared {
            Preparation::Symbol(s) => Some(s),
            _ => None,
        };

        let mut out = RoundOutcome {
            prepared,
            detected: false,
            alice_basis: None,
            outcome: None,
            announcement: None,
            interpretation: None,
            bob_bit: 0,
            bob_flags_conclusive: true,
            register: None,
        };

        out.detected = transmit(sent_symbol.unwrap_or(SargSymbol::Up), self.eta, rng);
        if !out.detected {
            return Ok(out);
        }

        // Alice measures now (honest) or stores the qubit (memory attacks).
        if self.alice == AliceStrategy::Honest {
            let basis = random_basis(rng);
            let mb = self.alice_basis(basis);
            let idx = if joint.num_qubits() == 1 {
                measure(&joint, mb, rng)?
            } else {
                let (idx, register) = measure_qubit(&joint, 0, mb, rng)?;
                out.register = Some(register);
                idx
            };
            out.alice_basis = Some(basis);
            out.outcome = Some(basis.member(idx));
        }

        // Bob announces.
        let announcement = match (self.mode, self.bob, prepared) {
            (AnnouncementMode::Bb84, _, Preparation::Symbol(s)) => Announcement::Basis(s.basis()),
            (_, BobStrategy::Honest, Preparation::Symbol(s)) => Announcement::Pair(bob_announce(s, rng)),
            (_, _, Preparation::Entangled(pair)) => Announcement::Pair(pair),
            _ => Announcement::Pair(AnnouncedPair::CANONICAL),
        };
        out.announcement = Some(announcement);

        // Alice interprets.
        let interpretation = match (self.alice, announcement) {
            (AliceStrategy::Honest, Announcement::Pair(pair)) => {
                interpret(out.alice_basis.expect("measured"), out.outcome.expect("measured"), pair)?
            }
            (AliceStrategy::Honest, Announcement::Basis(b)) => {
                interpret_bb84(out.alice_basis.expect("measured"), out.outcome.expect("measured"), b)?
            }
            (AliceStrategy::Bb84Memory, Announcement::Basis(b)) => {
                let idx = measure(&joint, self.alice_basis(b), rng)?;
                let outcome = b.member(idx);
                out.alice_basis = Some(b);
                out.outcome = Some(outcome);
                interpret_bb84(b, outcome, b)?
            }
            (AliceStrategy::IndividualUsd | AliceStrategy::Bb84Memory, Announcement::Pair(pair)) => {
                let sent = sent_symbol.expect("memory attacks require an honest Bob");
                adversaries::alice_usd_interpret(pair, sent, rng)?
            }
            (AliceStrategy::IndividualUsd, Announcement::Basis(b)) => {
                // The basis is public: measuring in it is already unambiguous.
                let idx = measure(&joint, self.alice_basis(b), rng)?;
                interpret_bb84(b, b.member(idx), b)?
            }
            (AliceStrategy::JointHelstrom, _) => unreachable!("rejected in Round::new"),
        };
        out.interpretation = Some(interpretation);

        // Bob fixes his raw bit.
        match (self.bob, prepared) {
            (BobStrategy::Honest, Preparation::Symbol(s)) => {
                out.bob_bit = match self.mode {
                    AnnouncementMode::Sarg => s.bit(),
                    AnnouncementMode::Bb84 => s.bb84_bit(),
                };
            }
            (BobStrategy::BiasedState { phi }, _) => {
                out.bob_bit = adversaries::biased_bit_guess(phi);
            }
            (BobStrategy::EntangledRegister { mode }, Preparation::Entangled(pair)) => {
                let register = out.register.as_ref().expect("honest Alice measured");
                // Bob reads outcome r as "member r was sent" in either basis. In the
                // rotated basis that guess carries no bit information; outcome
                // `(R₀ − R₁)/√2` is his conclusiveness flag.
                let r = measure(register, &self.register_bases[mode as usize], rng)?;
                out.bob_bit = pair.members()[r].bit();
                out.bob_flags_conclusive = mode == RegisterMode::HonestBasis || r == 1;
            }
            _ => unreachable!("preparation matches strategy"),
        }
        Ok(out)
    }
}

/// Raw material of one key-generation attempt.
#[derive(Debug, Clone)]
pub struct RawKey {
    pub bob_bits: Vec<u8>,
    pub interpretations: Vec<Interpretation>,
    /// Qubits sent, including lost ones.
    pub sent: usize,
    /// Kept qubits with a conclusive interpretation.
    pub conclusive: usize,
    pub records: Option<Vec<RoundOutcome>>,
}

/// Plays rounds until `kept` qubits have been detected.
pub fn generate_raw_key<R: Rng + ?Sized>(round: &Round, kept: usize, record: bool, rng: &mut R) -> Result<RawKey> {
    let mut raw = RawKey {
        bob_bits: Vec::with_capacity(kept),
        interpretations: Vec::with_capacity(kept),
        sent: 0,
        conclusive: 0,
        records: record.then(Vec::new),
    };
    while raw.bob_bits.len() < kept {
        let out = round.play(rng)?;
        raw.sent += 1;
        if let Some(interp) = out.interpretation {
            raw.conclusive += interp.is_conclusive() as usize;
            raw.bob_bits.push(out.bob_bit);
            raw.interpretations.push(interp);
        }
        if let Some(records) = raw.records.as_mut() {
            records.push(out);
        }
    }
    Ok(raw)
}

/// Phase of a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Preparing,
    Reducing,
    Querying,
    Answering,
    Done,
}

/// Classical messages exchanged during a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "msg", rename_all = "snake_case")]
pub enum ClassicalMessage {
    /// Alice → Bob: which qubits were detected.
    Detections { attempt: usize, sent: usize, detected: usize },
    /// Bob → Alice: one pair or basis per detected qubit.
    Announcements { attempt: usize, count: usize },
    /// Alice → Bob: no known bit, start over.
    Restart { attempt: usize },
    /// Alice → Bob: the shift `s`.
    Shift { s: usize },
    /// Bob → Alice: the encrypted database.
    Ciphertext { len: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptSummary {
    pub sent: usize,
    pub conclusive: usize,
    pub known: usize,
}

/// Everything observable about one completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub config: ProtocolConfig,
    pub alice: AliceStrategy,
    pub bob: BobStrategy,
    pub attempts: Vec<AttemptSummary>,
    pub messages: Vec<ClassicalMessage>,
    pub key: ObliviousKey,
    pub target: usize,
    pub chosen_j: usize,
    pub shift: usize,
    pub ciphertext: Vec<u8>,
    pub retrieved_bit: u8,
    pub database_bit: u8,
    /// Per-qubit records of the final attempt, when requested.
    pub records: Option<Vec<RoundOutcome>>,
}

impl Transcript {
    pub fn restarts(&self) -> usize {
        self.attempts.len().saturating_sub(1)
    }

    pub fn is_correct(&self) -> bool {
        self.retrieved_bit == self.database_bit
    }

    /// JSON document; per-qubit records and the ciphertext only when `verbose`.
    pub fn to_json(&self, verbose: bool) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc<'a> {
            config: &'a ProtocolConfig,
            alice_strategy: AliceStrategy,
            bob_strategy: BobStrategy,
            restarts: usize,
            attempts: &'a [AttemptSummary],
            known_indices: Vec<usize>,
            target: usize,
            chosen_j: usize,
            shift: usize,
            retrieved_bit: u8,
            database_bit: u8,
            correct: bool,
            messages: &'a [ClassicalMessage],
            #[serde(skip_serializing_if = "Option::is_none")]
            ciphertext: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            records: Option<&'a [RoundOutcome]>,
        }
        let doc = Doc {
            config: &self.config,
            alice_strategy: self.alice,
            bob_strategy: self.bob,
            restarts: self.restarts(),
            attempts: &self.attempts,
            known_indices: self.key.known_indices(),
            target: self.target,
            chosen_j: self.chosen_j,
            shift: self.shift,
            retrieved_bit: self.retrieved_bit,
            database_bit: self.database_bit,
            correct: self.is_correct(),
            messages: &self.messages,
            ciphertext: verbose.then(|| bits_to_string(&self.ciphertext)),
            records: if verbose { self.records.as_deref() } else { None },
        };
        serde_json::to_value(doc).expect("transcript is serializable")
    }
}

pub fn bits_to_string(bits: &[u8]) -> String {
    bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}

/// Runs the protocol on the config's own stream `(seed, 0)`.
pub fn run_protocol(
    config: &ProtocolConfig,
    database: &[u8],
    target: usize,
    alice: AliceStrategy,
    bob: BobStrategy,
) -> Result<Transcript> {
    let mut rng = rng::stream(config.seed, 0);
    run_protocol_with(config, database, target, alice, bob, &mut rng)
}

/// Runs the protocol on a caller-supplied stream.
pub fn run_protocol_with<R: Rng + ?Sized>(
    config: &ProtocolConfig,
    database: &[u8],
    target: usize,
    alice: AliceStrategy,
    bob: BobStrategy,
    rng: &mut R,
) -> Result<Transcript> {
    config.validate()?;
    if database.len() != config.n {
        return Err(Error::LengthMismatch {
            expected: config.n,
            actual: database.len(),
        });
    }
    if database.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParameter("database entries must be 0 or 1".into()));
    }
    if target >= config.n {
        return Err(Error::InvalidParameter(format!("target {target} outside [0, {})", config.n)));
    }
    let round = Round::new(alice, bob, config.eta, config.announcement)?;

    let mut phase = Phase::Preparing;
    let mut attempts = Vec::new();
    let mut messages = Vec::new();
    let mut raw: Option<RawKey> = None;
    let mut key: Option<ObliviousKey> = None;
    let mut query: Option<(usize, usize)> = None;
    let mut ciphertext = Vec::new();

    loop {
        phase = match phase {
            Phase::Preparing => {
                let attempt = attempts.len();
                let generated = generate_raw_key(&round, config.raw_len(), config.record_qubits, rng)?;
                messages.push(ClassicalMessage::Detections {
                    attempt,
                    sent: generated.sent,
                    detected: generated.bob_bits.len(),
                });
                messages.push(ClassicalMessage::Announcements {
                    attempt,
                    count: generated.bob_bits.len(),
                });
                raw = Some(generated);
                Phase::Reducing
            }
            Phase::Reducing => {
                let r = raw.as_ref().expect("raw key generated");
                let reduced = reduce_key(&r.bob_bits, &r.interpretations, config.n, config.k)?;
                attempts.push(AttemptSummary {
                    sent: r.sent,
                    conclusive: r.conclusive,
                    known: reduced.known_count(),
                });
                if reduced.alice_known.is_empty() {
                    if attempts.len() > config.max_restarts {
                        return Err(Error::RestartLimitExceeded {
                            attempts: attempts.len(),
                        });
                    }
                    messages.push(ClassicalMessage::Restart {
                        attempt: attempts.len() - 1,
                    });
                    Phase::Preparing
                } else {
                    key = Some(reduced);
                    Phase::Querying
                }
            }
            Phase::Querying => {
                let (j, s) = query_shift(key.as_ref().expect("key reduced"), target, rng)?;
                messages.push(ClassicalMessage::Shift { s });
                query = Some((j, s));
                Phase::Answering
            }
            Phase::Answering => {
                let (_, s) = query.expect("shift announced");
                ciphertext = encrypt_database(database, &key.as_ref().expect("key reduced").bob_key, s)?;
                messages.push(ClassicalMessage::Ciphertext { len: ciphertext.len() });
                Phase::Done
            }
            Phase::Done => break,
        };
    }

    let key = key.expect("run completed");
    let (chosen_j, shift) = query.expect("run completed");
    let retrieved_bit = decrypt_bit(&ciphertext, target, key.alice_known[&chosen_j]);
    Ok(Transcript {
        config: config.clone(),
        alice,
        bob,
        attempts,
        messages,
        target,
        chosen_j,
        shift,
        retrieved_bit,
        database_bit: database[target],
        ciphertext,
        records: raw.and_then(|r| r.records),
        key,
    })
}
