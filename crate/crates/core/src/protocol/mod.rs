//! The honest private-query protocol: raw-key generation over a lossy channel,
//! pair announcements, interpretation, XOR reduction and shifted encryption.

pub mod engine;
pub mod key;
pub mod symbols;

pub use engine::{
    alice_measure, bob_announce, bob_prepare, generate_raw_key, interpret, interpret_bb84, run_protocol,
    run_protocol_with, transmit, AnnouncementMode, AttemptSummary, ClassicalMessage, Phase, Preparation,
    ProtocolConfig, RawKey, Round, RoundOutcome, Transcript,
};
pub use key::{cyclic_shift, decrypt_bit, encrypt_database, query_shift, reduce_key, ObliviousKey};
pub use symbols::{AnnouncedPair, Announcement, Basis, Interpretation, SargSymbol};
