//! Exact simulation of a SARG04-based quantum private query: the honest
//! protocol, attacks by either party and the statistics that bound them.
//!
//! ```
//! use qpq_core::{run_protocol, AliceStrategy, BobStrategy, ProtocolConfig};
//!
//! let config = ProtocolConfig::new(64, 2).with_seed(1);
//! let db: Vec<u8> = (0..64).map(|i| (i % 5 == 0) as u8).collect();
//! let t = run_protocol(&config, &db, 10, AliceStrategy::Honest, BobStrategy::Honest).unwrap();
//! assert_eq!(t.retrieved_bit, db[10]);
//! ```

pub mod adversaries;
pub mod error;
pub mod experiments;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod stats;

pub use adversaries::{AliceStrategy, AttackReport, BobStrategy, RegisterMode};
pub use error::{Error, Result};
pub use experiments::{ExperimentReport, KeyStats};
pub use protocol::{
    run_protocol, AnnouncedPair, AnnouncementMode, Basis, Interpretation, ObliviousKey, ProtocolConfig, SargSymbol,
    Transcript,
};
pub use quantum::{DensityMatrix, MeasurementBasis, PureState};
