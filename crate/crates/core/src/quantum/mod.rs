//! Exact real-amplitude qubit kernel: states, projective measurements and
//! two-state discrimination measures.

pub mod density;
pub mod discrimination;
pub mod linalg;
pub mod measure;
pub mod parity;
pub mod state;

use std::f64::consts::FRAC_PI_8;

pub use density::DensityMatrix;
pub use discrimination::{fidelity, helstrom_guess, trace_distance, trace_norm, usd_bound, UsdBound};
pub use linalg::{symmetric_eigen, symmetric_eigenvalues, RealMatrix, SymmetricEigen};
pub use measure::{measure, measure_qubit, sample_index, Measurable, MeasurementBasis};
pub use parity::{joint_helstrom_closed_form, parity_mixtures, ParityBlocks, DENSE_K_MAX, JOINT_K_MAX};
pub use state::PureState;

use crate::protocol::SargSymbol;

/// Hilbert angle of `|↗⟩`, halfway between `|↑⟩` and `|→⟩`.
pub const NORTH_EAST: f64 = FRAC_PI_8;
/// Hilbert angle of `|↙⟩`, orthogonal to `|↗⟩`.
pub const SOUTH_WEST: f64 = 5.0 * FRAC_PI_8;

/// Single-qubit state for a protocol symbol.
pub fn sarg_state(symbol: SargSymbol) -> PureState {
    PureState::from_angle(symbol.angle())
}

/// Conditional register state after a conclusive result: `diag(½, ½)`.
pub fn rho_conclusive() -> DensityMatrix {
    DensityMatrix::from_matrix_unchecked(RealMatrix::identity(2).scaled(0.5))
}

/// Conditional register state after an inconclusive result.
pub fn rho_inconclusive() -> DensityMatrix {
    let off = 2f64.sqrt() / 3.0;
    DensityMatrix::from_matrix_unchecked(RealMatrix::from_fn(2, |r, c| if r == c { 0.5 } else { off }))
}
