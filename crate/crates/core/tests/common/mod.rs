#![allow(dead_code)]

use qpq_core::protocol::{Round, RoundOutcome};
use qpq_core::{Interpretation, Result};
use rand::Rng;

/// Number of categories produced by [`alice_view`].
pub const ALICE_VIEW_CATEGORIES: usize = 16;

/// Alice's local view of a detected qubit: basis, outcome and interpretation.
pub fn alice_view(out: &RoundOutcome) -> usize {
    let basis = out.alice_basis.expect("measured") as usize;
    let outcome = out.outcome.expect("measured").index() / 2;
    let interp = match out.interpretation.expect("interpreted") {
        Interpretation::Conclusive { bit } => bit as usize,
        Interpretation::Inconclusive { p_one } if p_one > 0.5 => 2,
        Interpretation::Inconclusive { .. } => 3,
    };
    (basis * 2 + outcome) * 4 + interp
}

/// Histogram of Alice's view over `detected` kept qubits.
pub fn alice_view_histogram<R: Rng>(round: &Round, detected: usize, rng: &mut R) -> Result<Vec<u64>> {
    let mut hist = vec![0u64; ALICE_VIEW_CATEGORIES];
    let mut kept = 0;
    while kept < detected {
        let out = round.play(rng)?;
        if out.detected {
            hist[alice_view(&out)] += 1;
            kept += 1;
        }
    }
    Ok(hist)
}
