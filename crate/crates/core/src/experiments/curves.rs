use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::parity::JOINT_K_MAX;
use crate::quantum::ParityBlocks;

/// Bounds for distinguishing even from odd parity of `k` stored qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsdPoint {
    pub k: usize,
    /// `1 − F(ρ_even, ρ_odd)`, an upper bound on unambiguous discrimination.
    pub bound: f64,
    pub feasible: bool,
    pub trace_distance: f64,
    pub helstrom_guess: f64,
}

pub fn usd_curve(k_max: usize) -> Result<Vec<UsdPoint>> {
    if k_max == 0 || k_max > JOINT_K_MAX {
        return Err(Error::KOutOfRange { k: k_max, max: JOINT_K_MAX });
    }
    (1..=k_max)
        .map(|k| {
            let blocks = ParityBlocks::new(k)?;
            let usd = blocks.usd_bound();
            Ok(UsdPoint {
                k,
                bound: usd.bound,
                feasible: usd.feasible,
                trace_distance: blocks.trace_distance(),
                helstrom_guess: blocks.helstrom_guess(0.5)?,
            })
        })
        .collect()
}

/// Smallest drop between consecutive points that counts as a decrease.
pub const DECREASE_MARGIN: f64 = 1e-12;

/// Indices `k` at which the bound fails to drop below its predecessor by more than [`DECREASE_MARGIN`].
pub fn non_decreasing_steps(points: &[UsdPoint]) -> Vec<usize> {
    points
        .windows(2)
        .filter(|w| w[1].bound > w[0].bound - DECREASE_MARGIN)
        .map(|w| w[1].k)
        .collect()
}

pub fn usd_curve_csv(points: &[UsdPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    w.write_record(["k", "usd_bound", "feasible", "trace_distance", "helstrom_guess"])
        .map_err(ser)?;
    for p in points {
        w.write_record([
            p.k.to_string(),
            format!("{:.12}", p.bound),
            p.feasible.to_string(),
            format!("{:.12}", p.trace_distance),
            format!("{:.12}", p.helstrom_guess),
        ])
        .map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
}
