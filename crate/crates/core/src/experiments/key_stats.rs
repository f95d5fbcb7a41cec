use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Expected number of known final bits and the failure probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyStats {
    pub n: usize,
    pub k: usize,
    pub p_conclusive: f64,
    pub n_bar: f64,
    /// Probability that Alice knows no final bit.
    pub p0: f64,
    pub poisson_approx: f64,
}

pub fn key_stats(n: usize, k: usize, p_conclusive: f64) -> Result<KeyStats> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter("N and k must be at least 1".into()));
    }
    if !(p_conclusive > 0.0 && p_conclusive <= 1.0) {
        return Err(Error::InvalidProbability(p_conclusive));
    }
    let q = p_conclusive.powi(k as i32);
    let n_bar = n as f64 * q;
    let p0 = if q >= 1.0 { 0.0 } else { (n as f64 * (-q).ln_1p()).exp() };
    Ok(KeyStats {
        n,
        k,
        p_conclusive,
        n_bar,
        p0,
        poisson_approx: (-n_bar).exp(),
    })
}

/// `(N, k)` of the six worked parameter choices.
pub const TABLE1_PARAMETERS: [(usize, usize); 6] =
    [(1_000, 4), (5_000, 5), (10_000, 6), (50_000, 7), (100_000, 7), (1_000_000, 9)];

/// Published `(P₀, n̄)` for [`TABLE1_PARAMETERS`], at three and two decimals.
pub const TABLE1_PRINTED: [(&str, &str); 6] = [
    ("0.020", "3.91"),
    ("0.008", "4.88"),
    ("0.087", "2.44"),
    ("0.047", "3.05"),
    ("0.002", "6.10"),
    ("0.022", "3.81"),
];

pub fn table1() -> Vec<KeyStats> {
    TABLE1_PARAMETERS
        .iter()
        .map(|&(n, k)| key_stats(n, k, 0.25).expect("valid parameters"))
        .collect()
}

/// `(P₀, n̄)` rounded to the printed precision.
pub fn printed(stats: &KeyStats) -> (String, String) {
    (format!("{:.3}", stats.p0), format!("{:.2}", stats.n_bar))
}
