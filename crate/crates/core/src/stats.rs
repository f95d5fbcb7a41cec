//! Confidence intervals and the few hypothesis tests the experiments need.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sided 99% standard normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// A point estimate with a 99% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub n: u64,
}

impl Estimate {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Binomial proportion with a normal interval, or Wilson's when fewer than
/// ten successes or failures make the normal approximation unreliable.
pub fn proportion(successes: u64, trials: u64) -> Estimate {
    if trials == 0 {
        return Estimate { value: f64::NAN, lo: 0.0, hi: 1.0, n: 0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let (lo, hi) = if successes < 10 || trials - successes < 10 {
        wilson(p, n, Z99)
    } else {
        let h = Z99 * (p * (1.0 - p) / n).sqrt();
        (p - h, p + h)
    };
    Estimate { value: p, lo: lo.max(0.0), hi: hi.min(1.0), n: trials }
}

fn wilson(p: f64, n: f64, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let h = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (centre - h, centre + h)
}

/// `|observed − expected|` in units of the binomial σ under `expected`.
pub fn sigma_distance(successes: u64, trials: u64, expected: f64) -> f64 {
    let n = trials as f64;
    let sd = (expected * (1.0 - expected) / n).sqrt();
    let diff = successes as f64 / n - expected;
    if sd == 0.0 {
        if diff == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        diff.abs() / sd
    }
}

/// Sample mean with a normal 99% interval.
pub fn mean(samples: &[f64]) -> Estimate {
    let n = samples.len() as f64;
    let m = samples.iter().sum::<f64>() / n;
    let h = Z99 * (sample_variance(samples, m) / n).sqrt();
    Estimate { value: m, lo: m - h, hi: m + h, n: samples.len() as u64 }
}

fn sample_variance(samples: &[f64], m: f64) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (samples.len() - 1) as f64
}

/// Variance-to-mean ratio of counts with the exact interval under a Poisson
/// null: `(n − 1)·s²/x̄` is approximately χ² with `n − 1` degrees of freedom.
pub fn dispersion_index(counts: &[f64]) -> Estimate {
    let n = counts.len();
    let m = counts.iter().sum::<f64>() / n as f64;
    let d = sample_variance(counts, m) / m;
    let dof = (n.max(2) - 1) as f64;
    let chi = ChiSquared::new(dof).expect("positive degrees of freedom");
    let lo = d * dof / chi.inverse_cdf(0.995);
    let hi = d * dof / chi.inverse_cdf(0.005);
    Estimate { value: d, lo, hi, n: n as u64 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson homogeneity test for two histograms over the same categories.
/// Categories empty in both samples are dropped.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> ChiSquareTest {
    assert_eq!(a.len(), b.len(), "histograms must share categories");
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let total = na + nb;
    let mut statistic = 0.0;
    let mut used = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        used += 1;
        for (obs, row) in [(x as f64, na), (y as f64, nb)] {
            let e = row * col / total;
            statistic += (obs - e).powi(2) / e;
        }
    }
    let dof = used.saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("dof ≥ 1").cdf(statistic)
    };
    ChiSquareTest { statistic, dof, p_value }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_interval_width() {
        let e = proportion(500, 1000);
        assert!((e.half_width() - Z99 * (0.25f64 / 1000.0).sqrt()).abs() < 1e-12);
        assert!(e.contains(0.5));
    }

    #[test]
    fn wilson_near_boundary() {
        let e = proportion(0, 100);
        assert_eq!(e.lo, 0.0);
        // Wilson upper limit for 0/100 at 99%: z²/(n + z²).
        let z2 = Z99 * Z99;
        assert!((e.hi - z2 / (100.0 + z2)).abs() < 1e-12);
        assert!(proportion(100, 100).contains(1.0));
    }

    #[test]
    fn sigma_distance_examples() {
        assert!((sigma_distance(530, 1000, 0.5) - 0.03 / (0.25f64 / 1000.0).sqrt()).abs() < 1e-12);
        assert_eq!(sigma_distance(10, 10, 1.0), 0.0);
        assert!(sigma_distance(9, 10, 1.0).is_infinite());
    }

    #[test]
    fn dispersion_of_constant_counts_is_zero() {
        let d = dispersion_index(&[3.0; 50]);
        assert_eq!(d.value, 0.0);
        assert!(!d.contains(1.0));
    }

    #[test]
    fn chi_square_identical_histograms() {
        let t = chi_square_homogeneity(&[10, 20, 0, 30], &[20, 40, 0, 60]);
        assert!(t.statistic.abs() < 1e-12);
        assert_eq!(t.dof, 2);
        assert!((t.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_square_2x2_hand_value() {
        // Rows (30, 10) and (10, 30): expected 20 everywhere, statistic 4·100/20 = 20.
        let t = chi_square_homogeneity(&[30, 10], &[10, 30]);
        assert!((t.statistic - 20.0).abs() < 1e-12);
        assert!(t.p_value < 1e-4);
    }
}
