//! Even/odd parity mixtures of `k` qubits, each encoding a bit as `|↑⟩` (0) or `|→⟩` (1).
//!
//! Two routes are provided. [`parity_mixtures`] builds the dense `2^k × 2^k`
//! matrices and feeds them to the generic discrimination routines.
//! [`ParityBlocks`] uses the fact that, after a fixed local rotation, both
//! mixtures are block diagonal with the same `2 × 2` blocks pairing each bit
//! string `x` with its complement `x̄`:
//!
//! ```text
//! ρ_even|block = [[d(x), c], [c, d(x̄)]]     ρ_odd|block = [[d(x), −c], [−c, d(x̄)]]
//! d(x) = 2^−k Π (1 ± 1/√2)                   c = 2^(−3k/2)
//! ```
//!
//! where the sign in `d(x)` is `+` for each zero of `x`. Every block value only
//! depends on the Hamming weight of `x`, so the structured route costs `O(k)`.

use super::density::DensityMatrix;
use super::discrimination::UsdBound;
use super::linalg::RealMatrix;
use super::state::PureState;
use crate::error::{Error, Result};

/// Largest `k` for the dense construction (two `4096 × 4096` matrices).
pub const DENSE_K_MAX: usize = 12;
/// Largest `k` for the structured construction.
pub const JOINT_K_MAX: usize = 16;

const SUPPORT_CLIP: f64 = 1e-10;

/// Dense `(ρ_even, ρ_odd)` for `1 ≤ k ≤ DENSE_K_MAX`.
pub fn parity_mixtures(k: usize) -> Result<(DensityMatrix, DensityMatrix)> {
    if k == 0 || k > DENSE_K_MAX {
        return Err(Error::KOutOfRange { k, max: DENSE_K_MAX });
    }
    let p0 = RealMatrix::outer(PureState::from_angle(0.0).amplitudes());
    let p1 = RealMatrix::outer(PureState::from_angle(std::f64::consts::FRAC_PI_4).amplitudes());
    let (mut even, mut odd) = (p0.clone(), p1.clone());
    for _ in 1..k {
        // Appending a 0 keeps the parity, appending a 1 flips it.
        let next_even = even.kron(&p0).combine(0.5, &odd.kron(&p1), 0.5)?;
        let next_odd = odd.kron(&p0).combine(0.5, &even.kron(&p1), 0.5)?;
        even = next_even;
        odd = next_odd;
    }
    Ok((
        DensityMatrix::from_matrix_unchecked(even),
        DensityMatrix::from_matrix_unchecked(odd),
    ))
}

/// `½ + ½·2^(−k/2)`: minimum-error guess of the parity of `k` qubits.
pub fn joint_helstrom_closed_form(k: usize) -> f64 {
    0.5 + 0.5 * 2f64.powf(-(k as f64) / 2.0)
}

/// Block-diagonal representation of the parity mixtures.
#[derive(Debug, Clone)]
pub struct ParityBlocks {
    k: usize,
    /// `(multiplicity, even block, odd block)` grouped by Hamming weight.
    blocks: Vec<(f64, Block, Block)>,
}

#[derive(Debug, Clone, Copy)]
struct Block {
    a: f64,
    b: f64,
    c: f64,
}

impl Block {
    fn trace(&self) -> f64 {
        self.a + self.b
    }

    fn det(&self) -> f64 {
        (self.a * self.b - self.c * self.c).max(0.0)
    }

    fn scaled_diff(&self, p: f64, other: &Block) -> Block {
        Block {
            a: p * self.a - (1.0 - p) * other.a,
            b: p * self.b - (1.0 - p) * other.b,
            c: p * self.c - (1.0 - p) * other.c,
        }
    }

    fn abs_eigen_sum(&self) -> f64 {
        let half_trace = 0.5 * (self.a + self.b);
        let radius = (0.25 * (self.a - self.b).powi(2) + self.c * self.c).sqrt();
        (half_trace + radius).abs() + (half_trace - radius).abs()
    }

    /// Unnormalized root fidelity; for `2 × 2` PSD blocks `tr√M = √(tr M + 2√det M)`.
    fn fidelity(&self, other: &Block) -> f64 {
        let tr_prod = self.a * other.a + 2.0 * self.c * other.c + self.b * other.b;
        (tr_prod + 2.0 * (self.det() * other.det()).sqrt()).max(0.0).sqrt()
    }

    /// Weight of `self` in the kernel of `other`.
    fn weight_outside(&self, other: &Block) -> f64 {
        let tr = other.trace();
        if tr <= SUPPORT_CLIP {
            return self.trace();
        }
        // Smallest eigenvalue relative to the block's scale decides the rank.
        let radius = (0.25 * (other.a - other.b).powi(2) + other.c * other.c).sqrt();
        let lambda_min = 0.5 * tr - radius;
        if lambda_min > SUPPORT_CLIP * tr {
            return 0.0;
        }
        // Kernel direction of [[a, c], [c, b]] for the eigenvalue lambda_min.
        let (x, y) = if other.c.abs() > 0.0 {
            (other.c, lambda_min - other.a)
        } else if other.a <= other.b {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        let norm2 = x * x + y * y;
        (self.a * x * x + 2.0 * self.c * x * y + self.b * y * y) / norm2
    }
}

impl ParityBlocks {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > JOINT_K_MAX {
            return Err(Error::KOutOfRange { k, max: JOINT_K_MAX });
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let scale = 2f64.powi(-(k as i32));
        let c = 2f64.powf(-1.5 * k as f64);
        let d = |ones: usize| scale * (1.0 + s).powi((k - ones) as i32) * (1.0 - s).powi(ones as i32);
        let mut blocks = Vec::with_capacity(k + 1);
        let mut binom = 1.0f64;
        for w in 0..=k {
            // Each unordered pair {x, x̄} is visited from both ends.
            let even = Block { a: d(w), b: d(k - w), c };
            let odd = Block { a: d(w), b: d(k - w), c: -c };
            blocks.push((0.5 * binom, even, odd));
            binom = binom * (k - w) as f64 / (w + 1) as f64;
        }
        Ok(Self { k, blocks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn trace_distance(&self) -> f64 {
        self.weighted_trace_norm(0.5)
    }

    pub fn helstrom_guess(&self, prior_even: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&prior_even) {
            return Err(Error::InvalidProbability(prior_even));
        }
        let guess = 0.5 * (1.0 + self.weighted_trace_norm(prior_even));
        Ok(guess.clamp(prior_even.max(1.0 - prior_even), 1.0))
    }

    pub fn fidelity(&self) -> f64 {
        self.blocks
            .iter()
            .map(|(m, e, o)| m * e.fidelity(o))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    pub fn usd_bound(&self) -> UsdBound {
        let outside_even: f64 = self.blocks.iter().map(|(m, e, o)| m * e.weight_outside(o)).sum();
        let outside_odd: f64 = self.blocks.iter().map(|(m, e, o)| m * o.weight_outside(e)).sum();
        UsdBound {
            bound: 1.0 - self.fidelity(),
            feasible: outside_even > SUPPORT_CLIP && outside_odd > SUPPORT_CLIP,
        }
    }

    /// `‖p ρ_even − (1 − p) ρ_odd‖₁`; at `p = ½` this is the trace distance.
    fn weighted_trace_norm(&self, p: f64) -> f64 {
        self.blocks
            .iter()
            .map(|(m, e, o)| m * e.scaled_diff(p, o).abs_eigen_sum())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::discrimination::{fidelity, helstrom_guess, trace_distance, usd_bound};

    /// Enumerates all 2^k bit strings and sums the product projectors directly.
    fn brute_force(k: usize) -> (RealMatrix, RealMatrix) {
        let states = [PureState::from_angle(0.0), PureState::from_angle(std::f64::consts::FRAC_PI_4)];
        let dim = 1 << k;
        let (mut even, mut odd) = (RealMatrix::zeros(dim), RealMatrix::zeros(dim));
        let w = 1.0 / (1u64 << (k - 1)) as f64;
        for bits in 0..dim {
            let mut v = states[bits >> (k - 1) & 1].clone();
            for q in 1..k {
                v = v.tensor(&states[bits >> (k - 1 - q) & 1]);
            }
            if (bits as u32).count_ones() % 2 == 0 {
                even.add_outer(v.amplitudes(), w);
            } else {
                odd.add_outer(v.amplitudes(), w);
            }
        }
        (even, odd)
    }

    #[test]
    fn dense_matches_enumeration() {
        for k in 1..=5 {
            let (e, o) = parity_mixtures(k).unwrap();
            let (be, bo) = brute_force(k);
            assert!(e.matrix().max_abs_diff(&be) < 1e-15);
            assert!(o.matrix().max_abs_diff(&bo) < 1e-15);
            assert!(DensityMatrix::new(e.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn single_qubit_is_the_candidate_pair() {
        let (e, o) = parity_mixtures(1).unwrap();
        assert_eq!(e, DensityMatrix::from_pure(&PureState::from_angle(0.0)));
        assert!(o
            .matrix()
            .max_abs_diff(DensityMatrix::from_pure(&PureState::from_angle(std::f64::consts::FRAC_PI_4)).matrix())
            < 1e-15);
    }

    #[test]
    fn k_range() {
        assert!(matches!(parity_mixtures(0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(parity_mixtures(DENSE_K_MAX + 1), Err(Error::KOutOfRange { .. })));
        assert!(ParityBlocks::new(0).is_err());
        assert!(ParityBlocks::new(JOINT_K_MAX + 1).is_err());
        assert!(ParityBlocks::new(JOINT_K_MAX).is_ok());
    }

    #[test]
    fn two_qubit_trace_distance_is_one_half() {
        let (e, o) = parity_mixtures(2).unwrap();
        assert!((trace_distance(&e, &o).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn structured_route_matches_dense_route() {
        for k in 1..=9 {
            let (e, o) = parity_mixtures(k).unwrap();
            let blocks = ParityBlocks::new(k).unwrap();
            assert!((blocks.trace_distance() - trace_distance(&e, &o).unwrap()).abs() < 1e-12, "k={k}");
            assert!((blocks.fidelity() - fidelity(&e, &o).unwrap()).abs() < 1e-12, "k={k}");
            for p in [0.2, 0.5, 0.9] {
                let dense = helstrom_guess(&e, &o, p).unwrap();
                assert!((blocks.helstrom_guess(p).unwrap() - dense).abs() < 1e-12, "k={k} p={p}");
            }
            let dense_usd = usd_bound(&e, &o).unwrap();
            let usd = blocks.usd_bound();
            assert_eq!(usd.feasible, dense_usd.feasible, "k={k}");
            assert!((usd.bound - dense_usd.bound).abs() < 1e-9);
        }
    }

    #[test]
    fn structured_trace_distance_follows_power_law() {
        for k in 1..=JOINT_K_MAX {
            let d = ParityBlocks::new(k).unwrap().trace_distance();
            assert!((d - 2f64.powf(-(k as f64) / 2.0)).abs() < 1e-12);
        }
    }
}
