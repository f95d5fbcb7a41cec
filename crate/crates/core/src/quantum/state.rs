use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;

/// Real amplitude vector of an `m`-qubit pure state.
///
/// One- and two-qubit states stay inline, which keeps the per-qubit protocol
/// loop free of heap traffic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: SmallVec<[f64; 4]>,
}

impl PureState {
    /// Validates length (power of two) and unit norm.
    pub fn new(amplitudes: impl Into<Vec<f64>>) -> Result<Self> {
        let amplitudes: Vec<f64> = amplitudes.into();
        check_len(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: SmallVec::from_vec(amplitudes),
        })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: impl Into<Vec<f64>>) -> Result<Self> {
        let mut amplitudes: Vec<f64> = amplitudes.into();
        check_len(amplitudes.len())?;
        let norm = norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self {
            amplitudes: SmallVec::from_vec(amplitudes),
        })
    }

    /// Single-qubit state `cos(a)|0⟩ + sin(a)|1⟩` at Hilbert angle `a`.
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            amplitudes: SmallVec::from_slice(&[c, s]),
        }
    }

    /// Computational basis state `|index⟩` on `qubits` qubits.
    pub fn basis_state(qubits: usize, index: usize) -> Self {
        let mut amplitudes = SmallVec::from_elem(0.0, 1 << qubits);
        amplitudes[index] = 1.0;
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(dot(&self.amplitudes, &other.amplitudes))
    }

    /// `|self⟩ ⊗ |other⟩`, with `self` as the most significant qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = SmallVec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            for &b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    /// Superposition `Σ wᵢ|ψᵢ⟩`, renormalized.
    pub fn superpose(terms: &[(f64, &PureState)]) -> Result<Self> {
        let dim = terms.first().map(|(_, s)| s.dim()).unwrap_or(0);
        let mut acc = vec![0.0; dim];
        for (w, s) in terms {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch(dim, s.dim()));
            }
            for (a, b) in acc.iter_mut().zip(s.amplitudes.iter()) {
                *a += w * b;
            }
        }
        Self::normalized(acc)
    }

    pub(crate) fn from_raw(amplitudes: SmallVec<[f64; 4]>) -> Self {
        Self { amplitudes }
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
