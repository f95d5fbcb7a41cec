//! Projective measurements and Born-rule sampling.

use rand::Rng;
use smallvec::SmallVec;

use super::density::DensityMatrix;
use super::state::{dot, PureState};
use crate::error::{Error, Result};

const ORTHO_TOLERANCE: f64 = 1e-12;
const SUM_TOLERANCE: f64 = 1e-9;

/// Orthonormal basis of projectors `|bᵢ⟩⟨bᵢ|` spanning the state space.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    vectors: Vec<PureState>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<PureState>) -> Result<Self> {
        let dim = vectors.first().map(PureState::dim).unwrap_or(0);
        if vectors.len() != dim {
            return Err(Error::InvalidBasis(format!(
                "{} vectors cannot span dimension {dim}",
                vectors.len()
            )));
        }
        for (i, a) in vectors.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch(dim, a.dim()));
            }
            for b in &vectors[i + 1..] {
                let overlap = dot(a.amplitudes(), b.amplitudes());
                if overlap.abs() > ORTHO_TOLERANCE {
                    return Err(Error::InvalidBasis(format!("overlap {overlap:e} between members")));
                }
            }
        }
        Ok(Self { vectors })
    }

    /// Single-qubit basis `{|a⟩, |a + π/2⟩}`.
    pub fn from_angle(angle: f64) -> Self {
        Self {
            vectors: vec![
                PureState::from_angle(angle),
                PureState::from_angle(angle + std::f64::consts::FRAC_PI_2),
            ],
        }
    }

    pub fn computational(qubits: usize) -> Self {
        Self {
            vectors: (0..1 << qubits).map(|i| PureState::basis_state(qubits, i)).collect(),
        }
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Anything that assigns Born-rule probabilities to the outcomes of a basis.
pub trait Measurable {
    fn dim(&self) -> usize;

    fn outcome_probabilities(&self, basis: &MeasurementBasis) -> Result<SmallVec<[f64; 4]>>;
}

impl Measurable for PureState {
    fn dim(&self) -> usize {
        PureState::dim(self)
    }

    fn outcome_probabilities(&self, basis: &MeasurementBasis) -> Result<SmallVec<[f64; 4]>> {
        check_dims(self.dim(), basis)?;
        Ok(basis
            .vectors
            .iter()
            .map(|b| dot(b.amplitudes(), self.amplitudes()).powi(2))
            .collect())
    }
}

impl Measurable for DensityMatrix {
    fn dim(&self) -> usize {
        DensityMatrix::dim(self)
    }

    fn outcome_probabilities(&self, basis: &MeasurementBasis) -> Result<SmallVec<[f64; 4]>> {
        check_dims(self.dim(), basis)?;
        Ok(basis
            .vectors
            .iter()
            .map(|b| self.matrix().quadratic_form(b.amplitudes()))
            .collect())
    }
}

fn check_dims(dim: usize, basis: &MeasurementBasis) -> Result<()> {
    if basis.dim() != dim {
        return Err(Error::DimensionMismatch(dim, basis.dim()));
    }
    Ok(())
}

/// Samples an outcome index with probability `⟨bᵢ|ρ|bᵢ⟩`.
///
/// Consumes exactly one `f64` from the stream.
pub fn measure<S, R>(state: &S, basis: &MeasurementBasis, rng: &mut R) -> Result<usize>
where
    S: Measurable + ?Sized,
    R: Rng + ?Sized,
{
    let probs = state.outcome_probabilities(basis)?;
    sample_index(&probs, rng)
}

/// Samples from an outcome distribution that must sum to 1 within `1e-9`.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> Result<usize> {
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE || probs.iter().any(|p| *p < -SUM_TOLERANCE) {
        return Err(Error::ProbabilitySum(total));
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p.max(0.0);
        if u < acc {
            return Ok(i);
        }
    }
    // u landed in the round-off tail: return the last outcome with nonzero weight.
    Ok(probs.iter().rposition(|p| *p > 0.0).unwrap_or(probs.len() - 1))
}

/// Measures one qubit of a multi-qubit pure state and returns the outcome together
/// with the normalized post-measurement state of the remaining qubits.
///
/// Qubit 0 is the most significant tensor factor.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &PureState,
    qubit: usize,
    basis: &MeasurementBasis,
    rng: &mut R,
) -> Result<(usize, PureState)> {
    let m = state.num_qubits();
    if qubit >= m {
        return Err(Error::InvalidParameter(format!("qubit {qubit} of a {m}-qubit state")));
    }
    check_dims(2, basis)?;
    let shift = m - 1 - qubit;
    let low_mask = (1usize << shift) - 1;
    let amps = state.amplitudes();
    let rest_dim = 1usize << (m - 1);

    let mut branches: SmallVec<[SmallVec<[f64; 4]>; 2]> = SmallVec::new();
    let mut probs: SmallVec<[f64; 4]> = SmallVec::new();
    for b in basis.vectors() {
        let b = b.amplitudes();
        let rest: SmallVec<[f64; 4]> = (0..rest_dim)
            .map(|r| {
                let high = (r & !low_mask) << 1;
                let low = r & low_mask;
                b[0] * amps[high | low] + b[1] * amps[high | (1 << shift) | low]
            })
            .collect();
        probs.push(dot(&rest, &rest));
        branches.push(rest);
    }
    let outcome = sample_index(&probs, rng)?;
    let norm = probs[outcome].sqrt();
    let mut rest = branches.swap_remove(outcome);
    rest.iter_mut().for_each(|a| *a /= norm);
    Ok((outcome, PureState::from_raw(rest)))
}
