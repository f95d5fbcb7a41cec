use super::linalg::{symmetric_eigen, symmetric_eigenvalues, RealMatrix, SymmetricEigen};
use super::state::PureState;
use crate::error::{Error, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[-CLIP, 0)` are treated as round-off and clipped to zero.
pub const EIGEN_CLIP: f64 = 1e-10;

/// Real symmetric, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: RealMatrix,
}

impl DensityMatrix {
    /// Validates symmetry, trace and positivity.
    pub fn new(matrix: RealMatrix) -> Result<Self> {
        let asym = matrix.max_asymmetry();
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::NotSymmetric(asym));
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidTrace(trace));
        }
        if let Some(&min) = symmetric_eigenvalues(&matrix)?.first() {
            if min < -EIGEN_CLIP {
                return Err(Error::NegativeEigenvalue(min));
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(state: &PureState) -> Self {
        Self {
            matrix: RealMatrix::outer(state.amplitudes()),
        }
    }

    /// Convex combination `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`; weights must be nonnegative and sum to 1.
    pub fn mixture(terms: &[(f64, &PureState)]) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut matrix = RealMatrix::zeros(dim);
        let mut total = 0.0;
        for (w, s) in terms {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch(dim, s.dim()));
            }
            if !(0.0..=1.0).contains(w) {
                return Err(Error::InvalidProbability(*w));
            }
            total += w;
            matrix.add_outer(s.amplitudes(), *w);
        }
        if (total - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidTrace(total));
        }
        Ok(Self { matrix })
    }

    /// For constructions that are valid by convexity.
    pub(crate) fn from_matrix_unchecked(matrix: RealMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        symmetric_eigenvalues(&self.matrix)
    }

    pub(crate) fn eigen(&self) -> Result<SymmetricEigen> {
        symmetric_eigen(&self.matrix)
    }
}

/// Maps tiny negative round-off to zero and rejects genuinely negative values.
pub(crate) fn clip_eigenvalue(lambda: f64) -> Result<f64> {
    if lambda >= 0.0 {
        Ok(lambda)
    } else if lambda >= -EIGEN_CLIP {
        Ok(0.0)
    } else {
        Err(Error::NegativeEigenvalue(lambda))
    }
}
