//! Two-state discrimination figures of merit: trace distance, fidelity, the
//! minimum-error (Helstrom) success probability and the unambiguous
//! discrimination bound.

use serde::{Deserialize, Serialize};

use super::density::{clip_eigenvalue, DensityMatrix, EIGEN_CLIP};
use super::linalg::{symmetric_eigenvalues, RealMatrix};
use crate::error::{Error, Result};

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(())
}

/// Sum of absolute eigenvalues of a symmetric matrix.
pub fn trace_norm(m: &RealMatrix) -> Result<f64> {
    Ok(symmetric_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

/// `D(a, b) = ½ ‖a − b‖₁`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let diff = a.matrix().combine(1.0, b.matrix(), -1.0)?;
    Ok((0.5 * trace_norm(&diff)?).clamp(0.0, 1.0))
}

/// Eigenvalues at or below this are treated as round-off when forming a support.
const SUPPORT_FLOOR: f64 = 1e-14;

/// Root fidelity `F(a, b) = tr √(√a b √a)`; equals `|⟨ψ|φ⟩|` on pure states.
///
/// Computed as the sum of singular values of `√a √b` restricted to the two
/// supports, read off the symmetric matrix `[[0, X], [Xᵀ, 0]]` whose eigenvalues
/// are `±σᵢ`. Squaring first would turn round-off in zero singular values into
/// errors of order `√ε`.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let wa = scaled_support(a)?;
    let wb = scaled_support(b)?;
    let (ra, rb) = (wa.len(), wb.len());
    let aug = RealMatrix::from_fn(ra + rb, |r, c| match (r < ra, c < ra) {
        (true, false) => dot(&wa[r], &wb[c - ra]),
        (false, true) => dot(&wa[c], &wb[r - ra]),
        _ => 0.0,
    });
    Ok((0.5 * trace_norm(&aug)?).clamp(0.0, 1.0))
}

/// Columns `√λⱼ vⱼ` over the eigenpairs of `rho` above [`SUPPORT_FLOOR`].
fn scaled_support(rho: &DensityMatrix) -> Result<Vec<Vec<f64>>> {
    let eig = rho.eigen()?;
    let mut columns = Vec::new();
    for (j, &lambda) in eig.values.iter().enumerate() {
        let lambda = clip_eigenvalue(lambda)?;
        if lambda > SUPPORT_FLOOR {
            let root = lambda.sqrt();
            columns.push(eig.vector(j).into_iter().map(|x| x * root).collect());
        }
    }
    Ok(columns)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Optimal probability of correctly identifying `a` (prior `prior_a`) versus `b`.
pub fn helstrom_guess(a: &DensityMatrix, b: &DensityMatrix, prior_a: f64) -> Result<f64> {
    check_dims(a, b)?;
    if !(0.0..=1.0).contains(&prior_a) {
        return Err(Error::InvalidProbability(prior_a));
    }
    let weighted = a.matrix().combine(prior_a, b.matrix(), -(1.0 - prior_a))?;
    let guess = 0.5 * (1.0 + trace_norm(&weighted)?);
    // Never below the prior guess; the clamp only removes round-off.
    Ok(guess.clamp(prior_a.max(1.0 - prior_a), 1.0))
}

/// Unambiguous-discrimination bound for equal priors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UsdBound {
    /// `1 − F(a, b)`
    pub bound: f64,
    /// Both states have support outside the other's support.
    pub feasible: bool,
}

pub fn usd_bound(a: &DensityMatrix, b: &DensityMatrix) -> Result<UsdBound> {
    check_dims(a, b)?;
    let bound = 1.0 - fidelity(a, b)?;
    let feasible = weight_outside_support(a, b)? > EIGEN_CLIP && weight_outside_support(b, a)? > EIGEN_CLIP;
    Ok(UsdBound { bound, feasible })
}

/// `tr[(1 − P_supp(b)) a]`: the weight of `a` in the kernel of `b`.
fn weight_outside_support(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let eig = b.eigen()?;
    let mut weight = 0.0;
    for (j, &lambda) in eig.values.iter().enumerate() {
        if lambda <= EIGEN_CLIP {
            weight += a.matrix().quadratic_form(&eig.vector(j));
        }
    }
    Ok(weight)
}
