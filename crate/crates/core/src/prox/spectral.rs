//! Proximal operators of unitarily invariant matrix regularizers.
//!
//! The prox of `rank`, the nuclear norm, or the Schatten p-quasi-norm is the
//! matrix rebuilt after applying the matching scalar rule to the singular
//! values: hard threshold, soft threshold, or the `|·|^p` prox. The SVD
//! factor pair is not unique for repeated singular values; any valid pair
//! gives the same objective value, which is what the tests compare.

use crate::error::SolverError;
use crate::mat::Mat;
use crate::prox::scalar;
use crate::smallalg::{numerical_rank, svd_dense};

/// Unitarily invariant matrix regularizer `g(A) = weight · h(σ(A))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralReg {
    /// `weight · rank(A)`.
    Rank { weight: f64 },
    /// `weight · Σᵢ σᵢ(A)` (nuclear norm).
    Nuclear { weight: f64 },
    /// `weight · Σᵢ σᵢ(A)^p`, `p ∈ (0, 1)`.
    Schatten { weight: f64, p: f64 },
}

impl SpectralReg {
    fn scalar_prox(&self, sigma: &[f64], gamma: f64) -> Result<Vec<f64>, SolverError> {
        match *self {
            SpectralReg::Rank { weight } => Ok(scalar::prox_l0(sigma, gamma, weight)),
            SpectralReg::Nuclear { weight } => Ok(scalar::prox_l1(sigma, gamma * weight)),
            SpectralReg::Schatten { weight, p } => scalar::prox_lp_p(sigma, gamma * weight, p),
        }
    }

    /// Regularizer value from a singular-value vector.
    pub fn value_from_sigma(&self, sigma: &[f64], dims: (usize, usize)) -> f64 {
        match *self {
            SpectralReg::Rank { weight } => weight * numerical_rank(sigma, dims) as f64,
            SpectralReg::Nuclear { weight } => weight * sigma.iter().sum::<f64>(),
            SpectralReg::Schatten { weight, p } => {
                weight * sigma.iter().map(|s| s.powf(p)).sum::<f64>()
            }
        }
    }
}

/// One element of `prox_{γg}(A)` together with `g` at that point.
pub fn spectral_prox(a: &Mat, reg: SpectralReg, gamma: f64) -> Result<(Mat, f64), SolverError> {
    debug_assert!(gamma > 0.0);
    let svd = svd_dense(a)?;
    let shrunk = reg.scalar_prox(&svd.sigma, gamma)?;
    let value = reg.value_from_sigma(&shrunk, (a.rows(), a.cols()));
    Ok((svd.recompose(&shrunk), value))
}

/// `g(A)` via a fresh SVD.
pub fn spectral_value(a: &Mat, reg: SpectralReg) -> Result<f64, SolverError> {
    let svd = svd_dense(a)?;
    Ok(reg.value_from_sigma(&svd.sigma, (a.rows(), a.cols())))
}
