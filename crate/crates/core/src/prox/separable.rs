//! Per-coordinate nonsmooth terms bundled into one reusable operator.
//!
//! A [`SeparableProx`] assigns one scalar rule to every coordinate, so the
//! prox of the sum is the concatenation of scalar proxes. This is the `g`
//! oracle vehicle used by the benchmark problems: an absolute value on one
//! coordinate, a cardinality term plus box on all of them, and so on.

use crate::error::SolverError;
use crate::prox::scalar;

/// Scalar nonsmooth term attached to a single coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum CoordRule {
    /// No contribution: prox is the identity.
    Identity,
    /// `w·|z|`.
    Abs { weight: f64 },
    /// `w·[z ≠ 0]`.
    Card { weight: f64 },
    /// `w·|z|^p`, `p ∈ (0, 1)`.
    Power { weight: f64, p: f64 },
    /// `w·|z| + ι_[lo,hi]`.
    AbsBox { weight: f64, lo: f64, hi: f64 },
    /// `w·[z ≠ 0] + ι_[lo,hi]`, `lo ≤ 0 ≤ hi`.
    CardBox { weight: f64, lo: f64, hi: f64 },
    /// `w·|z|^p + ι_[lo,hi]`, `lo ≤ 0 ≤ hi`.
    PowerBox {
        weight: f64,
        p: f64,
        lo: f64,
        hi: f64,
    },
}

impl CoordRule {
    fn prox(&self, x: f64, gamma: f64) -> Result<f64, SolverError> {
        Ok(match self {
            CoordRule::Identity => x,
            CoordRule::Abs { weight } => scalar::soft_threshold(x, gamma * weight),
            CoordRule::Card { weight } => scalar::prox_l0(&[x], gamma, *weight)[0],
            CoordRule::Power { weight, p } => scalar::prox_lp_p(&[x], gamma * weight, *p)?[0],
            CoordRule::AbsBox { weight, lo, hi } => {
                scalar::prox_l1_box(&[x], gamma, *weight, &[*lo], &[*hi])[0]
            }
            CoordRule::CardBox { weight, lo, hi } => {
                scalar::prox_l0_box(&[x], gamma, *weight, &[*lo], &[*hi])?[0]
            }
            CoordRule::PowerBox { weight, p, lo, hi } => {
                scalar::prox_lp_p_box(&[x], gamma, *weight, *p, &[*lo], &[*hi])?[0]
            }
        })
    }

    fn value(&self, z: f64) -> f64 {
        match self {
            CoordRule::Identity => 0.0,
            CoordRule::Abs { weight } => weight * z.abs(),
            CoordRule::Card { weight } => {
                if z != 0.0 {
                    *weight
                } else {
                    0.0
                }
            }
            CoordRule::Power { weight, p } => weight * z.abs().powf(*p),
            CoordRule::AbsBox { weight, lo, hi } => {
                if z < *lo || z > *hi {
                    f64::INFINITY
                } else {
                    weight * z.abs()
                }
            }
            CoordRule::CardBox { weight, lo, hi } => {
                if z < *lo || z > *hi {
                    f64::INFINITY
                } else if z != 0.0 {
                    *weight
                } else {
                    0.0
                }
            }
            CoordRule::PowerBox { weight, p, lo, hi } => {
                if z < *lo || z > *hi {
                    f64::INFINITY
                } else {
                    weight * z.abs().powf(*p)
                }
            }
        }
    }
}

/// Separable nonsmooth cost `g(z) = Σᵢ gᵢ(zᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableProx {
    rules: Vec<CoordRule>,
}

impl SeparableProx {
    pub fn new(rules: Vec<CoordRule>) -> Self {
        SeparableProx { rules }
    }

    /// Same rule on every coordinate.
    pub fn uniform(rule: CoordRule, dim: usize) -> Self {
        SeparableProx {
            rules: vec![rule; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rules.len()
    }

    /// One proximal point and the `g`-value attained there.
    pub fn prox(&self, x: &[f64], gamma: f64) -> Result<(Vec<f64>, f64), SolverError> {
        assert_eq!(x.len(), self.rules.len(), "separable prox dimension");
        let mut z = Vec::with_capacity(x.len());
        let mut value = 0.0;
        for (rule, &xi) in self.rules.iter().zip(x) {
            let zi = rule.prox(xi, gamma)?;
            value += rule.value(zi);
            z.push(zi);
        }
        Ok((z, value))
    }

    /// Extended-real value `g(z)`.
    pub fn value(&self, z: &[f64]) -> f64 {
        assert_eq!(z.len(), self.rules.len(), "separable value dimension");
        self.rules
            .iter()
            .zip(z)
            .map(|(rule, &zi)| rule.value(zi))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_depends_only_on_own_coordinate() {
        let g = SeparableProx::new(vec![
            CoordRule::Abs { weight: 1.0 },
            CoordRule::Identity,
            CoordRule::Card { weight: 0.5 },
        ]);
        let (z, _) = g.prox(&[3.0, -7.0, 0.4], 1.0).unwrap();
        assert_eq!(z, vec![2.0, -7.0, 0.0]);
        let (z2, _) = g.prox(&[3.0, 100.0, 0.4], 1.0).unwrap();
        assert_eq!(z2[0], z[0]);
        assert_eq!(z2[2], z[2]);
    }

    #[test]
    fn value_pairs_with_prox_point() {
        let g = SeparableProx::uniform(CoordRule::Abs { weight: 2.0 }, 2);
        let (z, v) = g.prox(&[5.0, -1.0], 1.0).unwrap();
        assert_eq!(z, vec![3.0, 0.0]);
        assert_eq!(v, 6.0);
        assert_eq!(g.value(&z), v);
    }

    #[test]
    fn indicator_values_are_extended_real() {
        let g = SeparableProx::uniform(
            CoordRule::AbsBox {
                weight: 0.0,
                lo: 0.0,
                hi: 1.0,
            },
            1,
        );
        assert_eq!(g.value(&[0.5]), 0.0);
        assert_eq!(g.value(&[2.0]), f64::INFINITY);
    }
}
