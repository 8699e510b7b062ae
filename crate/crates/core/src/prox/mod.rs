//! Proximal operators and set projections.
//!
//! Every operator here is an exact global minimizer of its scalar
//! subproblem, with a deterministic, documented tie-breaking rule: ties are
//! always resolved toward the sparser candidate (zero) for proximal
//! operators, and toward the lexicographically earlier piece for projections
//! onto unions. Set-valuedness never leaks out of this module.

pub mod scalar;
pub mod separable;
pub mod sets;
pub mod spectral;

pub use scalar::{prox_l0, prox_l0_box, prox_l1, prox_l1_box, prox_lp_p, prox_lp_p_box};
pub use separable::{CoordRule, SeparableProx};
pub use sets::{proj_box, proj_either_or, proj_interval_union, proj_product, ConstraintSet};
pub use spectral::{spectral_prox, spectral_value, SpectralReg};
