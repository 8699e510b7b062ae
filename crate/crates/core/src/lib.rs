//! Matrix-free first-order solver for constrained composite optimization.
//!
//! This crate solves problems of the form
//!
//! ```text
//!     minimize  f(x) + g(x)    subject to    c(x) ∈ D
//! ```
//!
//! where `f` and `c` are smooth, `g` is merely lower semicontinuous (it may
//! be discontinuous and take the value +∞, e.g. the ℓ0 quasi-norm plus a box
//! indicator) and `D` is a closed, possibly nonconvex and disconnected set.
//! Only first-order oracles are required: cost value and gradient, one
//! proximal point of `g` together with its `g`-value, constraint values,
//! Jacobian-transpose products `∇c(x)ᵀv`, and projections onto `D`. No
//! Jacobian is ever formed.
//!
//! The outer loop ([`alm`]) is a safeguarded augmented Lagrangian scheme on
//! the slack-lifted reformulation `c(x) − s = 0, s ∈ D`. Each subproblem is
//! an unconstrained composite problem solved by an adaptive proximal-gradient
//! method with optional L-BFGS acceleration ([`panoc`]).
//!
//! Module map:
//!
//! * [`problem`] — the problem abstraction and its oracle contract;
//! * [`prox`] — proximal operators and set projections with documented
//!   tie-breaking;
//! * [`smallalg`] — small dense linear algebra: one-sided Jacobi SVD,
//!   numerical rank, L-BFGS two-loop recursion;
//! * [`panoc`] — the inner solver for unconstrained composite problems;
//! * [`alm`] — the safeguarded augmented Lagrangian outer loop;
//! * [`problems`] — benchmark problem constructors, seeded instance
//!   generators and a plain-text portfolio instance format;
//! * [`rng`] — the deterministic generator behind every seeded instance.

pub mod alm;
pub mod error;
pub mod mat;
pub mod panoc;
pub mod problem;
pub mod problems;
pub mod prox;
pub mod rng;
pub mod smallalg;
pub mod vecmath;

pub use alm::{alm_solve, AlmOptions, AlmReport, AlmStatus, AlmTraceRow};
pub use error::SolverError;
pub use mat::Mat;
pub use panoc::{
    panoc_solve, Acceleration, CompositeProblem, PanocCounters, PanocExit, PanocOptions,
    PanocOutcome, PanocTraceRow,
};
pub use problem::{Problem, ProblemBuilder, Residuals};
pub use prox::sets::ConstraintSet;
pub use rng::SplitMix64;
pub use smallalg::{LbfgsMemory, SvdResult};
