//! Error type shared by all solver components.

use thiserror::Error;

/// Errors surfaced by oracles, operators and solvers.
///
/// Non-finite *values* of the nonsmooth cost are legal (`g(x) = +∞` encodes
/// an indicator); a NaN from any oracle is always a hard error.
#[derive(Debug, Error)]
pub enum SolverError {
    /// An oracle produced NaN. The name identifies the offending oracle.
    #[error("oracle `{oracle}` returned NaN")]
    OracleNan { oracle: &'static str },

    /// The proximal stepsize was halved below its floor. This usually means
    /// the smooth term violates the local smoothness assumptions (or an
    /// oracle is inconsistent with its gradient).
    #[error("proximal stepsize collapsed: gamma = {gamma:e} fell below {floor:e}")]
    StepsizeCollapse { gamma: f64, floor: f64 },

    /// The scalar root search inside a proximal operator did not converge.
    #[error("scalar prox root search did not converge within {max_iter} iterations")]
    RootSolveFailed { max_iter: usize },

    /// The one-sided Jacobi SVD did not reach its convergence criterion.
    #[error("Jacobi SVD did not converge within {sweeps} sweeps")]
    SvdNonConvergence { sweeps: usize },

    /// A caller violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
