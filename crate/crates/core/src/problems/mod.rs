//! Benchmark problem constructors and seeded instance generators.
//!
//! Three problem families are provided: a two-dimensional nonsmooth
//! Rosenbrock-type problem with a disjunctive (either-or) constraint, sparse
//! portfolio selection with cardinality-type regularizers, and Euclidean
//! distance matrix completion with spectral (low-rank) regularizers.
//! Generators are deterministic in their seed, and portfolio instances have
//! a plain-text file format ([`io`]).

pub mod io;
pub mod matrix_completion;
pub mod portfolio;
pub mod rosenbrock;

pub use io::{parse_portfolio, portfolio_to_string, read_portfolio_file, write_portfolio_file};
pub use matrix_completion::{
    gen_matrix_completion, matrix_completion_problem, MatrixCompletionInstance, MatrixReg,
};
pub use portfolio::{gen_portfolio, portfolio_problem, PortfolioInstance, PortfolioReg};
pub use rosenbrock::rosenbrock_problem;
