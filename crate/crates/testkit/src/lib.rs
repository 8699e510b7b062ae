//! Independent oracles and reference solvers backing the test suites.
//!
//! Everything in this crate is deliberately written against the *problem
//! statement*, not against the solver implementation it checks: grid
//! searches, finite differences, a cyclic Jacobi eigensolver, plain
//! proximal-gradient reference loops, and a brute-force portfolio solver
//! built on projected gradient over a capped simplex. Slow and simple wins
//! here.

pub mod eigen;
pub mod fd;
pub mod grid;
pub mod instances;
pub mod qp;
pub mod refsolve;
