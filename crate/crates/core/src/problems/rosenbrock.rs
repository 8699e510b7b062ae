//! Nonsmooth Rosenbrock-type problem with an either-or constraint:
//!
//! ```text
//!   minimize  10·(x₂ + 1 − (x₁ + 1)²)² + |x₁|
//!   s.t.      x₂ ≤ −x₁  ∨  x₂ ≥ x₁
//! ```
//!
//! The disjunction is encoded as `c(x) = (−x₁−x₂, −x₁+x₂) ∈ D` with `D` the
//! union of the two half-planes `{a ≥ 0} ∪ {b ≥ 0}`. The unique global
//! minimizer is the origin.

use crate::problem::Problem;
use crate::prox::sets::ConstraintSet;
use crate::prox::{CoordRule, SeparableProx};

pub fn rosenbrock_problem() -> Problem {
    let g = SeparableProx::new(vec![CoordRule::Abs { weight: 1.0 }, CoordRule::Identity]);
    Problem::builder(2, 2)
        .smooth(
            |x| {
                let t = x[1] + 1.0 - (x[0] + 1.0) * (x[0] + 1.0);
                10.0 * t * t
            },
            |x| {
                let t = x[1] + 1.0 - (x[0] + 1.0) * (x[0] + 1.0);
                vec![-40.0 * t * (x[0] + 1.0), 20.0 * t]
            },
        )
        .nonsmooth_separable(g)
        .constraints(
            |x| vec![-x[0] - x[1], -x[0] + x[1]],
            // constant Jacobian [[-1, -1], [-1, 1]]
            |_, v| vec![-v[0] - v[1], -v[0] + v[1]],
        )
        .set(ConstraintSet::EitherOr)
        .build()
}
