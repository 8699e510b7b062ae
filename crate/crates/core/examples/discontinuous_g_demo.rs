//! Demo (no assertions): with a merely lower-semicontinuous `g`, the outer
//! iterates can approach a point that is not stationary in any limiting
//! sense — here the global *maximizer* of the problem
//!
//! ```text
//!   minimize g(x)  s.t.  x ∈ (-∞, 0],    g(x) = x for x ≤ 0, 1 − x otherwise
//! ```
//!
//! whose iterates may converge to 0 from the right along the discontinuity,
//! so the cost values q(x^k) do not converge to q(0). Which path is taken
//! depends on the stationary point the inner solver lands on, so nothing
//! here is asserted; the run is printed for inspection.

use slalom::alm::{alm_solve, AlmOptions};
use slalom::problem::Problem;
use slalom::prox::sets::ConstraintSet;

fn g_value(x: f64) -> f64 {
    if x <= 0.0 {
        x
    } else {
        1.0 - x
    }
}

/// Exact scalar prox of the two-branch g: compare the branch minimizers.
fn g_prox(x: f64, gamma: f64) -> f64 {
    let za = (x - gamma).min(0.0);
    let cost_a = gamma * g_value(za) + 0.5 * (za - x) * (za - x);
    let zb = x + gamma;
    if zb > 0.0 {
        let cost_b = gamma * g_value(zb) + 0.5 * (zb - x) * (zb - x);
        if cost_b < cost_a {
            return zb;
        }
    }
    za
}

fn main() {
    let problem = Problem::builder(1, 1)
        .nonsmooth(
            |x, gamma| {
                let z = g_prox(x[0], gamma);
                Ok((vec![z], g_value(z)))
            },
            |x| g_value(x[0]),
        )
        .constraints(|x| x.to_vec(), |_, v| v.to_vec())
        .set(ConstraintSet::Box {
            lo: vec![f64::NEG_INFINITY],
            hi: vec![0.0],
        })
        .build();

    // Effectively unsafeguarded-at-zero multipliers and a gentle penalty
    // schedule, mirroring the setting in which the pathology shows up. The
    // subproblems are unbounded below along the negative branch, so inner
    // iterations are capped: when the subsolver escapes that way the demo
    // simply shows a different path.
    let mut opts = AlmOptions {
        y_max: 1e-300,
        theta: 0.25,
        kappa_mu: 0.5,
        max_outer: 12,
        ..Default::default()
    };
    opts.inner.max_iter = 20_000;
    let report = alm_solve(&problem, &[1.0], &[0.0], &opts, None).unwrap();
    println!("status: {:?}", report.status);
    println!(
        "final x = {:+.6e}, g(x) = {:+.6e}",
        report.x[0],
        g_value(report.x[0])
    );
    println!("(g is discontinuous at 0: q(0) = 0 but q(0+) → 1)");
    println!("k   infeas        q(x^k)");
    for row in &report.trace {
        println!("{:2}  {:11.4e}  {:+.6}", row.k, row.infeas, row.q);
    }
}
