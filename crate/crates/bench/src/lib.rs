//! Shared fixtures for the criterion benchmarks.

use slalom::panoc::CompositeProblem;
use slalom::prox::{CoordRule, SeparableProx};
use slalom::rng::SplitMix64;
use slalom::Mat;

/// Seeded dense matrix.
pub fn random_matrix(seed: u64, rows: usize, cols: usize) -> Mat {
    let mut rng = SplitMix64::new(seed);
    Mat::from_fn(rows, cols, |_, _| rng.next_gaussian())
}

/// Seeded least-squares-plus-ℓ1 composite problem.
pub fn lasso_problem(
    seed: u64,
    rows: usize,
    cols: usize,
    lambda: f64,
) -> CompositeProblem<'static> {
    let mut rng = SplitMix64::new(seed);
    let a = Mat::from_fn(rows, cols, |_, _| {
        rng.next_gaussian() / (rows as f64).sqrt()
    });
    let b: Vec<f64> = rng.gaussian_vec(rows);
    let g = SeparableProx::uniform(CoordRule::Abs { weight: lambda }, cols);
    let g2 = g.clone();
    let (a1, a2, b1, b2) = (a.clone(), a, b.clone(), b);
    CompositeProblem::new(
        cols,
        move |z| {
            let r: Vec<f64> = a1
                .matvec(z)
                .iter()
                .zip(&b1)
                .map(|(az, bi)| az - bi)
                .collect();
            0.5 * r.iter().map(|v| v * v).sum::<f64>()
        },
        move |z| {
            let mut r = a2.matvec(z);
            for (ri, bi) in r.iter_mut().zip(&b2) {
                *ri -= bi;
            }
            a2.matvec_t(&r)
        },
        move |z, gamma| g.prox(z, gamma),
        move |z| g2.value(z),
    )
}
