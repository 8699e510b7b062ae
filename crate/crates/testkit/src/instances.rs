//! Seeded composite test instances shared by the invariants suites.

use slalom::panoc::CompositeProblem;
use slalom::prox::{CoordRule, SeparableProx};
use slalom::rng::SplitMix64;
use slalom::Mat;

/// Random least squares plus ℓ1: `½‖Az − b‖² + λ‖z‖₁` with `A` rows×cols.
pub fn lasso(
    seed: u64,
    rows: usize,
    cols: usize,
    lambda: f64,
) -> (CompositeProblem<'static>, Mat, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let a = Mat::from_fn(rows, cols, |_, _| {
        rng.next_gaussian() / (rows as f64).sqrt()
    });
    let b: Vec<f64> = rng.gaussian_vec(rows);
    let g = SeparableProx::uniform(CoordRule::Abs { weight: lambda }, cols);
    let g2 = g.clone();
    let (a1, a2, b1, b2) = (a.clone(), a.clone(), b.clone(), b.clone());
    let problem = CompositeProblem::new(
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
    );
    (problem, a, b)
}

/// A family of 1- to 5-dimensional composite instances mixing convex and
/// nonconvex smooth parts with ℓ1 / box / cardinality nonsmooth parts.
/// `which` selects the flavor; instances are deterministic in `seed`.
pub fn seeded_composite(seed: u64, which: usize) -> (CompositeProblem<'static>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed.wrapping_mul(0x9E37_79B9).wrapping_add(which as u64));
    match which % 4 {
        0 => {
            // convex quadratic + l1
            let p = 4;
            let diag: Vec<f64> = (0..p).map(|_| rng.uniform(0.5, 8.0)).collect();
            let lin: Vec<f64> = (0..p).map(|_| rng.uniform(-2.0, 2.0)).collect();
            let (d2, l2) = (diag.clone(), lin.clone());
            let g = SeparableProx::uniform(CoordRule::Abs { weight: 0.3 }, p);
            let g2 = g.clone();
            let problem = CompositeProblem::new(
                p,
                move |z| {
                    0.5 * z
                        .iter()
                        .zip(&diag)
                        .map(|(zi, di)| di * zi * zi)
                        .sum::<f64>()
                        + z.iter().zip(&lin).map(|(zi, li)| li * zi).sum::<f64>()
                },
                move |z| {
                    z.iter()
                        .zip(&d2)
                        .zip(&l2)
                        .map(|((zi, di), li)| di * zi + li)
                        .collect()
                },
                move |z, gamma| g.prox(z, gamma),
                move |z| g2.value(z),
            );
            let z0 = (0..p).map(|_| rng.uniform(-3.0, 3.0)).collect();
            (problem, z0)
        }
        1 => {
            // nonconvex quartic well + box indicator
            let p = 3;
            let shift: Vec<f64> = (0..p).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let s2 = shift.clone();
            let problem = CompositeProblem::new(
                p,
                move |z| {
                    z.iter()
                        .zip(&shift)
                        .map(|(zi, si)| {
                            let t = zi - si;
                            0.25 * t * t * t * t - 0.5 * t * t
                        })
                        .sum::<f64>()
                },
                move |z| {
                    z.iter()
                        .zip(&s2)
                        .map(|(zi, si)| {
                            let t = zi - si;
                            t * t * t - t
                        })
                        .collect()
                },
                |z, _| {
                    Ok((
                        z.iter().map(|zi| zi.clamp(-2.0, 2.0)).collect::<Vec<f64>>(),
                        0.0,
                    ))
                },
                |z| {
                    if z.iter().all(|zi| (-2.0..=2.0).contains(zi)) {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                },
            );
            let z0 = (0..p).map(|_| rng.uniform(-2.0, 2.0)).collect();
            (problem, z0)
        }
        2 => {
            // ill-conditioned quadratic + cardinality
            let p = 5;
            let diag: Vec<f64> = (0..p).map(|i| 10f64.powi(i as i32 % 3)).collect();
            let d2 = diag.clone();
            let g = SeparableProx::uniform(CoordRule::Card { weight: 0.05 }, p);
            let g2 = g.clone();
            let target: Vec<f64> = (0..p).map(|_| rng.uniform(-1.5, 1.5)).collect();
            let t2 = target.clone();
            let problem = CompositeProblem::new(
                p,
                move |z| {
                    0.5 * z
                        .iter()
                        .zip(&diag)
                        .zip(&target)
                        .map(|((zi, di), ti)| di * (zi - ti) * (zi - ti))
                        .sum::<f64>()
                },
                move |z| {
                    z.iter()
                        .zip(&d2)
                        .zip(&t2)
                        .map(|((zi, di), ti)| di * (zi - ti))
                        .collect()
                },
                move |z, gamma| g.prox(z, gamma),
                move |z| g2.value(z),
            );
            let z0 = (0..p).map(|_| rng.uniform(-2.0, 2.0)).collect();
            (problem, z0)
        }
        _ => {
            // small lasso
            let (problem, _, _) = lasso(seed ^ 0xABCD, 8, 12, 0.2);
            let mut rng2 = SplitMix64::new(seed ^ 0x77);
            let z0 = (0..12).map(|_| rng2.uniform(-1.0, 1.0)).collect();
            (problem, z0)
        }
    }
}
