//! Grid-search oracle checks for the proximal operators and projections.
//!
//! Every scalar prox must attain the minimum of its objective
//! `γ·g(z) + ½(z − x)²` up to grid resolution; every projection must be at
//! least as close as any sampled member of the set.

use slalom::prox::{prox_l0, prox_l0_box, prox_l1, prox_lp_p, prox_lp_p_box, ConstraintSet};
use slalom::rng::SplitMix64;
use slalom::vecmath::dist;
use slalom_testkit::grid::{grid_min, GridProxOracle};

const GAMMAS: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

fn check_scalar_prox(
    name: &str,
    g: impl Fn(f64) -> f64 + Copy,
    prox: impl Fn(f64, f64) -> f64,
    inputs: usize,
    tol: f64,
) {
    let mut rng = SplitMix64::new(0xC0FFEE);
    let xs: Vec<f64> = (0..inputs).map(|_| rng.uniform(-10.0, 10.0)).collect();
    for &gamma in &GAMMAS {
        let oracle = GridProxOracle::new(g, gamma, -10.0, 10.0, 1e-4);
        for &x in &xs {
            let z = prox(x, gamma);
            let obj = gamma * g(z) + 0.5 * (z - x) * (z - x);
            let (_, best) = oracle.min_for(x);
            assert!(
                obj <= best + tol,
                "{name}: γ={gamma}, x={x}: prox obj {obj} vs grid {best}"
            );
        }
    }
}

#[test]
fn l1_matches_grid() {
    check_scalar_prox(
        "l1",
        |z| z.abs(),
        |x, gamma| prox_l1(&[x], gamma)[0],
        1000,
        1e-6,
    );
}

#[test]
fn l0_matches_grid() {
    let sigma = 0.8;
    check_scalar_prox(
        "l0",
        move |z| if z != 0.0 { sigma } else { 0.0 },
        move |x, gamma| prox_l0(&[x], gamma, sigma)[0],
        1000,
        1e-6,
    );
}

#[test]
fn l0_box_matches_grid() {
    let (alpha, lo, hi) = (0.7, -1.5, 2.0);
    check_scalar_prox(
        "l0+box",
        move |z| {
            if z < lo || z > hi {
                f64::INFINITY
            } else if z != 0.0 {
                alpha
            } else {
                0.0
            }
        },
        move |x, gamma| prox_l0_box(&[x], gamma, alpha, &[lo], &[hi]).unwrap()[0],
        1000,
        1e-6,
    );
}

#[test]
fn lp_matches_grid_for_three_exponents() {
    for p in [0.3, 0.5, 0.7] {
        check_scalar_prox(
            "lp^p",
            move |z| z.abs().powf(p),
            move |x, gamma| prox_lp_p(&[x], gamma, p).unwrap()[0],
            1000,
            1e-6,
        );
    }
}

#[test]
fn lp_box_matches_grid() {
    let (alpha, p, lo, hi) = (1.0, 0.5, 0.0, 0.3);
    check_scalar_prox(
        "lp^p+box",
        move |z| {
            if z < lo || z > hi {
                f64::INFINITY
            } else {
                alpha * z.abs().powf(p)
            }
        },
        move |x, gamma| prox_lp_p_box(&[x], gamma, alpha, p, &[lo], &[hi]).unwrap()[0],
        400,
        1e-6,
    );
}

#[test]
fn lp_frozen_expected_values() {
    // Grid minimization of |z|^0.5 + ½(z−5)² with step 1e−6 lands on
    // 4.771090 (stationarity: z + 0.5·z^{−1/2} = 5).
    let (z_grid, _) = grid_min(|z| z.abs().powf(0.5), 1.0, 5.0, 0.0, 6.0, 1e-6);
    assert!((z_grid - 4.771090).abs() < 1e-5, "grid argmin {z_grid}");
    let z = prox_lp_p(&[5.0], 1.0, 0.5).unwrap()[0];
    assert!((z - z_grid).abs() <= 1e-5, "prox {z} vs grid {z_grid}");

    // Small input collapses to zero.
    let (z_grid, _) = grid_min(|z| z.abs().powf(0.5), 1.0, 0.2, -1.0, 1.0, 1e-6);
    assert_eq!(z_grid, 0.0);
    assert_eq!(prox_lp_p(&[0.2], 1.0, 0.5).unwrap()[0], 0.0);
}

/// Samples one member of each library set, uniformly over a bounded patch.
fn sample_member(set: &ConstraintSet, rng: &mut SplitMix64) -> Vec<f64> {
    match set {
        ConstraintSet::Box { lo, hi } => lo
            .iter()
            .zip(hi)
            .map(|(&l, &h)| {
                let l = l.max(-20.0);
                let h = h.min(20.0);
                rng.uniform(l, h)
            })
            .collect(),
        ConstraintSet::IntervalUnion { intervals } => {
            let k = rng.next_index(intervals.len());
            vec![rng.uniform(intervals[k].0, intervals[k].1)]
        }
        ConstraintSet::Singleton { point } => point.clone(),
        ConstraintSet::EitherOr => {
            // one half-plane at a time
            if rng.next_f64() < 0.5 {
                vec![rng.uniform(0.0, 10.0), rng.uniform(-10.0, 10.0)]
            } else {
                vec![rng.uniform(-10.0, 10.0), rng.uniform(0.0, 10.0)]
            }
        }
        ConstraintSet::Union { pieces } => {
            let k = rng.next_index(pieces.len());
            sample_member(&pieces[k], rng)
        }
        ConstraintSet::Product { factors } => {
            factors.iter().flat_map(|f| sample_member(f, rng)).collect()
        }
    }
}

#[test]
fn projections_beat_sampled_members() {
    let rho = 0.02;
    let sets: Vec<(&str, ConstraintSet)> = vec![
        (
            "box",
            ConstraintSet::Box {
                lo: vec![-1.0, 0.0, f64::NEG_INFINITY],
                hi: vec![1.0, f64::INFINITY, 2.0],
            },
        ),
        (
            "return-budget",
            ConstraintSet::Box {
                lo: vec![rho, 1.0],
                hi: vec![f64::INFINITY, 1.0],
            },
        ),
        (
            "interval-union",
            ConstraintSet::IntervalUnion {
                intervals: vec![(5.0, 10.0), (13.0, 15.0)],
            },
        ),
        ("either-or", ConstraintSet::EitherOr),
        (
            "product",
            ConstraintSet::Product {
                factors: vec![ConstraintSet::EitherOr, ConstraintSet::zero(2)],
            },
        ),
    ];
    let mut rng = SplitMix64::new(2712);
    for (name, set) in &sets {
        for _ in 0..1000 {
            let v: Vec<f64> = (0..set.dim()).map(|_| rng.uniform(-15.0, 15.0)).collect();
            let p = set.project(&v);
            assert!(set.contains(&p, 0.0), "{name}: projection not a member");
            let d = dist(&p, &v);
            for _ in 0..1000 {
                let w = sample_member(set, &mut rng);
                assert!(
                    d <= dist(&w, &v) + 1e-12,
                    "{name}: sampled member closer than projection"
                );
            }
        }
    }
}
