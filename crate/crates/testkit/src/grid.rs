//! Brute-force grid-search oracle for scalar proximal operators.
//!
//! The scalar prox of `g` at `(x, γ)` minimizes `γ·g(z) + ½(z − x)²`. The
//! oracle scans an even grid over an interval and returns the best value;
//! any correct prox must match the scanned minimum up to grid resolution.
//!
//! The `γ·g` values are precomputed once per (rule, γ) so sweeping thousands
//! of inputs over a 200k-point grid stays fast; the search itself is still
//! an exhaustive scan.

/// Precomputed grid of `γ·g(z)` values over `[lo, hi]` with fixed step.
pub struct GridProxOracle {
    lo: f64,
    step: f64,
    scaled_g: Vec<f64>,
}

impl GridProxOracle {
    pub fn new(g: impl Fn(f64) -> f64, gamma: f64, lo: f64, hi: f64, step: f64) -> Self {
        assert!(hi > lo && step > 0.0);
        let count = ((hi - lo) / step).round() as usize + 1;
        let scaled_g = (0..count)
            .map(|i| gamma * g(lo + i as f64 * step))
            .collect();
        GridProxOracle { lo, step, scaled_g }
    }

    /// Grid point and objective value minimizing `γ·g(z) + ½(z − x)²`.
    pub fn min_for(&self, x: f64) -> (f64, f64) {
        let mut best_obj = f64::INFINITY;
        let mut best_z = self.lo;
        for (i, &gz) in self.scaled_g.iter().enumerate() {
            if gz.is_infinite() {
                continue;
            }
            let z = self.lo + i as f64 * self.step;
            let obj = gz + 0.5 * (z - x) * (z - x);
            if obj < best_obj {
                best_obj = obj;
                best_z = z;
            }
        }
        (best_z, best_obj)
    }
}

/// One-off scan (no precomputation), for single expected values.
pub fn grid_min(
    g: impl Fn(f64) -> f64,
    gamma: f64,
    x: f64,
    lo: f64,
    hi: f64,
    step: f64,
) -> (f64, f64) {
    GridProxOracle::new(g, gamma, lo, hi, step).min_for(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_threshold_agrees_with_scan() {
        // prox of |·| at x = 3, γ = 1 is 2
        let (z, _) = grid_min(|z| z.abs(), 1.0, 3.0, -10.0, 10.0, 1e-4);
        assert!((z - 2.0).abs() <= 1e-4 + 1e-12);
    }

    #[test]
    fn indicator_grid_skips_infinite_cells() {
        let g = |z: f64| {
            if (0.0..=1.0).contains(&z) {
                0.0
            } else {
                f64::INFINITY
            }
        };
        let (z, obj) = grid_min(g, 1.0, 5.0, -2.0, 2.0, 1e-3);
        assert!((z - 1.0).abs() <= 1e-3 + 1e-12);
        assert!((obj - 8.0).abs() <= 0.01);
    }
}
