//! Finite-difference gradients.

/// Central differences with step `h` in every coordinate.
pub fn central_diff_grad(f: impl Fn(&[f64]) -> f64, z: &[f64], h: f64) -> Vec<f64> {
    let mut grad = Vec::with_capacity(z.len());
    let mut work = z.to_vec();
    for i in 0..z.len() {
        let orig = work[i];
        work[i] = orig + h;
        let fp = f(&work);
        work[i] = orig - h;
        let fm = f(&work);
        work[i] = orig;
        grad.push((fp - fm) / (2.0 * h));
    }
    grad
}

/// Relative error `‖a − b‖ / max(1, ‖a‖)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    diff / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_gradient() {
        let f = |z: &[f64]| 0.5 * z.iter().map(|v| v * v).sum::<f64>();
        let g = central_diff_grad(f, &[1.0, -2.0], 1e-6);
        assert!(relative_error(&[1.0, -2.0], &g) < 1e-9);
    }
}
