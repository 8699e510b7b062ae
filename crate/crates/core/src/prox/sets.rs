//! Closed constraint sets with projections and membership predicates.
//!
//! Projections onto nonconvex unions pick the nearest candidate across the
//! pieces; exact ties go to the earlier piece in declaration order (for the
//! either-or set this zeroes the first coordinate). Projecting a member
//! always returns it unchanged, bit for bit.

use crate::vecmath::dist;

/// Componentwise clamp onto `[lo, hi]` (±∞ bounds allowed).
pub fn proj_box(v: &[f64], lo: &[f64], hi: &[f64]) -> Vec<f64> {
    debug_assert_eq!(v.len(), lo.len());
    debug_assert_eq!(v.len(), hi.len());
    v.iter()
        .enumerate()
        .map(|(i, &x)| x.clamp(lo[i], hi[i]))
        .collect()
}

/// Nearest point of a union of sorted, pairwise disjoint closed intervals.
/// Equidistant inputs resolve to the lower interval.
pub fn proj_interval_union(v: f64, intervals: &[(f64, f64)]) -> f64 {
    assert!(!intervals.is_empty(), "interval union must be nonempty");
    let mut best = f64::INFINITY;
    let mut point = v;
    for &(a, b) in intervals {
        debug_assert!(a <= b);
        let candidate = v.clamp(a, b);
        let d = (candidate - v).abs();
        if d < best {
            best = d;
            point = candidate;
        }
    }
    point
}

/// Projection onto `{(a, b) : a ≥ 0 ∨ b ≥ 0}`, the union of two half-planes.
///
/// Members map to themselves. Otherwise the nearer of the two half-plane
/// projections wins; the tie `|v₁| = |v₂|` zeroes the first coordinate.
pub fn proj_either_or(v: [f64; 2]) -> [f64; 2] {
    if v[0] >= 0.0 || v[1] >= 0.0 {
        return v;
    }
    if v[0].abs() <= v[1].abs() {
        [0.0, v[1]]
    } else {
        [v[0], 0.0]
    }
}

/// Blockwise projection onto a Cartesian product of sets.
pub fn proj_product(v: &[f64], factors: &[ConstraintSet]) -> Vec<f64> {
    let total: usize = factors.iter().map(|f| f.dim()).sum();
    assert_eq!(v.len(), total, "product projection dimension mismatch");
    let mut out = Vec::with_capacity(v.len());
    let mut offset = 0;
    for f in factors {
        let d = f.dim();
        out.extend(f.project(&v[offset..offset + d]));
        offset += d;
    }
    out
}

/// Descriptor of a closed constraint set `D` with projection and membership.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintSet {
    /// `[lo, hi]` componentwise; ±∞ entries make a coordinate unbounded.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// One-dimensional union of sorted disjoint closed intervals.
    IntervalUnion { intervals: Vec<(f64, f64)> },
    /// A single point (e.g. `{0}^m` for equality constraints).
    Singleton { point: Vec<f64> },
    /// `{(a, b) : a ≥ 0 ∨ b ≥ 0}` in dimension 2.
    EitherOr,
    /// Union of finitely many pieces of equal dimension; projection keeps
    /// the nearest piece, ties resolving to the earliest.
    Union { pieces: Vec<ConstraintSet> },
    /// Cartesian product of factor sets.
    Product { factors: Vec<ConstraintSet> },
}

impl ConstraintSet {
    pub fn dim(&self) -> usize {
        match self {
            ConstraintSet::Box { lo, .. } => lo.len(),
            ConstraintSet::IntervalUnion { .. } => 1,
            ConstraintSet::Singleton { point } => point.len(),
            ConstraintSet::EitherOr => 2,
            ConstraintSet::Union { pieces } => pieces.first().map_or(0, |p| p.dim()),
            ConstraintSet::Product { factors } => factors.iter().map(|f| f.dim()).sum(),
        }
    }

    /// One nearest point of the set. Panics on dimension mismatch.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "projection dimension mismatch");
        match self {
            ConstraintSet::Box { lo, hi } => proj_box(v, lo, hi),
            ConstraintSet::IntervalUnion { intervals } => {
                vec![proj_interval_union(v[0], intervals)]
            }
            ConstraintSet::Singleton { point } => point.clone(),
            ConstraintSet::EitherOr => proj_either_or([v[0], v[1]]).to_vec(),
            ConstraintSet::Union { pieces } => {
                let mut best: Option<(f64, Vec<f64>)> = None;
                for piece in pieces {
                    let candidate = piece.project(v);
                    let d = dist(&candidate, v);
                    if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, candidate));
                    }
                }
                best.expect("union must have at least one piece").1
            }
            ConstraintSet::Product { factors } => proj_product(v, factors),
        }
    }

    /// Membership predicate with absolute tolerance `tol` per coordinate
    /// (use 0 for points produced by [`Self::project`]).
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        match self {
            ConstraintSet::Box { lo, hi } => v
                .iter()
                .enumerate()
                .all(|(i, &x)| x >= lo[i] - tol && x <= hi[i] + tol),
            ConstraintSet::IntervalUnion { intervals } => intervals
                .iter()
                .any(|&(a, b)| v[0] >= a - tol && v[0] <= b + tol),
            ConstraintSet::Singleton { point } => {
                v.iter().zip(point).all(|(a, b)| (a - b).abs() <= tol)
            }
            ConstraintSet::EitherOr => v[0] >= -tol || v[1] >= -tol,
            ConstraintSet::Union { pieces } => pieces.iter().any(|p| p.contains(v, tol)),
            ConstraintSet::Product { factors } => {
                let mut offset = 0;
                factors.iter().all(|f| {
                    let d = f.dim();
                    let ok = f.contains(&v[offset..offset + d], tol);
                    offset += d;
                    ok
                })
            }
        }
    }

    /// Half-space `{x : xᵢ ≥ bound}` embedded in `dim` dimensions.
    pub fn half_space(dim: usize, coord: usize, bound: f64) -> Self {
        let mut lo = vec![f64::NEG_INFINITY; dim];
        let hi = vec![f64::INFINITY; dim];
        lo[coord] = bound;
        ConstraintSet::Box { lo, hi }
    }

    /// The either-or set expressed as a union of two half-planes. Projection
    /// agrees with [`ConstraintSet::EitherOr`] including tie-breaking.
    pub fn either_or_as_union() -> Self {
        ConstraintSet::Union {
            pieces: vec![
                ConstraintSet::half_space(2, 0, 0.0),
                ConstraintSet::half_space(2, 1, 0.0),
            ],
        }
    }

    /// `{0}^m`.
    pub fn zero(m: usize) -> Self {
        ConstraintSet::Singleton {
            point: vec![0.0; m],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_clamps() {
        // D = [ϱ, ∞) × {1} with ϱ = 1
        let lo = [1.0, 1.0];
        let hi = [f64::INFINITY, 1.0];
        assert_eq!(proj_box(&[0.5, 3.0], &lo, &hi), vec![1.0, 1.0]);
        assert_eq!(proj_box(&[2.0, 1.0], &lo, &hi), vec![2.0, 1.0]);
        assert_eq!(
            proj_box(&[-1.0, 0.0], &[0.0, 0.0], &[1.0, 1.0]),
            vec![0.0, 0.0]
        );
    }

    #[test]
    fn interval_union_nearest_and_tie() {
        let d = [(5.0, 10.0), (13.0, 15.0)];
        // distance 1 to [5,10] beats distance 2 to [13,15]
        assert_eq!(proj_interval_union(11.0, &d), 10.0);
        // distance 1 to 13 beats distance 2 to 10
        assert_eq!(proj_interval_union(12.0, &d), 13.0);
        // exactly equidistant (1.5 both ways): lower interval wins
        assert_eq!(proj_interval_union(11.5, &d), 10.0);
        assert_eq!(proj_interval_union(14.0, &d), 14.0);
    }

    #[test]
    fn either_or_branches() {
        assert_eq!(proj_either_or([-1.0, -2.0]), [0.0, -2.0]);
        assert_eq!(proj_either_or([3.0, -5.0]), [3.0, -5.0]);
        // equal distances: documented tie-break zeroes the first coordinate
        assert_eq!(proj_either_or([-2.0, -2.0]), [0.0, -2.0]);
    }

    #[test]
    fn either_or_matches_union_form() {
        let union = ConstraintSet::either_or_as_union();
        let eo = ConstraintSet::EitherOr;
        let mut rng = crate::rng::SplitMix64::new(5);
        for _ in 0..500 {
            let v = [rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0)];
            assert_eq!(union.project(&v), eo.project(&v));
        }
    }

    #[test]
    fn product_blocks() {
        let d = ConstraintSet::zero(2);
        assert_eq!(d.project(&[3.0, -1.0]), vec![0.0, 0.0]);

        let d = ConstraintSet::Product {
            factors: vec![
                ConstraintSet::Box {
                    lo: vec![0.0],
                    hi: vec![f64::INFINITY],
                },
                ConstraintSet::Singleton { point: vec![1.0] },
            ],
        };
        assert_eq!(d.project(&[-2.0, 5.0]), vec![0.0, 1.0]);

        let d = ConstraintSet::Product {
            factors: vec![ConstraintSet::EitherOr, ConstraintSet::zero(1)],
        };
        assert_eq!(d.project(&[-1.0, -2.0, 7.0]), vec![0.0, -2.0, 0.0]);
    }

    #[test]
    fn projection_is_idempotent_and_member() {
        let sets = [
            ConstraintSet::Box {
                lo: vec![-1.0, 0.0],
                hi: vec![1.0, f64::INFINITY],
            },
            ConstraintSet::IntervalUnion {
                intervals: vec![(5.0, 10.0), (13.0, 15.0)],
            },
            ConstraintSet::EitherOr,
            ConstraintSet::zero(3),
        ];
        let mut rng = crate::rng::SplitMix64::new(11);
        for set in &sets {
            for _ in 0..200 {
                let v: Vec<f64> = (0..set.dim()).map(|_| rng.uniform(-20.0, 20.0)).collect();
                let p = set.project(&v);
                assert!(set.contains(&p, 0.0), "{set:?} missing {p:?}");
                assert_eq!(set.project(&p), p, "projection not idempotent");
            }
        }
    }
}
