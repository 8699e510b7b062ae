//! The constrained composite problem abstraction and its oracle contract.
//!
//! A [`Problem`] is a bundle of first-order oracles for
//!
//! ```text
//!     minimize  f(x) + g(x)    subject to    c(x) ∈ D
//! ```
//!
//! Oracles are replaceable function-valued fields rather than a trait
//! hierarchy, so benchmark problems and user problems share one code path.
//! All oracles must be deterministic: identical inputs yield identical
//! outputs. `g` may take the value +∞ (indicators are legal values, not
//! errors); a NaN from any oracle is a hard error surfaced by the solvers.
//!
//! Problems are immutable after construction and all oracles are `Send +
//! Sync`, so concurrent read-only evaluation from multiple workers is safe.

use serde::Serialize;

use crate::error::SolverError;
use crate::prox::sets::ConstraintSet;
use crate::vecmath::dist;

type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type VectorFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type ProxFn = Box<dyn Fn(&[f64], f64) -> Result<(Vec<f64>, f64), SolverError> + Send + Sync>;
type JtvFn = Box<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;

/// Oracle bundle for one constrained composite problem.
pub struct Problem {
    n: usize,
    m: usize,
    f_eval: ValueFn,
    f_grad: VectorFn,
    g_prox: ProxFn,
    g_eval: ValueFn,
    c_eval: VectorFn,
    c_jtv: JtvFn,
    d_proj: VectorFn,
    d_set: Option<ConstraintSet>,
    prox_bound: f64,
}

impl Problem {
    pub fn builder(n: usize, m: usize) -> ProblemBuilder {
        ProblemBuilder::new(n, m)
    }

    /// Decision-variable dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Constraint dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Smooth cost `f(x)`.
    pub fn f(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        (self.f_eval)(x)
    }

    /// Gradient `∇f(x)`.
    pub fn grad_f(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (self.f_grad)(x)
    }

    /// One element of `prox_{γg}(x)` plus the `g`-value at that point,
    /// valid for `γ ∈ (0, prox_bound)`.
    pub fn prox_g(&self, x: &[f64], gamma: f64) -> Result<(Vec<f64>, f64), SolverError> {
        debug_assert!(gamma > 0.0 && gamma < self.prox_bound);
        (self.g_prox)(x, gamma)
    }

    /// Nonsmooth cost `g(x)`; may return +∞.
    pub fn g(&self, x: &[f64]) -> f64 {
        (self.g_eval)(x)
    }

    /// Constraint values `c(x)`.
    pub fn c(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (self.c_eval)(x)
    }

    /// Jacobian-transpose–vector product `∇c(x)ᵀ v`.
    pub fn jtv(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.m);
        (self.c_jtv)(x, v)
    }

    /// One element of `proj_D(v)`.
    pub fn proj_d(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.m);
        (self.d_proj)(v)
    }

    /// The constraint-set descriptor when the problem was built from a
    /// library set (enables membership checks in tests and diagnostics).
    pub fn d_set(&self) -> Option<&ConstraintSet> {
        self.d_set.as_ref()
    }

    /// Prox-boundedness threshold `γ_g` of `g`.
    pub fn prox_bound(&self) -> f64 {
        self.prox_bound
    }

    /// Composite cost `q(x) = f(x) + g(x)`; +∞ exactly when `g(x) = +∞`.
    pub fn eval_q(&self, x: &[f64]) -> f64 {
        self.f(x) + self.g(x)
    }

    /// Euclidean primal infeasibility `‖c(x) − s‖` of a slack pair.
    pub fn primal_infeasibility(&self, x: &[f64], s: &[f64]) -> f64 {
        dist(&self.c(x), s)
    }
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("d_set", &self.d_set)
            .field("prox_bound", &self.prox_bound)
            .finish_non_exhaustive()
    }
}

/// Primal/dual residual pair of a returned iterate.
///
/// `primal` is `‖c(x) − s‖`; `dual` is the inner-solver stationarity
/// residual at the accepted subproblem solution. There is no separate
/// complementarity measure: the slack carries it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
}

/// Incremental constructor for [`Problem`].
///
/// `f` defaults to 0 with a zero gradient, `g` to 0 with the identity prox,
/// and the prox bound to +∞; constraint oracles are mandatory.
pub struct ProblemBuilder {
    n: usize,
    m: usize,
    f_eval: Option<ValueFn>,
    f_grad: Option<VectorFn>,
    g_prox: Option<ProxFn>,
    g_eval: Option<ValueFn>,
    c_eval: Option<VectorFn>,
    c_jtv: Option<JtvFn>,
    d_proj: Option<VectorFn>,
    d_set: Option<ConstraintSet>,
    prox_bound: f64,
}

impl ProblemBuilder {
    fn new(n: usize, m: usize) -> Self {
        assert!(n > 0, "decision dimension must be positive");
        assert!(m > 0, "constraint dimension must be positive");
        ProblemBuilder {
            n,
            m,
            f_eval: None,
            f_grad: None,
            g_prox: None,
            g_eval: None,
            c_eval: None,
            c_jtv: None,
            d_proj: None,
            d_set: None,
            prox_bound: f64::INFINITY,
        }
    }

    pub fn smooth(
        mut self,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.f_eval = Some(Box::new(value));
        self.f_grad = Some(Box::new(grad));
        self
    }

    pub fn nonsmooth(
        mut self,
        prox: impl Fn(&[f64], f64) -> Result<(Vec<f64>, f64), SolverError> + Send + Sync + 'static,
        value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.g_prox = Some(Box::new(prox));
        self.g_eval = Some(Box::new(value));
        self
    }

    /// Wires `g` to a separable operator.
    pub fn nonsmooth_separable(self, g: crate::prox::SeparableProx) -> Self {
        let g2 = g.clone();
        self.nonsmooth(move |x, gamma| g.prox(x, gamma), move |x| g2.value(x))
    }

    pub fn constraints(
        mut self,
        c: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        jtv: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.c_eval = Some(Box::new(c));
        self.c_jtv = Some(Box::new(jtv));
        self
    }

    /// Constraint set given as a library descriptor; the projection oracle
    /// and the membership predicate both come from it.
    pub fn set(mut self, d: ConstraintSet) -> Self {
        assert_eq!(d.dim(), self.m, "constraint set dimension mismatch");
        let proj = d.clone();
        self.d_proj = Some(Box::new(move |v| proj.project(v)));
        self.d_set = Some(d);
        self
    }

    /// Raw projection oracle for user-defined sets.
    pub fn projection(mut self, proj: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.d_proj = Some(Box::new(proj));
        self.d_set = None;
        self
    }

    pub fn prox_bound(mut self, gamma_g: f64) -> Self {
        assert!(gamma_g > 0.0);
        self.prox_bound = gamma_g;
        self
    }

    pub fn build(self) -> Problem {
        Problem {
            n: self.n,
            m: self.m,
            f_eval: self.f_eval.unwrap_or_else(|| Box::new(|_| 0.0)),
            f_grad: self
                .f_grad
                .unwrap_or_else(|| Box::new(|x: &[f64]| vec![0.0; x.len()])),
            g_prox: self
                .g_prox
                .unwrap_or_else(|| Box::new(|x: &[f64], _| Ok((x.to_vec(), 0.0)))),
            g_eval: self.g_eval.unwrap_or_else(|| Box::new(|_| 0.0)),
            c_eval: self.c_eval.expect("constraint oracle is mandatory"),
            c_jtv: self.c_jtv.expect("Jacobian-transpose oracle is mandatory"),
            d_proj: self.d_proj.expect("projection oracle is mandatory"),
            d_set: self.d_set,
            prox_bound: self.prox_bound,
        }
    }
}
