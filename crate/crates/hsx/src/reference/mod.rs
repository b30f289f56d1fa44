//! Closed-form exact solutions used as oracles: the multipeakon, cusp and
//! cosine families, the bracketed bisection behind their implicit
//! characteristic relations, and the error probes comparing a numeric
//! solution against them.

mod cosine;
mod cusp;
mod multipeakon;

pub use cosine::CosineSolution;
pub use cusp::CuspSolution;
pub use multipeakon::MultipeakonSolution;

use crate::lagrangian::{evolve, to_eulerian, LagrangianState};
use crate::{Error, Result};

/// Bracket width at which bisection stops. Monotone, derivative-free and
/// unconditionally convergent; the implicit relations have cube-root or
/// trigonometric stiffness near breaking where a Newton step can overshoot.
pub const BISECT_TOL: f64 = 1e-13;

/// Bisection for a strictly increasing `f` with `f(lo) ≤ 0 ≤ f(hi)`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Solver(format!(
            "bracket violated: f({lo}) = {flo}, f({hi}) = {fhi}"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= BISECT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `arcosh` with the argument clamped into its domain to absorb rounding
/// at the first breaking time.
pub(crate) fn arcosh_clamped(x: f64) -> f64 {
    let x = x.max(1.0);
    (x + (x * x - 1.0).sqrt()).ln()
}

/// `arcsin` with clamping into `[-1, 1]`.
pub(crate) fn arcsin_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).asin()
}

/// One of the three stock exact solutions.
#[derive(Debug, Clone)]
pub enum ExactSolution {
    Multipeakon(MultipeakonSolution),
    Cusp(CuspSolution),
    Cosine(CosineSolution),
}

impl ExactSolution {
    pub fn alpha(&self) -> f64 {
        match self {
            Self::Multipeakon(m) => m.alpha,
            Self::Cusp(c) => c.alpha,
            Self::Cosine(c) => c.alpha,
        }
    }

    /// Largest admissible evolution time (the cusp family's closed form
    /// stops at 3).
    pub fn time_limit(&self) -> f64 {
        match self {
            Self::Cusp(_) => 3.0,
            _ => f64::INFINITY,
        }
    }

    /// Exact total energy `F_∞(t)`.
    pub fn total_energy(&self, t: f64) -> f64 {
        match self {
            Self::Multipeakon(m) => m.total_energy(t),
            Self::Cusp(c) => c.total_energy(t),
            Self::Cosine(c) => c.total_energy(t),
        }
    }

    /// Times at which a finite amount of energy concentrates; these are
    /// injected into the probe's time sampling because the energy drop is
    /// inclusive at `t = τ`.
    pub fn breaking_instants(&self) -> Vec<f64> {
        match self {
            Self::Multipeakon(_) => vec![2.0],
            Self::Cusp(_) => vec![],
            Self::Cosine(_) => vec![2.0 / std::f64::consts::PI],
        }
    }

    /// `(u, F)(t, x)` where a closed Eulerian form exists; `None` for the
    /// cosine family.
    pub fn eulerian(&self, t: f64, x: f64) -> Option<(f64, f64)> {
        match self {
            Self::Multipeakon(m) => Some(m.eulerian(t, x)),
            Self::Cusp(c) => Some(c.eulerian(t, x)),
            Self::Cosine(_) => None,
        }
    }

    /// Branch boundaries of the exact Eulerian profile at time `t`.
    pub fn eulerian_breakpoints(&self, t: f64) -> Vec<f64> {
        match self {
            Self::Multipeakon(m) => m.breakpoints(t),
            Self::Cusp(c) => c.breakpoints(t),
            Self::Cosine(_) => vec![],
        }
    }
}

/// Per-run error record; `dx` is attached by the harness.
#[derive(Debug, Clone, Copy)]
pub struct ErrorRecord {
    pub dx: f64,
    /// `sup_t ‖u(t) − u_Δx(t)‖_∞` over the sampled times and comparison
    /// mesh; absent when no closed Eulerian form exists (cosine).
    pub err_u_sup: Option<f64>,
    /// `|F_∞(T) − F_{Δx,∞}(T)|` at the final time.
    pub err_f_inf: f64,
    /// The Lagrangian error bound `sup_t (‖U−U_Δx‖_∞ + √F_∞ ‖y−y_Δx‖_∞^½)`
    /// (cosine only).
    pub err_a: Option<f64>,
}

/// Sampling plan for [`exact_error_probe`].
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub t_final: f64,
    /// Sorted sample times (must include 0 and `t_final`).
    pub times: Vec<f64>,
    /// Fixed uniform spatial refinement for the Eulerian comparison.
    pub mesh: Vec<f64>,
    /// Midpoint-refinement factor for the Lagrangian (cosine) comparison.
    pub xi_refine: usize,
}

/// Compares the numeric solution evolved from `x0` against the exact one:
/// the sup-over-time Eulerian `u` error on the comparison mesh (numeric
/// nodes ∪ exact breakpoints ∪ the fixed refinement), the total-energy
/// error at `t_final`, and for the cosine family the Lagrangian bound.
pub fn exact_error_probe(
    exact: &ExactSolution,
    x0: &LagrangianState,
    cfg: &ProbeConfig,
) -> Result<ErrorRecord> {
    let err_f_inf = {
        let xt = evolve(x0, cfg.t_final)?;
        (exact.total_energy(cfg.t_final) - xt.v_inf).abs()
    };

    if let ExactSolution::Cosine(cos) = exact {
        let err_a = cosine_a_probe(cos, x0, cfg)?;
        return Ok(ErrorRecord { dx: f64::NAN, err_u_sup: None, err_f_inf, err_a: Some(err_a) });
    }

    let mut err_u: f64 = 0.0;
    for &t in &cfg.times {
        let st = to_eulerian(&evolve(x0, t)?)?;
        let mut probe = |x: f64| {
            let (ue, _fe) = exact.eulerian(t, x).expect("closed Eulerian form");
            let d = (ue - st.u.eval(x)).abs();
            if d > err_u {
                err_u = d;
            }
        };
        for &x in st.u.nodes() {
            probe(x);
        }
        for x in exact.eulerian_breakpoints(t) {
            probe(x);
        }
        for &x in &cfg.mesh {
            probe(x);
        }
    }
    Ok(ErrorRecord { dx: f64::NAN, err_u_sup: Some(err_u), err_f_inf, err_a: None })
}

fn cosine_a_probe(cos: &CosineSolution, x0: &LagrangianState, cfg: &ProbeConfig) -> Result<f64> {
    // static sample labels: numeric nodes plus midpoint refinement
    let mut xis = Vec::with_capacity(x0.xi.len() * (cfg.xi_refine + 1));
    for j in 0..x0.xi.len() {
        xis.push(x0.xi[j]);
        if j + 1 < x0.xi.len() && cfg.xi_refine > 0 {
            let w = x0.xi[j + 1] - x0.xi[j];
            if w > 0.0 {
                for k in 1..=cfg.xi_refine {
                    xis.push(x0.xi[j] + w * k as f64 / (cfg.xi_refine + 1) as f64);
                }
            }
        }
    }
    xis.dedup();
    // the solved characteristic relation is time-independent: cache it
    let cached: Vec<(f64, f64)> = xis
        .iter()
        .map(|&xi| Ok((xi, cos.ybar(xi)?)))
        .collect::<Result<_>>()?;

    let mut err_a: f64 = 0.0;
    for &t in &cfg.times {
        let xt = evolve(x0, t)?;
        let f_inf = cos.total_energy(t);
        let mut sup_u: f64 = 0.0;
        let mut sup_y: f64 = 0.0;
        for &(xi, yb) in &cached {
            let (ye, ue, _v, _h) = cos.lagrangian_with_ybar(t, xi, yb);
            sup_u = sup_u.max((ue - xt.eval_u(xi)).abs());
            sup_y = sup_y.max((ye - xt.eval_y(xi)).abs());
        }
        // wave-breaking curve labels move with t; sample them too
        for xi in cos.breaking_curve_labels(t) {
            let yb = cos.ybar(xi)?;
            let (ye, ue, _v, _h) = cos.lagrangian_with_ybar(t, xi, yb);
            sup_u = sup_u.max((ue - xt.eval_u(xi)).abs());
            sup_y = sup_y.max((ye - xt.eval_y(xi)).abs());
        }
        err_a = err_a.max(sup_u + f_inf.sqrt() * sup_y.sqrt());
    }
    Ok(err_a)
}
