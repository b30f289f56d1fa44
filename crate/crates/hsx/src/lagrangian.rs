//! Lagrangian coordinates: the forward map from `(u, F, G)` to
//! `(y, U, V, H)`, the wave-breaking times, the closed-form evolution, the
//! inverse map back to Eulerian variables, the stability density `g`, and
//! the seven-term Lagrangian metric.
//!
//! States are node vectors over characteristic labels ξ̂₀ ≤ … ≤ ξ̂_M with
//! per-cell constant derivatives. Outside the node range every cell is
//! "dead": `y_ξ = 1`, `U_ξ = V_ξ = H_ξ = 0`. An atom of `G` becomes a jump
//! cell (`y_ξ = U_ξ = 0`, `V_ξ = H_ξ = 1`) whose ξ-width is the atom mass.

use crate::eulerian::{EulerianTriple, ValidationMode};
use crate::pwl::{merge_nodes, MonotoneCdf, PiecewiseConstantFn, PiecewiseLinearFn};
use crate::{Error, Result};

/// Cells whose image `y_ξ·width` is below `1e-13·max(1, |domain|)` are
/// treated as collapsed by the inverse map; exact zeros occur only at the
/// breaking time itself.
const COLLAPSE_REL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct LagrangianState {
    pub time: f64,
    pub alpha: f64,
    /// Node labels, nondecreasing. Zero-width cells appear where the
    /// Eulerian state has a node without an atom.
    pub xi: Vec<f64>,
    // nodal values (len = xi.len())
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub h: Vec<f64>,
    // per-cell derivatives (len = xi.len() - 1)
    pub y_xi: Vec<f64>,
    pub u_xi: Vec<f64>,
    pub v_xi: Vec<f64>,
    pub h_xi: Vec<f64>,
    /// Per-cell wave-breaking time: 0 on jump cells, `-2 y_ξ / U_ξ` where
    /// `U_ξ < 0`, +∞ otherwise.
    pub tau: Vec<f64>,
    pub u_minus_inf: f64,
    pub zeta_minus_inf: f64,
    pub v_inf: f64,
    pub h_inf: f64,
}

impl LagrangianState {
    pub fn num_cells(&self) -> usize {
        self.xi.len() - 1
    }

    fn cell_width(&self, j: usize) -> f64 {
        self.xi[j + 1] - self.xi[j]
    }

    /// Index of the cell containing ξ, or None outside the node range.
    fn cell_of(&self, xi: f64) -> Option<usize> {
        if xi < self.xi[0] || xi >= *self.xi.last().unwrap() {
            return None;
        }
        Some(self.xi.partition_point(|&n| n <= xi) - 1)
    }

    /// `y(ξ)` with the dead-cell tails (`y_ξ = 1` outside).
    pub fn eval_y(&self, xi: f64) -> f64 {
        match self.cell_of(xi) {
            Some(j) => self.y[j] + self.y_xi[j] * (xi - self.xi[j]),
            None if xi < self.xi[0] => self.y[0] - (self.xi[0] - xi),
            None => self.y[self.xi.len() - 1] + (xi - self.xi[self.xi.len() - 1]),
        }
    }

    /// `U(ξ)`; constant beyond the node range.
    pub fn eval_u(&self, xi: f64) -> f64 {
        match self.cell_of(xi) {
            Some(j) => self.u[j] + self.u_xi[j] * (xi - self.xi[j]),
            None if xi < self.xi[0] => self.u[0],
            None => self.u[self.xi.len() - 1],
        }
    }

    /// Splits the containing cell at ξ, duplicating its derivative data.
    /// The represented functions are unchanged.
    pub fn with_node_inserted(&self, xi: f64) -> Self {
        let mut s = self.clone();
        let Some(j) = self.cell_of(xi) else {
            return s;
        };
        if xi == self.xi[j] {
            return s;
        }
        let d = xi - self.xi[j];
        s.xi.insert(j + 1, xi);
        s.y.insert(j + 1, self.y[j] + self.y_xi[j] * d);
        s.u.insert(j + 1, self.u[j] + self.u_xi[j] * d);
        s.v.insert(j + 1, self.v[j] + self.v_xi[j] * d);
        s.h.insert(j + 1, self.h[j] + self.h_xi[j] * d);
        s.y_xi.insert(j + 1, self.y_xi[j]);
        s.u_xi.insert(j + 1, self.u_xi[j]);
        s.v_xi.insert(j + 1, self.v_xi[j]);
        s.h_xi.insert(j + 1, self.h_xi[j]);
        s.tau.insert(j + 1, self.tau[j]);
        s
    }
}

/// Wave-breaking time of one cell from its initial derivatives.
fn cell_breaking_time(y_xi: f64, u_xi: f64) -> f64 {
    if u_xi < 0.0 {
        -2.0 * y_xi / u_xi
    } else if y_xi == 0.0 && u_xi == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Per-cell wave-breaking times of a time-zero state.
pub fn wave_break_times(x0: &LagrangianState) -> Vec<f64> {
    (0..x0.num_cells())
        .map(|j| {
            if x0.cell_width(j) == 0.0 {
                f64::INFINITY
            } else {
                cell_breaking_time(x0.y_xi[j], x0.u_xi[j])
            }
        })
        .collect()
}

/// Maps a state with `μ = ν` to Lagrangian coordinates. Every node `x_i`
/// of `(u, F)` produces the pair of labels `x_i + F(x_i)` and
/// `x_i + F(x_i+)`; the pair brackets a jump cell when an atom sits at
/// `x_i`. Between consecutive pairs the map is affine.
pub fn to_lagrangian(s: &EulerianTriple) -> Result<LagrangianState> {
    let rep = crate::eulerian::validate(s, crate::eulerian::DEFAULT_VALIDATION_TOL, ValidationMode::StrictD0);
    if !rep.pass() {
        return Err(Error::Validation(format!(
            "Lagrangian map requires mu = nu and an admissible state: {}",
            rep.summary()
        )));
    }
    let xs = merge_nodes(s.u.nodes(), &s.f.breakpoints());
    let n = xs.len();
    let mut xi = Vec::with_capacity(2 * n);
    let mut y = Vec::with_capacity(2 * n);
    let mut u = Vec::with_capacity(2 * n);
    let mut h = Vec::with_capacity(2 * n);
    for &x in &xs {
        let fl = s.f.eval_left(x);
        let fr = s.f.eval_right(x);
        xi.push(x + fl);
        xi.push(x + fr);
        y.push(x);
        y.push(x);
        let uv = s.u.eval(x);
        u.push(uv);
        u.push(uv);
        h.push(fl);
        h.push(fr);
    }
    let m = xi.len();
    let mut y_xi = Vec::with_capacity(m - 1);
    let mut u_xi = Vec::with_capacity(m - 1);
    let mut h_xi = Vec::with_capacity(m - 1);
    for j in 0..m - 1 {
        let w = xi[j + 1] - xi[j];
        if w <= 0.0 {
            y_xi.push(0.0);
            u_xi.push(0.0);
            h_xi.push(0.0);
            continue;
        }
        if y[j + 1] == y[j] {
            // jump cell from an atom
            y_xi.push(0.0);
            u_xi.push(0.0);
            h_xi.push(1.0);
        } else {
            y_xi.push((y[j + 1] - y[j]) / w);
            u_xi.push((u[j + 1] - u[j]) / w);
            h_xi.push((h[j + 1] - h[j]) / w);
        }
    }
    let v = h.clone();
    let v_xi = h_xi.clone();
    let mut state = LagrangianState {
        time: 0.0,
        alpha: s.alpha,
        tau: Vec::new(),
        v_inf: *v.last().unwrap(),
        h_inf: *h.last().unwrap(),
        u_minus_inf: s.u.left_tail(),
        zeta_minus_inf: 0.0,
        xi,
        y,
        u,
        v,
        h,
        y_xi,
        u_xi,
        v_xi,
        h_xi,
    };
    state.tau = wave_break_times(&state);
    Ok(state)
}

/// Evolves a time-zero state to time `t` in closed form. No time stepping:
/// each cell's derivatives follow the quadratic-in-time solution, with the
/// energy drop applied inclusively at `t = τ` (and never on `τ = 0` cells).
/// Composition is deliberately unsupported; always evolve from `t = 0`.
pub fn evolve(x0: &LagrangianState, t: f64) -> Result<LagrangianState> {
    if x0.time != 0.0 {
        return Err(Error::InvalidInput(format!(
            "evolve must start from the time-zero state, got t0 = {}",
            x0.time
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!("negative evolution time {t}")));
    }
    let m = x0.num_cells();
    let alpha = x0.alpha;
    let mut y_xi = Vec::with_capacity(m);
    let mut u_xi = Vec::with_capacity(m);
    let mut v_xi = Vec::with_capacity(m);
    // asymptotic sums over broken cells (0 < tau <= t)
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for j in 0..m {
        let tau = x0.tau[j];
        let w = x0.cell_width(j);
        if tau > 0.0 && tau <= t && tau.is_finite() {
            let vq = (1.0 - alpha) * x0.v_xi[j];
            let dt = t - tau;
            v_xi.push(vq);
            u_xi.push(0.5 * dt * vq);
            y_xi.push(0.25 * dt * dt * vq);
            s1 += x0.h_xi[j] * w * dt;
            s2 += x0.h_xi[j] * w * dt * dt;
        } else {
            v_xi.push(x0.v_xi[j]);
            u_xi.push(x0.u_xi[j] + 0.5 * t * x0.v_xi[j]);
            let yx = x0.y_xi[j] + t * x0.u_xi[j] + 0.25 * t * t * x0.v_xi[j];
            y_xi.push(yx.max(0.0));
        }
    }
    let u_minus_inf = x0.u_minus_inf - 0.25 * x0.h_inf * t + 0.25 * alpha * s1;
    let zeta_minus_inf = x0.u_minus_inf * t - 0.125 * x0.h_inf * t * t + 0.125 * alpha * s2;

    let n = x0.xi.len();
    let mut u = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    u.push(u_minus_inf);
    y.push(x0.xi[0] + zeta_minus_inf);
    v.push(0.0);
    for j in 0..m {
        let w = x0.cell_width(j);
        u.push(u[j] + u_xi[j] * w);
        y.push(y[j] + y_xi[j] * w);
        v.push(v[j] + v_xi[j] * w);
    }
    let v_inf = v[n - 1];
    Ok(LagrangianState {
        time: t,
        alpha,
        xi: x0.xi.clone(),
        y,
        u,
        v,
        h: x0.h.clone(),
        y_xi,
        u_xi,
        v_xi,
        h_xi: x0.h_xi.clone(),
        tau: x0.tau.clone(),
        u_minus_inf,
        zeta_minus_inf,
        v_inf,
        h_inf: x0.h_inf,
    })
}

/// Pushes a state back to Eulerian variables. Cells whose image has
/// collapsed produce atoms of `F` and `G` carrying the cell's `V` and `H`
/// increments; elsewhere the reconstruction is linear interpolation in `y`.
pub fn to_eulerian(x: &LagrangianState) -> Result<EulerianTriple> {
    let n = x.xi.len();
    let span = (x.y[n - 1] - x.y[0]).abs();
    let thr = COLLAPSE_REL * span.max(1.0);

    let mut xs = vec![x.y[0]];
    let mut us = vec![x.u[0]];
    let mut f_cont = vec![0.0f64];
    let mut g_cont = vec![0.0f64];
    let mut f_atoms: Vec<crate::pwl::Atom> = Vec::new();
    let mut g_atoms: Vec<crate::pwl::Atom> = Vec::new();

    let push_atom = |atoms: &mut Vec<crate::pwl::Atom>, xloc: f64, mass: f64| {
        if mass <= 0.0 {
            return;
        }
        match atoms.last_mut() {
            Some(a) if a.x == xloc => a.mass += mass,
            _ => atoms.push(crate::pwl::Atom { x: xloc, mass }),
        }
    };

    for j in 0..x.num_cells() {
        let dy = x.y[j + 1] - x.y[j];
        let dv = x.v[j + 1] - x.v[j];
        let dh = x.h[j + 1] - x.h[j];
        if dy.abs() <= thr {
            let here = *xs.last().unwrap();
            push_atom(&mut f_atoms, here, dv);
            push_atom(&mut g_atoms, here, dh);
        } else {
            xs.push(x.y[j + 1]);
            us.push(x.u[j + 1]);
            f_cont.push(f_cont.last().unwrap() + dv);
            g_cont.push(g_cont.last().unwrap() + dh);
        }
    }

    let u = PiecewiseLinearFn::new(xs.clone(), us)?;
    let f = MonotoneCdf::new(PiecewiseLinearFn::new(xs.clone(), f_cont)?, f_atoms)?;
    let g = MonotoneCdf::new(PiecewiseLinearFn::new(xs, g_cont)?, g_atoms)?;
    EulerianTriple::new(u, f, g, x.alpha)
}

/// The stability density over ξ: `(1−α)V_ξ` on cells that will break
/// (`U_ξ < 0`), `V_ξ` on the rest. Constant along the exact flow.
pub fn g_stability(x: &LagrangianState) -> PiecewiseConstantFn {
    let cells = (0..x.num_cells())
        .map(|j| {
            if x.u_xi[j] < 0.0 {
                (1.0 - x.alpha) * x.v_xi[j]
            } else {
                x.v_xi[j]
            }
        })
        .collect();
    PiecewiseConstantFn::new(x.xi.clone(), cells, 0.0).expect("xi nodes are sorted")
}

fn derivative_fn(x: &LagrangianState, which: impl Fn(usize) -> f64, outside: f64) -> PiecewiseConstantFn {
    let cells = (0..x.num_cells()).map(which).collect();
    PiecewiseConstantFn::new(x.xi.clone(), cells, outside).expect("xi nodes are sorted")
}

/// The seven-term Lagrangian distance
/// `‖y−ŷ‖_∞ + ‖U−Û‖_∞ + ‖H_ξ−Ĥ_ξ‖₁ + ‖y_ξ−ŷ_ξ‖₂ + ‖U_ξ−Û_ξ‖₂ +
/// ‖g+y_ξ−ĝ−ŷ_ξ‖₂ + ‖H_ξ−Ĥ_ξ‖₂`,
/// computed exactly on the merged node set. Requires matching α and time.
pub fn metric_d(a: &LagrangianState, b: &LagrangianState) -> Result<f64> {
    if a.alpha != b.alpha {
        return Err(Error::InvalidInput(format!(
            "metric requires equal alpha: {} vs {}",
            a.alpha, b.alpha
        )));
    }
    if a.time != b.time {
        return Err(Error::InvalidInput(format!(
            "metric requires equal time stamps: {} vs {}",
            a.time, b.time
        )));
    }
    let merged = merge_nodes(&a.xi, &b.xi);
    let mut sup_y: f64 = (a.zeta_minus_inf - b.zeta_minus_inf).abs();
    let mut sup_u: f64 = (a.u_minus_inf - b.u_minus_inf).abs();
    // right-tail offsets are constant beyond the last node
    let zeta_right = |s: &LagrangianState| s.y[s.xi.len() - 1] - s.xi[s.xi.len() - 1];
    sup_y = sup_y.max((zeta_right(a) - zeta_right(b)).abs());
    sup_u = sup_u.max((a.u[a.xi.len() - 1] - b.u[b.xi.len() - 1]).abs());
    for &xi in &merged {
        sup_y = sup_y.max((a.eval_y(xi) - b.eval_y(xi)).abs());
        sup_u = sup_u.max((a.eval_u(xi) - b.eval_u(xi)).abs());
    }

    use crate::pwl::{piecewise_constant_norm_diff as pcn, LpNorm};
    let ga = g_stability(a);
    let gb = g_stability(b);
    let h1 = pcn(
        &derivative_fn(a, |j| a.h_xi[j], 0.0),
        &derivative_fn(b, |j| b.h_xi[j], 0.0),
        LpNorm::L1,
    );
    let h2 = pcn(
        &derivative_fn(a, |j| a.h_xi[j], 0.0),
        &derivative_fn(b, |j| b.h_xi[j], 0.0),
        LpNorm::L2,
    );
    let y2 = pcn(
        &derivative_fn(a, |j| a.y_xi[j], 1.0),
        &derivative_fn(b, |j| b.y_xi[j], 1.0),
        LpNorm::L2,
    );
    let u2 = pcn(
        &derivative_fn(a, |j| a.u_xi[j], 0.0),
        &derivative_fn(b, |j| b.u_xi[j], 0.0),
        LpNorm::L2,
    );
    let gy2 = pcn(
        &derivative_fn(a, |j| ga.cells[j] + a.y_xi[j], 1.0),
        &derivative_fn(b, |j| gb.cells[j] + b.y_xi[j], 1.0),
        LpNorm::L2,
    );
    Ok(sup_y + sup_u + h1 + y2 + u2 + gy2 + h2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eulerian::{total_energy, EulerianTriple};
    use crate::projection::{project, GridSpec};
    use crate::pwl::{Atom, LpNorm, PiecewiseLinearFn};

    fn multipeakon(alpha: f64, beta: f64) -> EulerianTriple {
        let u = PiecewiseLinearFn::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        EulerianTriple::from_u_and_atoms(alpha, u, vec![Atom { x: 0.0, mass: beta }]).unwrap()
    }

    /// Projected on the atom-aligned grid dx = 1/2, origin 0, the
    /// multipeakon state is reproduced exactly; its Lagrangian image is the
    /// closed-form one.
    fn mp_lagrangian(alpha: f64, beta: f64) -> LagrangianState {
        let s = multipeakon(alpha, beta);
        let grid = GridSpec::covering(0.5, 0.0, s.support).unwrap();
        to_lagrangian(&project(&s, &grid).unwrap()).unwrap()
    }

    #[test]
    fn jump_cell_from_the_atom() {
        let x = mp_lagrangian(0.5, 0.5);
        // y = 0 exactly on the jump cell (0, 1/2]
        assert_eq!(x.eval_y(0.0), 0.0);
        assert_eq!(x.eval_y(0.25), 0.0);
        assert_eq!(x.eval_y(0.5), 0.0);
        assert!(x.eval_y(-0.5) < 0.0);
        // jump-cell width equals the atom mass
        let j = (0..x.num_cells())
            .find(|&j| x.cell_width(j) > 0.0 && x.y_xi[j] == 0.0)
            .unwrap();
        assert_eq!(x.cell_width(j), 0.5);
        assert_eq!(x.h_xi[j], 1.0);
        assert_eq!(x.v_xi[j], 1.0);
        assert_eq!(x.tau[j], 0.0);
    }

    #[test]
    fn atom_free_input_gives_zero_width_pairs() {
        let u = PiecewiseLinearFn::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        let s = EulerianTriple::from_u_and_atoms(0.5, u, vec![]).unwrap();
        let x = to_lagrangian(&s).unwrap();
        // labels come in coincident pairs at every node of (u, F)
        for i in (0..x.xi.len()).step_by(2) {
            assert_eq!(x.xi[i], x.xi[i + 1]);
        }
    }

    #[test]
    fn cell_widths_match_grid_plus_energy_increment() {
        let s = multipeakon(0.5, 0.5);
        let grid = GridSpec::covering(0.5, 0.0, s.support).unwrap();
        let p = project(&s, &grid).unwrap();
        let x = to_lagrangian(&p).unwrap();
        // interior (non-jump) cells: width = dx + F increment over the cell
        for j in 0..x.num_cells() {
            let w = x.cell_width(j);
            if w == 0.0 || x.y_xi[j] == 0.0 {
                continue;
            }
            let dxs = x.y[j + 1] - x.y[j];
            let df = p.f.eval_left(x.y[j + 1]) - p.f.eval_right(x.y[j]);
            assert!((w - (dxs + df)).abs() < 1e-12, "cell {j}");
        }
    }

    #[test]
    fn breaking_times_on_the_falling_flank() {
        let x = mp_lagrangian(0.5, 0.5);
        for j in 0..x.num_cells() {
            if x.cell_width(j) == 0.0 {
                continue;
            }
            let mid = 0.5 * (x.xi[j] + x.xi[j + 1]);
            if mid > 2.5 && mid < 4.5 {
                assert!((x.tau[j] - 2.0).abs() < 1e-12, "cell {j}: tau = {}", x.tau[j]);
            } else if mid > 0.0 && mid < 0.5 {
                assert_eq!(x.tau[j], 0.0);
            } else {
                assert!(x.tau[j].is_infinite());
            }
        }
    }

    #[test]
    fn breaking_time_scales_with_slope() {
        // a cell whose Eulerian slope is -4 breaks at 1/2
        assert_eq!(cell_breaking_time(0.2, -0.8), 0.5);
        assert!(cell_breaking_time(0.2, 0.8).is_infinite());
        assert_eq!(cell_breaking_time(0.0, 0.0), 0.0);
    }

    #[test]
    fn conservative_evolution_keeps_energy() {
        let x0 = mp_lagrangian(0.0, 0.5);
        for t in [0.0, 0.7, 2.0, 3.5, 10.0] {
            let xt = evolve(&x0, t).unwrap();
            assert!((xt.v_inf - x0.v_inf).abs() < 1e-12);
        }
    }

    #[test]
    fn velocity_plateau_before_breaking() {
        // U(t, xi) = -(2+beta) t / 4 for xi <= 0 prior to breaking
        let x0 = mp_lagrangian(0.5, 0.5);
        let xt = evolve(&x0, 1.0).unwrap();
        assert!((xt.eval_u(-1.0) - (-0.625)).abs() < 1e-12);
        assert!((xt.u_minus_inf - (-0.625)).abs() < 1e-12);
    }

    #[test]
    fn characteristics_collapse_at_breaking() {
        let x0 = mp_lagrangian(0.5, 0.5);
        let x2 = evolve(&x0, 2.0).unwrap();
        // all labels in (2.5, 4.5) sit at x = (6 + beta) / 2 = 3.25
        for xi in [2.6, 3.0, 3.7, 4.4] {
            assert!((x2.eval_y(xi) - 3.25).abs() < 1e-12, "xi = {xi}");
        }
    }

    #[test]
    fn dissipation_after_breaking() {
        let x0 = mp_lagrangian(0.5, 0.5);
        for t in [2.0, 2.5, 4.0] {
            let xt = evolve(&x0, t).unwrap();
            assert!((xt.v_inf - 2.0).abs() < 1e-12, "t = {t}: V_inf = {}", xt.v_inf);
        }
        let before = evolve(&x0, 1.999999).unwrap();
        assert!((before.v_inf - 2.5).abs() < 1e-12);
    }

    #[test]
    fn eulerian_roundtrip_at_time_zero() {
        let s = multipeakon(0.5, 0.5);
        let grid = GridSpec::covering(0.5, 0.0, s.support).unwrap();
        let p = project(&s, &grid).unwrap();
        let back = to_eulerian(&to_lagrangian(&p).unwrap()).unwrap();
        let w = (-1.5, 3.5);
        assert!(crate::pwl::norm_diff(&back.u, &p.u, LpNorm::LInf, w).unwrap() < 1e-12);
        assert!(crate::pwl::cdf_norm_diff(&back.f, &p.f, LpNorm::LInf, w).unwrap() < 1e-12);
        assert!(crate::pwl::cdf_norm_diff(&back.g, &p.g, LpNorm::LInf, w).unwrap() < 1e-12);
        assert_eq!(back.f.atom_mass_at(0.0), 0.5);
    }

    #[test]
    fn concentration_produces_atom_with_dissipated_mass() {
        let x0 = mp_lagrangian(0.5, 0.5);
        let s2 = to_eulerian(&evolve(&x0, 2.0).unwrap()).unwrap();
        // F carries the post-drop mass, G the conserved mass
        assert!((s2.f.atom_mass_at(3.25) - 0.5).abs() < 1e-12);
        assert!((s2.g.atom_mass_at(3.25) - 1.0).abs() < 1e-12);
        assert!((total_energy(&s2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reconstructed_u_is_single_valued_at_collapse() {
        let x0 = mp_lagrangian(0.5, 0.5);
        let s2 = to_eulerian(&evolve(&x0, 2.0).unwrap()).unwrap();
        // u continuous across the concentration point
        let left = s2.u.eval(3.25 - 1e-9);
        let right = s2.u.eval(3.25 + 1e-9);
        assert!((left - right).abs() < 1e-6);
    }

    #[test]
    fn stability_density_cases() {
        let mut x = mp_lagrangian(0.4, 0.5);
        x.alpha = 0.4;
        let g = g_stability(&x);
        for j in 0..x.num_cells() {
            if x.cell_width(j) == 0.0 {
                continue;
            }
            let mid = 0.5 * (x.xi[j] + x.xi[j + 1]);
            if x.u_xi[j] < 0.0 {
                assert!((g.eval(mid) - 0.6 * x.v_xi[j]).abs() < 1e-15);
            } else {
                assert!((g.eval(mid) - x.v_xi[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn stability_density_constant_along_flow() {
        let x0 = mp_lagrangian(0.5, 0.5);
        let g0 = g_stability(&x0);
        for k in 0..=64 {
            let t = 4.0 * k as f64 / 64.0;
            let gt = g_stability(&evolve(&x0, t).unwrap());
            let d = crate::pwl::piecewise_constant_norm_diff(&g0, &gt, LpNorm::LInf);
            assert!(d <= 1e-12, "t = {t}: drift {d}");
        }
    }

    #[test]
    fn metric_is_zero_on_identical_states_and_symmetric() {
        let a = mp_lagrangian(0.5, 0.5);
        assert_eq!(metric_d(&a, &a).unwrap(), 0.0);
        // a misaligned grid gives a genuinely different state
        let s = multipeakon(0.5, 0.5);
        let grid = GridSpec::covering(0.25, -0.13, s.support).unwrap();
        let b = to_lagrangian(&project(&s, &grid).unwrap()).unwrap();
        let ab = metric_d(&a, &b).unwrap();
        let ba = metric_d(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12 * (1.0 + ab));
        assert!(ab > 0.0);
    }

    #[test]
    fn metric_rejects_mismatched_stamps() {
        let a = mp_lagrangian(0.5, 0.5);
        let b = evolve(&a, 1.0).unwrap();
        assert!(metric_d(&a, &b).is_err());
        let mut c = mp_lagrangian(0.3, 0.5);
        c.alpha = 0.3;
        assert!(metric_d(&a, &c).is_err());
    }

    #[test]
    fn redundant_node_does_not_change_the_eulerian_image() {
        let x0 = mp_lagrangian(0.5, 0.5);
        let xt = evolve(&x0, 1.5).unwrap();
        let refined = xt.with_node_inserted(1.2345);
        let a = to_eulerian(&xt).unwrap();
        let b = to_eulerian(&refined).unwrap();
        let w = (-4.0, 6.0);
        assert!(crate::pwl::norm_diff(&a.u, &b.u, LpNorm::LInf, w).unwrap() < 1e-13);
        assert!(crate::pwl::cdf_norm_diff(&a.f, &b.f, LpNorm::LInf, w).unwrap() < 1e-13);
    }

    #[test]
    fn zero_state_survives_the_full_pipeline() {
        let z = EulerianTriple::zero(0.5);
        let x0 = to_lagrangian(&z).unwrap();
        let xt = evolve(&x0, 3.0).unwrap();
        assert_eq!(xt.v_inf, 0.0);
        let back = to_eulerian(&xt).unwrap();
        assert_eq!(total_energy(&back), 0.0);
        assert_eq!(back.u.eval(0.7), 0.0);
    }

    #[test]
    fn lagrangian_map_requires_matching_measures() {
        // mu != nu (the extended-projection setting) has no Lagrangian image
        let f_ac = PiecewiseLinearFn::new(vec![0.0, 2.0], vec![0.0, 2.0]).unwrap();
        let f = crate::pwl::MonotoneCdf::new(f_ac.clone(), vec![Atom { x: 0.0, mass: 0.5 }]).unwrap();
        let g = crate::pwl::MonotoneCdf::new(f_ac, vec![Atom { x: 0.0, mass: 1.0 }]).unwrap();
        let u = PiecewiseLinearFn::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        let s = EulerianTriple::new(u, f, g, 0.5).unwrap();
        assert!(to_lagrangian(&s).is_err());
    }

    #[test]
    fn evolve_only_from_time_zero() {
        let x0 = mp_lagrangian(0.5, 0.5);
        let x1 = evolve(&x0, 1.0).unwrap();
        assert!(evolve(&x1, 2.0).is_err());
        assert!(evolve(&x0, -0.1).is_err());
    }

    #[test]
    fn invariant_relation_and_growth_bound() {
        let x0 = mp_lagrangian(0.5, 0.5);
        for t in [0.0, 0.5, 1.9, 2.0, 2.1, 4.0] {
            let xt = evolve(&x0, t).unwrap();
            for j in 0..xt.num_cells() {
                if xt.cell_width(j) == 0.0 {
                    continue;
                }
                let lhs = xt.u_xi[j] * xt.u_xi[j];
                let rhs = xt.y_xi[j] * xt.v_xi[j];
                assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0), "t={t} cell {j}");
                let s0 = x0.y_xi[j] + x0.h_xi[j];
                let st = xt.y_xi[j] + xt.h_xi[j];
                assert!(st <= (0.5 * t).exp() * s0 * (1.0 + 1e-12));
                assert!(st >= (-0.5 * t).exp() * s0 * (1.0 - 1e-12));
                assert!(xt.h_xi[j] == x0.h_xi[j]);
                assert!(xt.v_xi[j] >= -1e-15 && xt.v_xi[j] <= xt.h_xi[j] + 1e-15);
            }
        }
    }
}
