//! Independent check of the closed-form evolution: the per-cell system is
//! integrated by RK4 split at each cell's breaking time (the right-hand
//! sides are polynomial in time, so RK4 is exact there), and the
//! asymptotic values are rebuilt by integrating the piecewise-constant
//! total energy over its breakpoints. Nothing here calls `evolve`'s
//! internals; agreement is required at rounding level.

mod common;

use hsx::lagrangian::{evolve, to_lagrangian, LagrangianState};
use hsx::projection::{project, GridSpec};
use hsx::reference::MultipeakonSolution;

struct CellTrack {
    y_xi: f64,
    u_xi: f64,
    v_xi: f64,
}

/// RK4 for (y_xi' = U_xi, U_xi' = V_xi / 2) with constant V_xi.
fn rk4_segment(mut y: f64, mut u: f64, v: f64, t0: f64, t1: f64, steps: usize) -> (f64, f64) {
    let h = (t1 - t0) / steps as f64;
    for _ in 0..steps {
        // k-values for the linear system; V is constant on the segment
        let (k1y, k1u) = (u, 0.5 * v);
        let (k2y, k2u) = (u + 0.5 * h * k1u, 0.5 * v);
        let (k3y, k3u) = (u + 0.5 * h * k2u, 0.5 * v);
        let (k4y, k4u) = (u + h * k3u, 0.5 * v);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    }
    (y, u)
}

fn integrate_cell(x0: &LagrangianState, j: usize, t: f64) -> CellTrack {
    let alpha = x0.alpha;
    let tau = x0.tau[j];
    let (mut y, mut u, mut v) = (x0.y_xi[j], x0.u_xi[j], x0.v_xi[j]);
    if tau > 0.0 && tau.is_finite() && t >= tau {
        let r = rk4_segment(y, u, v, 0.0, tau, 16);
        y = r.0;
        u = r.1;
        v *= 1.0 - alpha;
        let r = rk4_segment(y, u, v, tau, t, 16);
        y = r.0;
        u = r.1;
    } else {
        let r = rk4_segment(y, u, v, 0.0, t, 16);
        y = r.0;
        u = r.1;
    }
    CellTrack { y_xi: y, u_xi: u, v_xi: v }
}

/// ∫_0^t V_inf(s) ds and the double integral, rebuilt by walking the
/// sorted breaking times of the cells.
fn energy_integrals(x0: &LagrangianState, t: f64) -> (f64, f64) {
    let alpha = x0.alpha;
    let mut events: Vec<(f64, f64)> = Vec::new(); // (tau, energy dropping there)
    let mut v_total = 0.0;
    for j in 0..x0.num_cells() {
        let w = x0.xi[j + 1] - x0.xi[j];
        v_total += x0.v_xi[j] * w;
        let tau = x0.tau[j];
        if tau > 0.0 && tau.is_finite() && tau <= t {
            events.push((tau, alpha * x0.v_xi[j] * w));
        }
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut int1 = 0.0; // integral of V_inf
    let mut int2 = 0.0; // integral of int1
    let mut s = 0.0;
    let mut v = v_total;
    let mut acc1 = 0.0;
    for &(tau, drop) in events.iter() {
        let dt = tau - s;
        int2 += acc1 * dt + 0.5 * v * dt * dt;
        acc1 += v * dt;
        int1 = acc1;
        v -= drop;
        s = tau;
    }
    let dt = t - s;
    int2 += acc1 * dt + 0.5 * v * dt * dt;
    int1 = acc1 + v * dt;
    (int1, int2)
}

#[test]
fn closed_form_evolution_matches_stepwise_integration() {
    // misaligned grid: breaking times spread over (1.4, 9+) instead of
    // collapsing onto {0, 2}, which exercises every code path
    let s = MultipeakonSolution::new(0.5, 0.5).initial_state();
    let grid = GridSpec::covering(0.123, -0.217, s.support).unwrap();
    let x0 = to_lagrangian(&project(&s, &grid).unwrap()).unwrap();

    for &t in &[0.0, 0.5, 1.43, 2.0, 2.71, 4.0, 7.3] {
        let xt = evolve(&x0, t).unwrap();

        // asymptotics via the independent energy integrals
        let (int1, int2) = energy_integrals(&x0, t);
        let u_minus = x0.u_minus_inf - 0.25 * int1;
        let zeta_minus = x0.u_minus_inf * t - 0.25 * int2;
        assert!(
            (xt.u_minus_inf - u_minus).abs() < 1e-11,
            "t={t}: U(-inf) {} vs {}",
            xt.u_minus_inf,
            u_minus
        );
        assert!(
            (xt.zeta_minus_inf - zeta_minus).abs() < 1e-11,
            "t={t}: zeta(-inf) {} vs {}",
            xt.zeta_minus_inf,
            zeta_minus
        );

        // per-cell data via split RK4, then nodal values by summation
        let mut u_node = u_minus;
        let mut zeta_node = zeta_minus;
        let mut v_node = 0.0;
        for j in 0..x0.num_cells() {
            let w = x0.xi[j + 1] - x0.xi[j];
            let c = integrate_cell(&x0, j, t);
            assert!((xt.y_xi[j] - c.y_xi).abs() < 1e-12, "t={t} cell {j}: y_xi");
            assert!((xt.u_xi[j] - c.u_xi).abs() < 1e-12, "t={t} cell {j}: U_xi");
            assert!((xt.v_xi[j] - c.v_xi).abs() < 1e-13, "t={t} cell {j}: V_xi");
            u_node += c.u_xi * w;
            zeta_node += (c.y_xi - 1.0) * w;
            v_node += c.v_xi * w;
        }
        let last = x0.xi.len() - 1;
        assert!((xt.u[last] - u_node).abs() < 1e-11, "t={t}: nodal U");
        assert!(
            (xt.y[last] - (x0.xi[last] + zeta_node)).abs() < 1e-11,
            "t={t}: nodal y"
        );
        assert!((xt.v_inf - v_node).abs() < 1e-12, "t={t}: V_inf");
    }
}
