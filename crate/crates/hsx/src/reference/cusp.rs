//! The cusp family: `u₀ = |x|^{2/3}` on `[-1, 1]` with purely absolutely
//! continuous energy. Breaking times accumulate on `[0, 3]`; at every time
//! only an infinitesimal amount of energy concentrates. The closed form is
//! valid for `t ∈ [0, 3]`.
//!
//! The implicit characteristic relation is solved for the *signed cube
//! root* `z = sgn(ȳ)|ȳ|^{1/3}`; in that variable the relation
//! `z³ + (4/3)z + 4/3 = ξ` has slope bounded in `[4/3, 13/3]`, so a width-
//! `1e-13` bisection bracket gives a `ξ`-residual well below 1e-12 even at
//! the cusp tip (where the relation in `ȳ` itself has unbounded inverse
//! slope).

use super::bisect;
use crate::projection::InitialDataSource;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct CuspSolution {
    pub alpha: f64,
}

impl CuspSolution {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    /// Signed cube root of the initial characteristic position `ȳ(ξ)`,
    /// for labels in `[-1, 11/3]`.
    pub fn zbar(&self, xi: f64) -> Result<f64> {
        if xi <= -1.0 {
            return Ok(xi.cbrt());
        }
        if xi >= 11.0 / 3.0 {
            return Ok((xi - 8.0 / 3.0).cbrt());
        }
        bisect(|z| z * z * z + 4.0 / 3.0 * z + 4.0 / 3.0 - xi, -1.0, 1.0)
    }

    /// `ȳ(ξ)`: identity below −1, `ξ − 8/3` above 11/3, implicit between.
    pub fn ybar(&self, xi: f64) -> Result<f64> {
        if xi <= -1.0 {
            return Ok(xi);
        }
        if xi >= 11.0 / 3.0 {
            return Ok(xi - 8.0 / 3.0);
        }
        Ok(self.zbar(xi)?.powi(3))
    }

    /// Breaking time along the characteristic labeled ξ:
    /// `3|ȳ(ξ)|^{1/3}` on `(-1, 4/3]`, +∞ otherwise.
    pub fn tau(&self, xi: f64) -> Result<f64> {
        if xi <= -1.0 || xi > 4.0 / 3.0 {
            return Ok(f64::INFINITY);
        }
        Ok(3.0 * self.zbar(xi)?.abs())
    }

    /// The Lagrangian wave-breaking curve `ξ(t) = -(t/3)³ + (4/3)(1 - t/3)`,
    /// strictly decreasing on `(0, 3]`.
    pub fn breaking_curve(&self, t: f64) -> f64 {
        -(t / 3.0).powi(3) + 4.0 / 3.0 * (1.0 - t / 3.0)
    }

    pub fn total_energy(&self, t: f64) -> f64 {
        8.0 / 3.0 - 4.0 / 9.0 * self.alpha * t
    }

    /// `(y, U, V)(t, ξ)` for `t ∈ [0, 3]`.
    pub fn lagrangian(&self, t: f64, xi: f64) -> Result<(f64, f64, f64)> {
        let a = self.alpha;
        if xi <= -1.0 {
            return Ok((
                xi + t - t * t / 3.0 + a * t.powi(3) / 54.0,
                1.0 - 2.0 * t / 3.0 + a * t * t / 18.0,
                0.0,
            ));
        }
        if xi > 11.0 / 3.0 {
            return Ok((
                xi - 8.0 / 3.0 + t + t * t / 3.0 - a * t.powi(3) / 54.0,
                1.0 + 2.0 * t / 3.0 - a * t * t / 18.0,
                8.0 / 3.0 - 4.0 / 9.0 * a * t,
            ));
        }
        let z = self.zbar(xi)?;
        let xit = self.breaking_curve(t);
        if xi < xit {
            // not yet broken; here z <= 0
            Ok((
                (z + t / 3.0).powi(3) - (2.0 - a) * t.powi(3) / 54.0,
                (z + t / 3.0).powi(2) - (2.0 - a) * t * t / 18.0,
                4.0 / 3.0 * (z + 1.0),
            ))
        } else if xi <= 4.0 / 3.0 {
            // broken at tau = 3|z|
            let s = 3.0 * z.abs() - t;
            Ok((
                -(1.0 - a) / 27.0 * s.powi(3) - (2.0 - a) * t.powi(3) / 54.0,
                (1.0 - a) / 9.0 * s * s - (2.0 - a) * t * t / 18.0,
                4.0 / 3.0 * ((1.0 - a) * z + 1.0 - a * t / 3.0),
            ))
        } else {
            // right of the tip; never breaks
            Ok((
                (z + t / 3.0).powi(3) - (2.0 + a) * t.powi(3) / 54.0,
                (z + t / 3.0).powi(2) - (2.0 + a) * t * t / 18.0,
                4.0 / 3.0 * (z + 1.0 - a * t / 3.0),
            ))
        }
    }

    /// Branch boundaries of the exact Eulerian solution at time `t`.
    pub fn breakpoints(&self, t: f64) -> Vec<f64> {
        let a = self.alpha;
        vec![
            -1.0 + t - t * t / 3.0 + a * t.powi(3) / 54.0,
            -(2.0 - a) * t.powi(3) / 54.0,
            -a * t.powi(3) / 54.0,
            1.0 + t + t * t / 3.0 - a * t.powi(3) / 54.0,
        ]
    }

    /// `(u, F)(t, x)` for `t ∈ [0, 3]`; no implicit solve is needed in
    /// Eulerian variables.
    pub fn eulerian(&self, t: f64, x: f64) -> (f64, f64) {
        let a = self.alpha;
        let bp = self.breakpoints(t);
        if x <= bp[0] {
            (1.0 - 2.0 * t / 3.0 + a * t * t / 18.0, 0.0)
        } else if x <= bp[1] {
            let c = (x + (2.0 - a) * t.powi(3) / 54.0).cbrt();
            (
                c * c - (2.0 - a) * t * t / 18.0,
                4.0 / 3.0 * (c + 1.0 - t / 3.0),
            )
        } else if x <= bp[2] {
            let c = (x + (2.0 - a) * t.powi(3) / 54.0).cbrt();
            let w = 1.0 - a;
            (
                w.powf(1.0 / 3.0) * c * c - (2.0 - a) * t * t / 18.0,
                4.0 / 3.0 * (w.powf(2.0 / 3.0) * c + 1.0 - t / 3.0),
            )
        } else if x <= bp[3] {
            let c = (x + (2.0 + a) * t.powi(3) / 54.0).cbrt();
            (
                c * c - (2.0 + a) * t * t / 18.0,
                4.0 / 3.0 * (c + 1.0 - (1.0 + a) * t / 3.0),
            )
        } else {
            (1.0 + 2.0 * t / 3.0 - a * t * t / 18.0, 8.0 / 3.0 - 4.0 / 9.0 * a * t)
        }
    }
}

/// Sampled initial data for the projection (the profile is not piecewise
/// linear, so nodal values come from the closed form, not from a state).
impl InitialDataSource for CuspSolution {
    fn alpha(&self) -> f64 {
        self.alpha
    }
    fn u(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            1.0
        } else {
            x.abs().powf(2.0 / 3.0)
        }
    }
    fn f_ac(&self, x: f64) -> f64 {
        if x <= -1.0 {
            0.0
        } else if x >= 1.0 {
            8.0 / 3.0
        } else {
            4.0 / 3.0 * (x.cbrt() + 1.0)
        }
    }
    fn f_sing(&self, _x: f64) -> f64 {
        0.0
    }
    fn g_ac(&self, x: f64) -> f64 {
        self.f_ac(x)
    }
    fn g_sing(&self, _x: f64) -> f64 {
        0.0
    }
    fn support(&self) -> (f64, f64) {
        (-1.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: f64 = 0.4;

    #[test]
    fn characteristic_relation_fixed_points() {
        let c = CuspSolution::new(A);
        assert!((c.ybar(-1.0).unwrap() + 1.0).abs() < 1e-12);
        assert!((c.ybar(4.0 / 3.0).unwrap()).abs() < 1e-12);
        assert!((c.ybar(11.0 / 3.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relation_residual_below_tolerance() {
        let c = CuspSolution::new(A);
        let mut xi = -0.999;
        while xi < 11.0 / 3.0 {
            let z = c.zbar(xi).unwrap();
            let res = (z.powi(3) + 4.0 / 3.0 * z + 4.0 / 3.0 - xi).abs();
            assert!(res < 1e-12, "residual {res} at xi={xi}");
            xi += 0.0517;
        }
    }

    #[test]
    fn ybar_is_monotone() {
        let c = CuspSolution::new(A);
        let mut prev = f64::NEG_INFINITY;
        let mut xi = -2.0;
        while xi < 4.5 {
            let y = c.ybar(xi).unwrap();
            assert!(y >= prev - 1e-13);
            prev = y;
            xi += 0.03;
        }
    }

    #[test]
    fn breaking_time_comes_from_the_cube_root() {
        let c = CuspSolution::new(A);
        for xi in [-0.5, 0.0, 0.7, 1.2] {
            let z = c.zbar(xi).unwrap();
            assert!((c.tau(xi).unwrap() - 3.0 * z.abs()).abs() < 1e-13);
        }
        assert!(c.tau(-1.5).unwrap().is_infinite());
        assert!(c.tau(2.0).unwrap().is_infinite());
    }

    #[test]
    fn breaking_curve_strictly_decreasing() {
        let c = CuspSolution::new(A);
        let mut prev = c.breaking_curve(1e-6);
        let mut t = 0.05;
        while t <= 3.0 {
            let v = c.breaking_curve(t);
            assert!(v < prev);
            prev = v;
            t += 0.05;
        }
    }

    #[test]
    fn total_energy_values() {
        let c = CuspSolution::new(A);
        assert!((c.total_energy(0.0) - 8.0 / 3.0).abs() < 1e-15);
        assert!((c.total_energy(3.0) - 32.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn lagrangian_energy_matches_eulerian_total() {
        let c = CuspSolution::new(A);
        for t in [0.0, 0.8, 1.9, 3.0] {
            let (_, _, v) = c.lagrangian(t, 50.0).unwrap();
            assert!((v - c.total_energy(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_profile_values() {
        let c = CuspSolution::new(A);
        let (u, f) = c.eulerian(0.0, 1.0);
        assert!((u - 1.0).abs() < 1e-12);
        assert!((f - 8.0 / 3.0).abs() < 1e-12);
        let (u0, _) = c.eulerian(0.0, -0.5);
        assert!((u0 - 0.5f64.powf(2.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn eulerian_and_lagrangian_views_agree() {
        let c = CuspSolution::new(A);
        for &t in &[0.0, 0.7, 1.5, 2.4, 3.0] {
            let mut xi = -1.8;
            while xi <= 4.2 {
                let (y, u_l, v) = c.lagrangian(t, xi).unwrap();
                let (u_e, f_e) = c.eulerian(t, y);
                assert!((u_l - u_e).abs() < 5e-9, "u at t={t}, xi={xi}: {u_l} vs {u_e}");
                assert!((v - f_e).abs() < 5e-9, "F at t={t}, xi={xi}: {v} vs {f_e}");
                xi += 0.025;
            }
        }
    }

    #[test]
    fn branch_values_continuous_across_breakpoints() {
        let c = CuspSolution::new(A);
        for &t in &[0.3, 1.0, 2.0, 2.9] {
            for &x in &c.breakpoints(t) {
                let (ul, fl) = c.eulerian(t, x);
                let (ur, fr) = c.eulerian(t, x + 1e-13);
                // the profile has infinite slope at the middle breakpoints;
                // a 1e-13 step moves u by ~(1e-13)^(1/3)·slope-scale
                assert!((ul - ur).abs() < 1e-4, "u jump at t={t}, x={x}");
                assert!((fl - fr).abs() < 1e-4, "F jump at t={t}, x={x}");
            }
        }
    }

    #[test]
    fn sampled_initial_source_is_consistent() {
        let c = CuspSolution::new(A);
        // f_ac is the cumulative of u_x^2 (finite-difference cross-check)
        let h = 1e-6;
        for x in [-0.9, -0.4, 0.3, 0.8] {
            let ux = (InitialDataSource::u(&c, x + h) - InitialDataSource::u(&c, x - h)) / (2.0 * h);
            let dfac = (c.f_ac(x + h) - c.f_ac(x - h)) / (2.0 * h);
            assert!((dfac - ux * ux).abs() < 1e-4, "x={x}: {dfac} vs {}", ux * ux);
        }
        assert!((c.f_ac(1.0) - 8.0 / 3.0).abs() < 1e-14);
    }
}
