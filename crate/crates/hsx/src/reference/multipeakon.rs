//! The multipeakon family: a hat profile with an energy atom of mass β at
//! the origin. Wave breaking happens twice: at t = 0 (the atom) and at
//! t = 2, where the energy of the falling flank concentrates at one point.

use crate::eulerian::EulerianTriple;
use crate::pwl::{Atom, PiecewiseLinearFn};

#[derive(Debug, Clone, Copy)]
pub struct MultipeakonSolution {
    pub alpha: f64,
    pub beta: f64,
}

impl MultipeakonSolution {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// The exact piecewise-linear initial state (this family is the one
    /// whose initial data the solver can represent without sampling).
    pub fn initial_state(&self) -> EulerianTriple {
        let u = PiecewiseLinearFn::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        EulerianTriple::from_u_and_atoms(self.alpha, u, vec![Atom { x: 0.0, mass: self.beta }])
            .unwrap()
    }

    pub fn total_energy(&self, t: f64) -> f64 {
        if t < 2.0 {
            2.0 + self.beta
        } else {
            2.0 + self.beta - self.alpha
        }
    }

    /// Branch boundaries of the exact Eulerian solution at time `t`.
    pub fn breakpoints(&self, t: f64) -> Vec<f64> {
        let (a, b) = (self.alpha, self.beta);
        if t < 2.0 {
            vec![
                -(2.0 + b) * t * t / 8.0,
                -(2.0 - b) * t * t / 8.0,
                1.0 + t + b * t * t / 8.0,
                2.0 + (2.0 + b) * t * t / 8.0,
            ]
        } else {
            vec![
                0.5 * a - 0.5 * a * t - (2.0 + b - a) * t * t / 8.0,
                0.5 * a - 0.5 * a * t - (2.0 - b - a) * t * t / 8.0,
                0.5 * (2.0 + a) + 0.5 * (2.0 - a) * t + (b + a) * t * t / 8.0,
                0.5 * (4.0 - a) + 0.5 * a * t + (2.0 + b - a) * t * t / 8.0,
            ]
        }
    }

    /// `(u, F)(t, x)`.
    pub fn eulerian(&self, t: f64, x: f64) -> (f64, f64) {
        let (a, b) = (self.alpha, self.beta);
        if t < 2.0 {
            let bp = self.breakpoints(t);
            if x <= bp[0] {
                (-(2.0 + b) * t / 4.0, 0.0)
            } else if x <= bp[1] {
                (2.0 * x / t, (8.0 * x + (2.0 + b) * t * t) / (2.0 * t * t))
            } else if x <= bp[2] {
                (
                    (4.0 * x - (2.0 - b) * t) / (2.0 * (t + 2.0)),
                    (8.0 * x + 8.0 * b + 8.0 * b * t + (2.0 + b) * t * t)
                        / (2.0 * (t + 2.0) * (t + 2.0)),
                )
            } else if x <= bp[3] {
                (
                    (4.0 * x - 8.0 - (2.0 + b) * t) / (2.0 * (t - 2.0)),
                    (8.0 * x + 8.0 * b - 8.0 * (2.0 + b) * t + (2.0 + b) * t * t)
                        / (2.0 * (t - 2.0) * (t - 2.0)),
                )
            } else {
                ((2.0 + b) * t / 4.0, 2.0 + b)
            }
        } else {
            let bp = self.breakpoints(t);
            if x <= bp[0] {
                (-0.5 * a - 0.25 * (2.0 + b - a) * t, 0.0)
            } else if x <= bp[1] {
                (
                    (4.0 * x - 2.0 * a + a * t) / (2.0 * t),
                    (8.0 * x - 4.0 * a + 4.0 * a * t + (2.0 + b - a) * t * t) / (2.0 * t * t),
                )
            } else if x <= bp[2] {
                (
                    (4.0 * x - 4.0 * a - (2.0 - b - 2.0 * a) * t) / (2.0 * (t + 2.0)),
                    (8.0 * x + 4.0 * (2.0 * b - a) + 4.0 * (2.0 * b + a) * t
                        + (2.0 + b - a) * t * t)
                        / (2.0 * (t + 2.0) * (t + 2.0)),
                )
            } else if x <= bp[3] {
                if t > 2.0 {
                    (
                        (4.0 * x - 8.0 - (2.0 + b) * t) / (2.0 * (t - 2.0)),
                        (8.0 * x + 4.0 * (2.0 * b - a) - 4.0 * (4.0 + 2.0 * b - a) * t
                            + (2.0 + b - a) * t * t)
                            / (2.0 * (t - 2.0) * (t - 2.0)),
                    )
                } else {
                    // at t = 2 this interval is a single point (x3 = x4);
                    // continue with the adjacent branch's values
                    (
                        (4.0 * x - 4.0 * a - (2.0 - b - 2.0 * a) * t) / (2.0 * (t + 2.0)),
                        2.0 + b - a,
                    )
                }
            } else {
                (0.5 * a + 0.25 * (2.0 + b - a) * t, 2.0 + b - a)
            }
        }
    }

    /// `(y, U, V, H)(t, ξ)`.
    pub fn lagrangian(&self, t: f64, xi: f64) -> (f64, f64, f64, f64) {
        let (a, b) = (self.alpha, self.beta);
        let h = self.initial_energy_cumulative(xi);
        if t < 2.0 {
            let (y, u) = if xi <= 0.0 {
                (xi - (2.0 + b) * t * t / 8.0, -0.25 * (2.0 + b) * t)
            } else if xi <= b {
                (
                    0.25 * xi * t * t - (2.0 + b) * t * t / 8.0,
                    0.5 * xi * t - 0.25 * (2.0 + b) * t,
                )
            } else if xi <= 2.0 + b {
                (
                    (t + 2.0) * (t + 2.0) * xi / 8.0 - 0.5 * b - 0.5 * b * t - 0.25 * t * t,
                    0.25 * (t + 2.0) * xi - 0.5 * b - 0.5 * t,
                )
            } else if xi <= 4.0 + b {
                (
                    (t - 2.0) * (t - 2.0) * xi / 8.0 - 0.5 * b + 0.5 * (4.0 + b) * t
                        - 0.25 * t * t,
                    0.25 * (t - 2.0) * xi + 0.5 * (4.0 + b) - 0.5 * t,
                )
            } else {
                (
                    xi - (2.0 + b) + (2.0 + b) * t * t / 8.0,
                    0.25 * (2.0 + b) * t,
                )
            };
            (y, u, h, h)
        } else {
            let (y, u, v) = if xi <= 0.0 {
                (
                    xi + 0.5 * a - 0.5 * a * t - (2.0 + b - a) * t * t / 8.0,
                    -0.5 * a - 0.25 * (2.0 + b - a) * t,
                    0.0,
                )
            } else if xi <= b {
                (
                    0.25 * t * t * xi + 0.5 * a - 0.5 * a * t - (2.0 + b - a) * t * t / 8.0,
                    0.5 * xi * t - 0.5 * a - 0.25 * (2.0 + b - a) * t,
                    xi,
                )
            } else if xi <= 2.0 + b {
                (
                    (t + 2.0) * (t + 2.0) * xi / 8.0 - 0.5 * (b - a) - 0.5 * (b + a) * t
                        - (2.0 - a) * t * t / 8.0,
                    0.25 * (t + 2.0) * xi - 0.5 * (b + a) - 0.25 * (2.0 - a) * t,
                    0.5 * xi + 0.5 * b,
                )
            } else if xi <= 4.0 + b {
                (
                    (1.0 - a) * (t - 2.0) * (t - 2.0) * xi / 8.0
                        - 0.5 * (b - 3.0 * a - a * b)
                        + 0.5 * (4.0 + b - 3.0 * a - a * b) * t
                        - (2.0 - 3.0 * a - a * b) * t * t / 8.0,
                    0.25 * (1.0 - a) * (t - 2.0) * xi + 0.5 * (4.0 + b - 3.0 * a - a * b)
                        - 0.25 * (2.0 - 3.0 * a - a * b) * t,
                    0.5 * (1.0 - a) * xi + 0.5 * (b + 2.0 * a + a * b),
                )
            } else {
                (
                    xi - 0.5 * (4.0 + 2.0 * b + a) + 0.5 * a * t + (2.0 + b - a) * t * t / 8.0,
                    0.5 * a + 0.25 * (2.0 + b - a) * t,
                    2.0 + b - a,
                )
            };
            (y, u, v, h)
        }
    }

    /// `V₀ = H₀` as a function of the label.
    fn initial_energy_cumulative(&self, xi: f64) -> f64 {
        let b = self.beta;
        if xi <= 0.0 {
            0.0
        } else if xi <= b {
            xi
        } else if xi <= 4.0 + b {
            0.5 * xi + 0.5 * b
        } else {
            2.0 + b
        }
    }
}
