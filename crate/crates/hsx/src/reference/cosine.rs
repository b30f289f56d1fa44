//! The cosine family: `u₀ = cos(πx)` on `[0, 4]` (1 outside) with smooth,
//! purely absolutely continuous energy `π² sin²(πx) dx`. Breaking starts at
//! `t = 2/π` at two labels and then happens continuously at four points per
//! time; the energy dissipates at a nonlinear rate. Only the Lagrangian
//! closed form is available.

use super::{arcosh_clamped, arcsin_clamped, bisect};
use crate::projection::InitialDataSource;
use crate::Result;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct CosineSolution {
    pub alpha: f64,
}

/// Right end of the label interval carrying the wave: `4 + 2π²`.
fn xi_max() -> f64 {
    4.0 + 2.0 * PI * PI
}

/// The strictly increasing label relation `ξ = (2+π²)/2 · y − π/4 · sin 2πy`.
fn label_of_y(y: f64) -> f64 {
    0.5 * (2.0 + PI * PI) * y - 0.25 * PI * (2.0 * PI * y).sin()
}

/// Cumulative energy in terms of the initial position:
/// `W(y) = π/4 (2πy − sin 2πy)`.
fn cumulative_energy(y: f64) -> f64 {
    0.25 * PI * (2.0 * PI * y - (2.0 * PI * y).sin())
}

impl CosineSolution {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    /// First breaking time.
    pub fn first_breaking_time(&self) -> f64 {
        2.0 / PI
    }

    /// Initial characteristic position `ȳ(ξ)`.
    pub fn ybar(&self, xi: f64) -> Result<f64> {
        if xi <= 0.0 {
            return Ok(xi);
        }
        if xi >= xi_max() {
            return Ok(xi - 2.0 * PI * PI);
        }
        bisect(|y| label_of_y(y) - xi, 0.0, 4.0)
    }

    /// Breaking time along the characteristic labeled ξ:
    /// `2 / (π sin(π ȳ))` on the two breaking bands, +∞ otherwise.
    pub fn tau(&self, xi: f64) -> Result<f64> {
        Ok(self.tau_of_ybar(self.ybar(xi)?))
    }

    fn tau_of_ybar(&self, y: f64) -> f64 {
        let in_band = (y > 0.0 && y < 1.0) || (y > 2.0 && y < 3.0);
        if !in_band {
            return f64::INFINITY;
        }
        2.0 / (PI * (PI * y).sin())
    }

    pub fn total_energy(&self, t: f64) -> f64 {
        if t < 2.0 / PI {
            return 2.0 * PI * PI;
        }
        let a = arcsin_clamped(2.0 / (PI * t));
        PI * PI * (2.0 - self.alpha) - PI * self.alpha * ((2.0 * a).sin() - 2.0 * a)
    }

    /// `∫_{2/π}^t V_∞(s) ds` in closed form (0 for `t ≤ 2/π`).
    pub fn b(&self, t: f64) -> f64 {
        if t <= 2.0 / PI {
            return 0.0;
        }
        let al = self.alpha;
        let s = (t * t - (2.0 / PI).powi(2)).max(0.0).sqrt();
        PI * PI * (2.0 - al) * (t - 2.0 / PI)
            + 2.0 * PI
                * al
                * (t * arcsin_clamped(2.0 / (PI * t)) - 1.0 + 2.0 / PI * arcosh_clamped(0.5 * PI * t))
            + 4.0 * al
                * ((1.0 - (2.0 / (PI * t)).powi(2)).max(0.0).sqrt() + (2.0 / PI).ln() - (s + t).ln())
    }

    /// `∫_{2/π}^t b(s) ds` in closed form (0 for `t ≤ 2/π`).
    pub fn b_cumulative(&self, t: f64) -> f64 {
        if t <= 2.0 / PI {
            return 0.0;
        }
        let al = self.alpha;
        let s = (t * t - (2.0 / PI).powi(2)).max(0.0).sqrt();
        4.0 * (PI * PI / 8.0 * (2.0 - al) * (t - 2.0 / PI).powi(2)
            + 0.5 * al * (1.0 - PI * t)
            + al * t * (2.0 / PI).ln()
            + 2.0 * al * s
            + 0.25
                * al
                * (PI * t * t * arcsin_clamped(2.0 / (PI * t)) - 2.0 * s
                    + 4.0 * t * arcosh_clamped(0.5 * PI * t))
            - al * (2.0 / PI * (0.5 * PI * s).atan() + t * (s + t).ln()))
    }

    /// Labels of the four moving breaking-curve points at time `t`
    /// (empty before breaking starts).
    pub fn breaking_curve_labels(&self, t: f64) -> Vec<f64> {
        if t < 2.0 / PI {
            return vec![];
        }
        let a = arcsin_clamped(2.0 / (PI * t)) / PI;
        [a, 1.0 - a, 2.0 + a, 3.0 - a].iter().map(|&y| label_of_y(y)).collect()
    }

    /// `(y, U, V, H)(t, ξ)`.
    pub fn lagrangian(&self, t: f64, xi: f64) -> Result<(f64, f64, f64, f64)> {
        Ok(self.lagrangian_with_ybar(t, xi, self.ybar(xi)?))
    }

    /// Same, with the (time-independent) solved `ȳ(ξ)` supplied by the
    /// caller; used by the probes to cache the implicit solves.
    pub fn lagrangian_with_ybar(&self, t: f64, xi: f64, yb: f64) -> (f64, f64, f64, f64) {
        let al = self.alpha;
        let tb = 2.0 / PI;
        let h = if xi <= 0.0 {
            0.0
        } else if xi >= xi_max() {
            2.0 * PI * PI
        } else {
            cumulative_energy(yb)
        };

        if t < tb {
            // no breaking yet
            if xi <= 0.0 {
                return (xi + t - 0.25 * PI * PI * t * t, 1.0 - 0.5 * PI * PI * t, 0.0, h);
            }
            if xi >= xi_max() {
                return (
                    xi - 2.0 * PI * PI + t + 0.25 * PI * PI * t * t,
                    1.0 + 0.5 * PI * PI * t,
                    2.0 * PI * PI,
                    h,
                );
            }
            let c = (PI * yb).cos();
            let s2 = 2.0 * PI * yb - (2.0 * PI * yb).sin();
            return (
                yb + c * t + PI / 16.0 * (s2 - 4.0 * PI) * t * t,
                c + PI / 8.0 * (s2 - 4.0 * PI) * t,
                h,
                h,
            );
        }

        let bt = self.b(t);
        let bbt = self.b_cumulative(t);
        if xi <= 0.0 {
            return (
                xi + 1.0 + (1.0 - PI) * t - 0.25 * bbt,
                1.0 - PI - 0.25 * bt,
                0.0,
                h,
            );
        }
        if xi >= xi_max() {
            let a = arcsin_clamped(2.0 / (PI * t));
            let corr = (2.0 * a).sin() - 2.0 * a;
            return (
                xi - 2.0 * PI * PI - 1.0 + (1.0 + PI) * t + 0.25 * bbt,
                1.0 + PI + 0.25 * bt,
                PI * PI * (2.0 - al) - PI * al * corr,
                h,
            );
        }

        let a = arcsin_clamped(2.0 / (PI * t));
        let corr = (2.0 * a).sin() - 2.0 * a;
        let (y1l, y1r) = (a / PI, 1.0 - a / PI);
        let (y2l, y2r) = (2.0 + a / PI, 3.0 - a / PI);
        let c = (PI * yb).cos();
        let s2 = 2.0 * PI * yb - (2.0 * PI * yb).sin();
        let w = cumulative_energy(yb);
        let tau = self.tau_of_ybar(yb);
        let pi2 = PI * PI;

        // V: seven branches
        let v = if yb < y1l {
            w
        } else if yb <= y1r {
            (1.0 - al) * w - 0.25 * PI * al * corr
        } else if yb < y2l {
            w - 0.5 * pi2 * al - 0.5 * PI * al * corr
        } else if yb <= y2r {
            (1.0 - al) * w + 0.5 * pi2 * al - 0.75 * PI * al * corr
        } else {
            w - pi2 * al - PI * al * corr
        };

        // U and y: nine branches (broken bands need b and its cumulative
        // evaluated at the cell's own breaking time)
        let (y, u) = if yb <= y1l {
            (
                yb + 1.0 + c * t - PI * t - 0.25 * bbt + PI / 16.0 * s2 * t * t,
                c - PI - 0.25 * bt + PI / 8.0 * s2 * t,
            )
        } else if yb <= 0.5 {
            let (btau, bbtau) = (self.b(tau), self.b_cumulative(tau));
            let dt = t - tau;
            (
                yb + 1.0 + c * t - PI * t - 0.125 * (bbt + bbtau + btau * dt)
                    + PI / 16.0 * s2 * (t * t - al * dt * dt)
                    - pi2 / 16.0 * (2.0 - al) * dt * dt,
                c - PI - 0.125 * (bt + btau) + PI / 8.0 * s2 * (t - al * dt)
                    - pi2 / 8.0 * (2.0 - al) * dt,
            )
        } else if yb <= y1r {
            let (btau, bbtau) = (self.b(tau), self.b_cumulative(tau));
            let dt = t - tau;
            (
                yb + c * t - 0.125 * (bbt - bbtau - btau * dt)
                    + PI / 16.0 * s2 * (t * t - al * dt * dt)
                    - pi2 / 16.0
                        * ((2.0 - al) * t * t + 2.0 * (2.0 + al) * t * tau
                            - (2.0 + al) * tau * tau),
                c - 0.125 * (bt - btau) + PI / 8.0 * s2 * (t - al * dt)
                    - pi2 / 8.0 * ((2.0 - al) * t + (2.0 + al) * tau),
            )
        } else if yb < y2l {
            (
                yb + c * t - 0.25 * pi2 * t * t + PI / 16.0 * s2 * t * t,
                c - 0.5 * pi2 * t + PI / 8.0 * s2 * t,
            )
        } else if yb <= 2.5 {
            let (btau, bbtau) = (self.b(tau), self.b_cumulative(tau));
            let dt = t - tau;
            (
                yb + c * t + 0.125 * (bbt - bbtau - btau * dt)
                    + PI / 16.0 * s2 * (t * t - al * dt * dt)
                    - pi2 / 16.0
                        * ((6.0 - 5.0 * al) * t * t + (-4.0 + 10.0 * al) * t * tau
                            + (2.0 - 5.0 * al) * tau * tau),
                c + 0.125 * (bt - btau) + PI / 8.0 * s2 * (t - al * dt)
                    - pi2 / 8.0 * ((6.0 - 5.0 * al) * t + (-2.0 + 5.0 * al) * tau),
            )
        } else if yb <= y2r {
            let (btau, bbtau) = (self.b(tau), self.b_cumulative(tau));
            let dt = t - tau;
            (
                yb - 1.0 + c * t + PI * t + 0.125 * (bbt + bbtau + btau * dt)
                    + PI / 16.0 * s2 * (t * t - al * dt * dt)
                    - pi2 / 16.0
                        * ((6.0 - 5.0 * al) * t * t + (4.0 + 10.0 * al) * t * tau
                            - (2.0 + 5.0 * al) * tau * tau),
                c + PI + 0.125 * (bt + btau) + PI / 8.0 * s2 * (t - al * dt)
                    - pi2 / 8.0 * ((6.0 - 5.0 * al) * t + (2.0 + 5.0 * al) * tau),
            )
        } else {
            (
                yb - 1.0 + c * t + PI * t + 0.25 * bbt - 0.5 * pi2 * t * t
                    + PI / 16.0 * s2 * t * t,
                c + PI + 0.25 * bt + PI / 8.0 * s2 * t - pi2 * t,
            )
        };
        (y, u, v, h)
    }
}

/// Sampled initial data for the projection.
impl InitialDataSource for CosineSolution {
    fn alpha(&self) -> f64 {
        self.alpha
    }
    fn u(&self, x: f64) -> f64 {
        if !(0.0..4.0).contains(&x) {
            1.0
        } else {
            (PI * x).cos()
        }
    }
    fn f_ac(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= 4.0 {
            2.0 * PI * PI
        } else {
            cumulative_energy(x)
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
        (0.0, 4.0)
    }
}
