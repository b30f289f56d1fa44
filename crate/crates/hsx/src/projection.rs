//! The two-cell piecewise-linear projection operator.
//!
//! On every block `[x_{2j}, x_{2j+2}]` the projected wave profile is two
//! line segments whose slopes are `Du ± q` with `q = √(DF_ac − Du²)`; this
//! pins the nodal values of `(u, F_ac)` at even gridpoints, keeps `u`
//! continuous, and reproduces the energy increment of each block exactly,
//! so that `dμ_ac = u_x² dx` survives projection. Singular mass of a block
//! is lumped into one atom at the block's left endpoint, which keeps the
//! cumulative left-continuous. The sign of `q` on the first half-cell is
//! chosen per block to best match `u` at the block midpoint.

use crate::eulerian::{validate, validate_d0, EulerianTriple, ValidationMode, DEFAULT_VALIDATION_TOL};
use crate::pwl::{Atom, MonotoneCdf, PiecewiseLinearFn};
use crate::{Error, Result};

/// Relative slack allowed when clamping the radicand `DF_ac − Du²` to zero.
/// Analytically it is nonnegative (Cauchy–Schwarz); larger deficits mean
/// the input violated the density clause.
const RADICAND_CLAMP_REL: f64 = 1e-12;

/// A uniform grid `x_i = origin + i·dx` together with the range of two-cell
/// blocks `[x_{2j}, x_{2j+2}]`, `j = block_lo ..= block_hi`, used by the
/// projection. The support of the state must lie strictly inside the
/// window spanned by the blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub dx: f64,
    pub origin: f64,
    pub block_lo: i64,
    pub block_hi: i64,
}

impl GridSpec {
    /// Smallest aligned block range whose window strictly contains
    /// `support`, padded by one extra block on each side.
    pub fn covering(dx: f64, origin: f64, support: (f64, f64)) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !origin.is_finite() {
            return Err(Error::Config(format!("invalid grid: dx={dx}, origin={origin}")));
        }
        let (lo, hi) = support;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Config(format!("invalid support window [{lo}, {hi}]")));
        }
        let mut block_lo = ((lo - origin) / (2.0 * dx)).floor() as i64 - 1;
        while origin + 2.0 * block_lo as f64 * dx >= lo {
            block_lo -= 1;
        }
        let mut block_hi = ((hi - origin) / (2.0 * dx)).ceil() as i64 + 1;
        while origin + 2.0 * block_hi as f64 * dx <= hi {
            block_hi += 1;
        }
        Ok(Self { dx, origin, block_lo, block_hi })
    }

    /// Even gridpoint `x_{2j}`.
    pub fn even_point(&self, j: i64) -> f64 {
        self.origin + 2.0 * j as f64 * self.dx
    }

    /// Block midpoint `x_{2j+1}`.
    pub fn mid_point(&self, j: i64) -> f64 {
        self.origin + (2 * j + 1) as f64 * self.dx
    }

    /// The window `[x_{2·block_lo}, x_{2·(block_hi+1)}]`.
    pub fn window(&self) -> (f64, f64) {
        (self.even_point(self.block_lo), self.even_point(self.block_hi + 1))
    }

    pub fn num_blocks(&self) -> usize {
        (self.block_hi - self.block_lo + 1) as usize
    }
}

/// Anything the projection can sample: a piecewise-linear state, or a
/// closed-form reference profile that is not piecewise linear.
pub trait InitialDataSource {
    fn alpha(&self) -> f64;
    fn u(&self, x: f64) -> f64;
    /// Absolutely continuous part of `F` (continuous in `x`).
    fn f_ac(&self, x: f64) -> f64;
    /// Singular part of `F`, left-continuous.
    fn f_sing(&self, x: f64) -> f64;
    fn g_ac(&self, x: f64) -> f64;
    fn g_sing(&self, x: f64) -> f64;
    fn support(&self) -> (f64, f64);
}

impl InitialDataSource for EulerianTriple {
    fn alpha(&self) -> f64 {
        self.alpha
    }
    fn u(&self, x: f64) -> f64 {
        self.u.eval(x)
    }
    fn f_ac(&self, x: f64) -> f64 {
        self.f.continuous_part().eval(x)
    }
    fn f_sing(&self, x: f64) -> f64 {
        self.f.sing_left(x)
    }
    fn g_ac(&self, x: f64) -> f64 {
        self.g.continuous_part().eval(x)
    }
    fn g_sing(&self, x: f64) -> f64 {
        self.g.sing_left(x)
    }
    fn support(&self) -> (f64, f64) {
        self.support
    }
}

/// Per-block fit data.
#[derive(Debug, Clone, Copy)]
pub struct BlockCoefficients {
    /// Centered slope of `u` over the block.
    pub du: f64,
    /// Average ac energy density over the block.
    pub df_ac: f64,
    /// `√(DF_ac − Du²)`, clamped at 0.
    pub q: f64,
    /// Chosen sign index: first half-cell slope is `Du + (−1)^k q`.
    pub k: u8,
}

impl BlockCoefficients {
    pub fn first_slope(&self) -> f64 {
        self.du + if self.k == 0 { self.q } else { -self.q }
    }
    pub fn second_slope(&self) -> f64 {
        self.du - if self.k == 0 { self.q } else { -self.q }
    }
}

/// The argmin sign rule: minimizes the midpoint mismatch
/// `|(D₊u − Du)Δx + (−1)^{m+1} q Δx|`; ties resolve to `m = 0`.
pub fn select_sign(du: f64, q: f64, dplus_u: f64) -> u8 {
    let a = dplus_u - du;
    if (a - q).abs() <= (a + q).abs() {
        0
    } else {
        1
    }
}

/// Computes the fit for one block from sampled nodal data.
pub fn block_coefficients(
    u0: f64,
    u_mid: f64,
    u2: f64,
    f_ac0: f64,
    f_ac2: f64,
    dx: f64,
) -> Result<BlockCoefficients> {
    let du = (u2 - u0) / (2.0 * dx);
    let df_ac = (f_ac2 - f_ac0) / (2.0 * dx);
    let rad = df_ac - du * du;
    // rounding floor: the cumulative F_ac values carry absolute error of a
    // few ulps of their own magnitude, which divided by 2 dx can exceed any
    // tolerance relative to the block increment alone
    let clamp = RADICAND_CLAMP_REL * df_ac.max(1e-300)
        + 64.0 * f64::EPSILON * (f_ac0.abs() + f_ac2.abs()) / (2.0 * dx);
    let q = if rad >= 0.0 {
        rad.sqrt()
    } else if rad >= -clamp {
        0.0
    } else {
        return Err(Error::InvalidInput(format!(
            "block energy {df_ac} below slope square {} (density clause violated)",
            du * du
        )));
    };
    let dplus_u = (u_mid - u0) / dx;
    let k = select_sign(du, q, dplus_u);
    Ok(BlockCoefficients { du, df_ac, q, k })
}

fn project_impl(src: &dyn InitialDataSource, grid: &GridSpec, general: bool) -> Result<EulerianTriple> {
    let (slo, shi) = src.support();
    let (wlo, whi) = grid.window();
    if slo < wlo || shi > whi {
        return Err(Error::Config(format!(
            "support [{slo}, {shi}] exceeds grid window [{wlo}, {whi}]"
        )));
    }
    let dx = grid.dx;
    let nb = grid.num_blocks();

    let mut u_nodes = Vec::with_capacity(2 * nb + 1);
    let mut u_vals = Vec::with_capacity(2 * nb + 1);
    let mut fac_vals = Vec::with_capacity(2 * nb + 1);
    let mut gac_vals = Vec::with_capacity(2 * nb + 1);
    let mut f_atoms = Vec::new();
    let mut g_atoms = Vec::new();

    let x_first = grid.even_point(grid.block_lo);
    u_nodes.push(x_first);
    u_vals.push(src.u(x_first));
    fac_vals.push(src.f_ac(x_first));
    gac_vals.push(src.g_ac(x_first));

    for j in grid.block_lo..=grid.block_hi {
        let x0 = grid.even_point(j);
        let x1 = grid.mid_point(j);
        let x2 = grid.even_point(j + 1);
        let (u0, f0, g0) = (*u_vals.last().unwrap(), *fac_vals.last().unwrap(), *gac_vals.last().unwrap());
        let u2 = src.u(x2);
        let fa2 = src.f_ac(x2);
        let c = block_coefficients(u0, src.u(x1), u2, f0, fa2, dx)?;
        let s1 = c.first_slope();

        u_nodes.push(x1);
        u_vals.push(u0 + s1 * dx);
        fac_vals.push(f0 + s1 * s1 * dx);
        u_nodes.push(x2);
        u_vals.push(u2);
        fac_vals.push(fa2);

        let fs_mass = src.f_sing(x2) - src.f_sing(x0);
        if fs_mass > 0.0 {
            f_atoms.push(Atom { x: x0, mass: fs_mass });
        }

        if general {
            let ga2 = src.g_ac(x2);
            let dg_extra = ((ga2 - g0) - (fa2 - f0)) / (2.0 * dx);
            gac_vals.push(g0 + s1 * s1 * dx + dg_extra * dx);
            gac_vals.push(ga2);
            let gs_mass = src.g_sing(x2) - src.g_sing(x0);
            if gs_mass > 0.0 {
                g_atoms.push(Atom { x: x0, mass: gs_mass });
            }
        } else {
            gac_vals.push(0.0);
            gac_vals.push(0.0);
        }
    }

    let u = PiecewiseLinearFn::new(u_nodes.clone(), u_vals)?;
    let f_ac = PiecewiseLinearFn::new(u_nodes.clone(), fac_vals)?;
    let f = MonotoneCdf::new(f_ac, f_atoms)?;
    let (f, g) = if general {
        let g_ac = PiecewiseLinearFn::new(u_nodes, gac_vals)?;
        (f, MonotoneCdf::new(g_ac, g_atoms)?)
    } else {
        let g = f.clone();
        (f, g)
    };
    let mut out = EulerianTriple::new(u, f, g, src.alpha())?;
    // the projected state owns the whole grid window
    out.support = grid.window();
    Ok(out)
}

/// Projects a state with `μ = ν` onto the grid. The output is again a
/// state with `μ = ν`, with the same total energy.
pub fn project(s: &EulerianTriple, grid: &GridSpec) -> Result<EulerianTriple> {
    let rep = validate_d0(s, DEFAULT_VALIDATION_TOL);
    if !rep.pass() {
        return Err(Error::Validation(format!("projection input not admissible: {}", rep.summary())));
    }
    project_impl(s, grid, false)
}

/// Projects any closed-form initial-data source with `μ = ν` (used for
/// profiles that are not piecewise linear and therefore cannot be
/// represented as a state exactly).
pub fn project_source(src: &dyn InitialDataSource, grid: &GridSpec) -> Result<EulerianTriple> {
    project_impl(src, grid, false)
}

/// The extended projection for states with `μ ≤ ν`: `u` and `F` are
/// projected as in [`project`]; the ac part of `G` additionally carries the
/// block-averaged deviation density, and the singular part of `G` is
/// block-lumped the same way as `F`'s.
pub fn project_general(s: &EulerianTriple, grid: &GridSpec) -> Result<EulerianTriple> {
    let rep = validate(s, DEFAULT_VALIDATION_TOL, ValidationMode::GeneralD);
    if !rep.pass() {
        return Err(Error::Validation(format!("projection input not admissible: {}", rep.summary())));
    }
    project_impl(s, grid, true)
}
