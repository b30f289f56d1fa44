//! The Eulerian state `(u, F, G)`: construction, validation against the
//! admissible-set clauses, total energy, and the stability density `f(Z)`.
//!
//! `F` and `G` are the left-continuous cumulatives of the energy measures
//! `μ ≤ ν`. States with `μ = ν` form the class all initial data lives in;
//! the extended projection may produce `μ ≠ ν`, which the relaxed validator
//! accepts with warnings instead of failures for the density-ratio clause.

use crate::pwl::{merge_nodes, Atom, MonotoneCdf, PiecewiseConstantFn, PiecewiseLinearFn};
use crate::{Error, Result};

/// Default validation tolerance, relative to the total energy. All
/// constructions are closed-form, so only rounding error accumulates.
pub const DEFAULT_VALIDATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct EulerianTriple {
    pub u: PiecewiseLinearFn,
    pub f: MonotoneCdf,
    pub g: MonotoneCdf,
    /// Window outside of which `u_x` vanishes and no atoms live.
    pub support: (f64, f64),
    pub alpha: f64,
}

impl EulerianTriple {
    pub fn new(u: PiecewiseLinearFn, f: MonotoneCdf, g: MonotoneCdf, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidInput(format!("alpha must be in [0,1], got {alpha}")));
        }
        let support = hull(&u, &f, &g);
        Ok(Self { u, f, g, support, alpha })
    }

    /// A state with `μ = ν` (the dummy measure equals the energy measure).
    pub fn d0(u: PiecewiseLinearFn, f: MonotoneCdf, alpha: f64) -> Result<Self> {
        let g = f.clone();
        Self::new(u, f, g, alpha)
    }

    /// Builds the state whose absolutely continuous energy is exactly
    /// `u_x² dx` (cumulated across the cells of `u`) plus the given atoms.
    pub fn from_u_and_atoms(alpha: f64, u: PiecewiseLinearFn, atoms: Vec<Atom>) -> Result<Self> {
        let f_ac = cumulative_slope_squared(&u);
        let f = MonotoneCdf::new(f_ac, atoms)?;
        Self::d0(u, f, alpha)
    }

    /// The zero solution.
    pub fn zero(alpha: f64) -> Self {
        Self {
            u: PiecewiseLinearFn::constant(0.0),
            f: MonotoneCdf::zero(),
            g: MonotoneCdf::zero(),
            support: (0.0, 0.0),
            alpha,
        }
    }
}

fn hull(u: &PiecewiseLinearFn, f: &MonotoneCdf, g: &MonotoneCdf) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in u
        .nodes()
        .iter()
        .chain(f.continuous_part().nodes())
        .chain(g.continuous_part().nodes())
    {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    for a in f.atoms().iter().chain(g.atoms()) {
        lo = lo.min(a.x);
        hi = hi.max(a.x);
    }
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (0.0, 0.0)
    }
}

/// Running integral of `slope(u)²` over the cells of `u` (zero at −∞).
pub fn cumulative_slope_squared(u: &PiecewiseLinearFn) -> PiecewiseLinearFn {
    let nodes = u.nodes().to_vec();
    let mut values = Vec::with_capacity(nodes.len());
    values.push(0.0);
    for i in 0..u.num_cells() {
        let w = nodes[i + 1] - nodes[i];
        let s = u.slope(i);
        values.push(values[i] + s * s * w);
    }
    PiecewiseLinearFn::new(nodes, values).expect("u nodes are already valid")
}

/// Total energy `F_∞`: continuous mass plus atom mass.
pub fn total_energy(s: &EulerianTriple) -> f64 {
    s.f.total_mass()
}

/// Which admissibility clause a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `μ ≤ ν` (both pointwise in the cumulatives and per atom / cell).
    MuLeqNu,
    /// `dμ_ac = u_x² dx`, checked cellwise on slopes.
    AcDensity,
    /// CDF shape: nondecreasing, left-continuous, vanishing at −∞.
    CdfShape,
    /// `u_x ≡ 0` and no atoms outside the declared support.
    Support,
    /// `α = 1` forces `dν_ac = dμ = u_x² dx` (no singular part of μ).
    FullDissipation,
    /// `dμ/dν ∈ {1−α, 1}` with ratio 1 where `u_x < 0`.
    RadonNikodym,
    /// `μ = ν` required of initial-data states.
    D0Equality,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub clause: Clause,
    pub location: f64,
    pub magnitude: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Clause findings that are reported but do not fail the state
    /// (the density-ratio clause on extended-projection outputs).
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| format!("{:?} at x={}: {} ({:.3e})", v.clause, v.location, v.detail, v.magnitude))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// How strictly the density-ratio clause is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Initial-data states: `μ = ν` required, every clause fails the state.
    StrictD0,
    /// States with `μ ≤ ν` (extended-projection outputs): the ratio clause
    /// is reported as a warning only, since block averaging may move the
    /// ratio into the interval `[1−α, 1]`.
    GeneralD
}

/// Validates a state clause by clause, restricted to the piecewise-linear
/// class. `tol` is relative to `max(1, F_∞)`.
pub fn validate(s: &EulerianTriple, tol: f64, mode: ValidationMode) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let f_inf = s.f.total_mass();
    let scale = 1f64.max(f_inf);
    let atol = tol * scale;

    check_cdf_shape(&s.f, atol, "F", &mut rep);
    check_cdf_shape(&s.g, atol, "G", &mut rep);

    // (ii) mu <= nu at every breakpoint, from both sides
    let bps = merge_nodes(&s.f.breakpoints(), &s.g.breakpoints());
    for &x in &bps {
        for (fv, gv, side) in [
            (s.f.eval_left(x), s.g.eval_left(x), "left"),
            (s.f.eval_right(x), s.g.eval_right(x), "right"),
        ] {
            if fv > gv + atol {
                rep.violations.push(Violation {
                    clause: Clause::MuLeqNu,
                    location: x,
                    magnitude: fv - gv,
                    detail: format!("F > G ({side} limit)"),
                });
            }
        }
    }

    // (iii)+(iv) cellwise on the common refinement of u and the ac parts
    let nodes = merge_nodes(
        &merge_nodes(s.u.nodes(), s.f.continuous_part().nodes()),
        s.g.continuous_part().nodes(),
    );
    for w in nodes.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let width = x1 - x0;
        let mid = 0.5 * (x0 + x1);
        let su = (s.u.eval(x1) - s.u.eval(x0)) / width;
        let sf = (s.f.continuous_part().eval(x1) - s.f.continuous_part().eval(x0)) / width;
        let sg = (s.g.continuous_part().eval(x1) - s.g.continuous_part().eval(x0)) / width;
        let rel = 1f64.max(sf.abs()).max(su * su);
        if (sf - su * su).abs() > tol * rel {
            rep.violations.push(Violation {
                clause: Clause::AcDensity,
                location: mid,
                magnitude: (sf - su * su).abs(),
                detail: format!("slope(F_ac)={sf} vs slope(u)^2={}", su * su),
            });
        }
        if sf > sg + tol * 1f64.max(sg.abs()) {
            rep.violations.push(Violation {
                clause: Clause::MuLeqNu,
                location: mid,
                magnitude: sf - sg,
                detail: "ac density of mu exceeds nu".into(),
            });
        }
        // (viii) ac ratio, alpha < 1
        if s.alpha < 1.0 && sg > tol * scale {
            let ratio = sf / sg;
            let ok = (ratio - 1.0).abs() <= tol * 10.0 || (ratio - (1.0 - s.alpha)).abs() <= tol * 10.0;
            let must_be_one = su < 0.0;
            let v = Violation {
                clause: Clause::RadonNikodym,
                location: mid,
                magnitude: ratio,
                detail: if must_be_one && (ratio - 1.0).abs() > tol * 10.0 {
                    "ratio must be 1 where u_x < 0".into()
                } else {
                    format!("ac ratio {ratio} outside {{1-alpha, 1}}")
                },
            };
            if (must_be_one && (ratio - 1.0).abs() > tol * 10.0) || !ok {
                match mode {
                    ValidationMode::StrictD0 => rep.violations.push(v),
                    ValidationMode::GeneralD => rep.warnings.push(v),
                }
            }
        }
    }

    // atom ratios for (viii), and atom equality for D0
    if s.alpha < 1.0 {
        for a in s.f.atoms() {
            let gm = s.g.atom_mass_at(a.x);
            if gm <= 0.0 {
                rep.violations.push(Violation {
                    clause: Clause::MuLeqNu,
                    location: a.x,
                    magnitude: a.mass,
                    detail: "atom of mu without matching atom of nu".into(),
                });
                continue;
            }
            let ratio = a.mass / gm;
            if (ratio - 1.0).abs() > tol * 10.0 && (ratio - (1.0 - s.alpha)).abs() > tol * 10.0 {
                let v = Violation {
                    clause: Clause::RadonNikodym,
                    location: a.x,
                    magnitude: ratio,
                    detail: format!("atom ratio {ratio} outside {{1-alpha, 1}}"),
                };
                match mode {
                    ValidationMode::StrictD0 => rep.violations.push(v),
                    ValidationMode::GeneralD => rep.warnings.push(v),
                }
            }
        }
    }

    // (vii) alpha = 1 structure
    if s.alpha == 1.0 {
        if let Some(a) = s.f.atoms().first() {
            rep.violations.push(Violation {
                clause: Clause::FullDissipation,
                location: a.x,
                magnitude: a.mass,
                detail: "mu must be purely absolutely continuous when alpha = 1".into(),
            });
        }
        for w in nodes.windows(2) {
            let width = w[1] - w[0];
            let su = (s.u.eval(w[1]) - s.u.eval(w[0])) / width;
            let sg = (s.g.continuous_part().eval(w[1]) - s.g.continuous_part().eval(w[0])) / width;
            if (sg - su * su).abs() > tol * 1f64.max(sg.abs()).max(su * su) {
                rep.violations.push(Violation {
                    clause: Clause::FullDissipation,
                    location: 0.5 * (w[0] + w[1]),
                    magnitude: (sg - su * su).abs(),
                    detail: "nu_ac must equal u_x^2 dx when alpha = 1".into(),
                });
            }
        }
    }

    // compact support
    let (lo, hi) = s.support;
    for (i, sl) in s.u.slopes().iter().enumerate() {
        let mid = 0.5 * (s.u.nodes()[i] + s.u.nodes()[i + 1]);
        if (mid < lo || mid > hi) && sl.abs() > tol {
            rep.violations.push(Violation {
                clause: Clause::Support,
                location: mid,
                magnitude: sl.abs(),
                detail: "u_x nonzero outside support".into(),
            });
        }
    }
    for a in s.f.atoms().iter().chain(s.g.atoms()) {
        if a.x < lo - atol || a.x > hi + atol {
            rep.violations.push(Violation {
                clause: Clause::Support,
                location: a.x,
                magnitude: a.mass,
                detail: "atom outside support".into(),
            });
        }
    }

    // D0: F == G
    if mode == ValidationMode::StrictD0 {
        for &x in &bps {
            let d = (s.f.eval_left(x) - s.g.eval_left(x)).abs();
            let dr = (s.f.eval_right(x) - s.g.eval_right(x)).abs();
            if d.max(dr) > atol {
                rep.violations.push(Violation {
                    clause: Clause::D0Equality,
                    location: x,
                    magnitude: d.max(dr),
                    detail: "mu != nu".into(),
                });
            }
        }
    }

    rep
}

fn check_cdf_shape(f: &MonotoneCdf, atol: f64, name: &str, rep: &mut ValidationReport) {
    let c = f.continuous_part();
    if c.left_tail().abs() > atol {
        rep.violations.push(Violation {
            clause: Clause::CdfShape,
            location: c.nodes()[0],
            magnitude: c.left_tail().abs(),
            detail: format!("{name} does not vanish at -inf"),
        });
    }
    for i in 0..c.num_cells() {
        if c.values()[i + 1] < c.values()[i] - atol {
            rep.violations.push(Violation {
                clause: Clause::CdfShape,
                location: c.nodes()[i],
                magnitude: c.values()[i] - c.values()[i + 1],
                detail: format!("{name} decreasing"),
            });
        }
    }
}

/// Validates an initial-data state (`μ = ν` required).
pub fn validate_d0(s: &EulerianTriple, tol: f64) -> ValidationReport {
    validate(s, tol, ValidationMode::StrictD0)
}

/// The stability density in Eulerian variables: `(1−α)·u_x²` where
/// `u_x < 0`, `u_x²` where `u_x ≥ 0`, as a per-cell constant function.
pub fn f_stability(s: &EulerianTriple) -> PiecewiseConstantFn {
    let slopes = s.u.slopes();
    let cells = slopes
        .iter()
        .map(|&sl| if sl < 0.0 { (1.0 - s.alpha) * sl * sl } else { sl * sl })
        .collect();
    PiecewiseConstantFn::new(s.u.nodes().to_vec(), cells, 0.0)
        .expect("u nodes form a valid break set")
}

// ---------------------------------------------------------------------------
// initial-data file format
// ---------------------------------------------------------------------------

#[derive(serde::Deserialize)]
struct CurveSpec {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum ContinuousSpec {
    Named(String),
    Curve(CurveSpec),
}

#[derive(serde::Deserialize)]
struct InitialDataFile {
    alpha: f64,
    u: CurveSpec,
    #[serde(default, rename = "F_atoms")]
    f_atoms: Vec<Atom>,
    #[serde(rename = "F_continuous")]
    f_continuous: ContinuousSpec,
}

/// Parses and validates an initial-data state from its JSON representation.
/// `"F_continuous": "from_u"` means the running integral of `slope(u)²`;
/// an explicit curve must satisfy the density clause. `G` is set equal to
/// `F` (initial data always has `μ = ν`).
pub fn initial_data_from_json(text: &str) -> Result<EulerianTriple> {
    let file: InitialDataFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let u = PiecewiseLinearFn::new(file.u.nodes, file.u.values)?;
    let f_ac = match file.f_continuous {
        ContinuousSpec::Named(tag) if tag == "from_u" => cumulative_slope_squared(&u),
        ContinuousSpec::Named(tag) => {
            return Err(Error::Format(format!(
                "unknown F_continuous tag {tag:?}, expected \"from_u\" or a curve"
            )))
        }
        ContinuousSpec::Curve(c) => PiecewiseLinearFn::new(c.nodes, c.values)?,
    };
    let f = MonotoneCdf::new(f_ac, file.f_atoms)?;
    let s = EulerianTriple::d0(u, f, file.alpha)?;
    let rep = validate_d0(&s, DEFAULT_VALIDATION_TOL);
    if !rep.pass() {
        return Err(Error::Validation(rep.summary()));
    }
    Ok(s)
}

/// Reads initial data from a file path.
pub fn load_initial_data(path: &std::path::Path) -> Result<EulerianTriple> {
    initial_data_from_json(&std::fs::read_to_string(path)?)
}
