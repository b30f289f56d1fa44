//! Continuous piecewise-linear functions, monotone CDFs with atoms, and
//! exact Lᵖ norms of their differences.
//!
//! These are the value types underlying both the Eulerian state (`u`, `F`,
//! `G`) and the Lagrangian one (`y − id`, `U`, `V`, `H` as functions of the
//! characteristic label). All norm computations are closed-form on the
//! merged node set; nothing here samples.

use crate::{Error, Result};

/// Relative gap below which two nodes are considered the same point.
///
/// The Lagrangian grid legitimately contains *intended* zero-width
/// intervals; those are represented in `LagrangianState`, never here.
const NODE_MERGE_REL: f64 = 1e-14;

/// Relative atom mass below which an atom is dropped at construction.
const ATOM_DROP_REL: f64 = 1e-14;

fn merge_scale(a: f64, b: f64) -> f64 {
    1f64.max(a.abs()).max(b.abs())
}

/// A continuous piecewise-linear function with finitely many nodes and
/// constant tails. The tails equal the first and last nodal values.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearFn {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinearFn {
    /// Builds the function from nodal data. Nodes must be sorted; nodes
    /// closer than `1e-14·scale` are merged (first value wins).
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "node/value length mismatch: {} vs {}",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.is_empty() {
            return Ok(Self::constant(0.0));
        }
        if nodes.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite node or value".into()));
        }
        let mut mn = Vec::with_capacity(nodes.len());
        let mut mv = Vec::with_capacity(values.len());
        mn.push(nodes[0]);
        mv.push(values[0]);
        for i in 1..nodes.len() {
            let prev = *mn.last().unwrap();
            let gap = nodes[i] - prev;
            if gap < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "nodes not increasing at index {i}: {} after {}",
                    nodes[i], prev
                )));
            }
            if gap <= NODE_MERGE_REL * merge_scale(prev, nodes[i]) {
                continue;
            }
            mn.push(nodes[i]);
            mv.push(values[i]);
        }
        Ok(Self { nodes: mn, values: mv })
    }

    /// The constant function `x ↦ v`, represented with a single node at 0.
    pub fn constant(v: f64) -> Self {
        Self { nodes: vec![0.0], values: vec![v] }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_tail(&self) -> f64 {
        self.values[0]
    }

    pub fn right_tail(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Number of cells (one less than the number of nodes).
    pub fn num_cells(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Slope on cell `i`, i.e. on `[nodes[i], nodes[i+1]]`.
    pub fn slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / (self.nodes[i + 1] - self.nodes[i])
    }

    pub fn slopes(&self) -> Vec<f64> {
        (0..self.num_cells()).map(|i| self.slope(i)).collect()
    }

    /// Linear interpolation on the containing cell; tail value outside.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return self.values[0];
        }
        if x >= self.nodes[n - 1] {
            return self.values[n - 1];
        }
        // partition_point: first index with nodes[i] > x, so the cell is i-1.
        let i = self.nodes.partition_point(|&nd| nd <= x);
        let (x0, x1) = (self.nodes[i - 1], self.nodes[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * ((x - x0) / (x1 - x0))
    }

    /// True when every cell slope is ≥ `-eps`.
    pub fn is_nondecreasing(&self, eps: f64) -> bool {
        (0..self.num_cells()).all(|i| self.values[i + 1] - self.values[i] >= -eps)
    }

    /// The derivative as a piecewise-constant function (zero outside).
    pub fn derivative(&self) -> PiecewiseConstantFn {
        if self.num_cells() == 0 {
            return PiecewiseConstantFn {
                breaks: vec![self.nodes[0], self.nodes[0] + 1.0],
                cells: vec![0.0],
                outside: 0.0,
            };
        }
        PiecewiseConstantFn {
            breaks: self.nodes.clone(),
            cells: self.slopes(),
            outside: 0.0,
        }
    }
}

/// A point mass of a measure.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// A bounded, nondecreasing, left-continuous function: a continuous
/// piecewise-linear part plus finitely many atoms. Evaluation at an atom
/// location excludes that atom's mass; the limit at −∞ is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCdf {
    continuous: PiecewiseLinearFn,
    atoms: Vec<Atom>,
}

impl MonotoneCdf {
    pub fn new(continuous: PiecewiseLinearFn, mut atoms: Vec<Atom>) -> Result<Self> {
        if continuous.left_tail().abs() > 0.0 {
            return Err(Error::InvalidInput(format!(
                "CDF continuous part must vanish at -inf, got {}",
                continuous.left_tail()
            )));
        }
        if !continuous.is_nondecreasing(0.0) {
            return Err(Error::InvalidInput("CDF continuous part is decreasing".into()));
        }
        if atoms.iter().any(|a| !a.x.is_finite() || !a.mass.is_finite() || a.mass < 0.0) {
            return Err(Error::InvalidInput("atom with non-finite or negative mass".into()));
        }
        atoms.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
        // merge coincident atoms, then drop negligible ones
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if a.x - last.x <= NODE_MERGE_REL * merge_scale(last.x, a.x) => {
                    last.mass += a.mass;
                }
                _ => merged.push(a),
            }
        }
        let total = continuous.right_tail() + merged.iter().map(|a| a.mass).sum::<f64>();
        merged.retain(|a| a.mass > ATOM_DROP_REL * total.max(1e-300));
        Ok(Self { continuous, atoms: merged })
    }

    /// The zero measure.
    pub fn zero() -> Self {
        Self { continuous: PiecewiseLinearFn::constant(0.0), atoms: Vec::new() }
    }

    pub fn continuous_part(&self) -> &PiecewiseLinearFn {
        &self.continuous
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Left-continuous value: atoms strictly below `x` contribute.
    pub fn eval_left(&self, x: f64) -> f64 {
        let sing: f64 = self.atoms.iter().take_while(|a| a.x < x).map(|a| a.mass).sum();
        self.continuous.eval(x) + sing
    }

    /// Right limit: atoms at `x` contribute as well.
    pub fn eval_right(&self, x: f64) -> f64 {
        let sing: f64 = self.atoms.iter().take_while(|a| a.x <= x).map(|a| a.mass).sum();
        self.continuous.eval(x) + sing
    }

    /// Mass of the atom located at `x` (0 if none).
    pub fn atom_mass_at(&self, x: f64) -> f64 {
        self.atoms.iter().find(|a| a.x == x).map_or(0.0, |a| a.mass)
    }

    /// Total mass: continuous mass plus all atoms.
    pub fn total_mass(&self) -> f64 {
        self.continuous.right_tail() + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// Singular part evaluated left-continuously.
    pub fn sing_left(&self, x: f64) -> f64 {
        self.atoms.iter().take_while(|a| a.x < x).map(|a| a.mass).sum()
    }

    /// All x at which the CDF is non-smooth: continuous nodes and atoms.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.continuous.nodes().to_vec();
        b.extend(self.atoms.iter().map(|a| a.x));
        b.sort_by(|p, q| p.partial_cmp(q).unwrap());
        b.dedup();
        b
    }
}

/// The Lᵖ norms supported by the exact difference routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpNorm {
    L1,
    L2,
    LInf,
}

/// Sorted union of two node sets (each node of both inputs exactly once).
pub fn merge_nodes(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => {
                if x <= y {
                    i += 1;
                    if x == y {
                        j += 1;
                    }
                    x
                } else {
                    j += 1;
                    y
                }
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if out.last() != Some(&next) {
            out.push(next);
        }
    }
    out
}

/// ∫ over one cell of |d0 + s·(d1−d0)/w|, in closed form (splits at the root
/// when the difference changes sign inside the cell).
fn cell_l1(w: f64, d0: f64, d1: f64) -> f64 {
    if d0 * d1 >= 0.0 {
        return 0.5 * (d0.abs() + d1.abs()) * w;
    }
    let denom = d0.abs() + d1.abs();
    let w0 = w * d0.abs() / denom;
    let w1 = w - w0;
    0.5 * (d0.abs() * w0 + d1.abs() * w1)
}

/// ∫ over one cell of the squared linear difference: w·(d0² + d0·d1 + d1²)/3.
fn cell_l2sq(w: f64, d0: f64, d1: f64) -> f64 {
    w * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0
}

/// Exact Lᵖ norm of `f − g` over the finite window `[a, b]`.
///
/// For p = ∞ the maximum of a piecewise-linear difference is attained at a
/// merged node or a window end; for p = 1, 2 each cell is integrated in
/// closed form.
pub fn norm_diff(
    f: &PiecewiseLinearFn,
    g: &PiecewiseLinearFn,
    p: LpNorm,
    window: (f64, f64),
) -> Result<f64> {
    let (a, b) = window;
    if !(a < b) {
        return Err(Error::InvalidInput(format!("empty window [{a}, {b}]")));
    }
    let mut xs = vec![a];
    for &x in merge_nodes(f.nodes(), g.nodes()).iter() {
        if x > a && x < b {
            xs.push(x);
        }
    }
    xs.push(b);
    let d: Vec<f64> = xs.iter().map(|&x| f.eval(x) - g.eval(x)).collect();
    Ok(match p {
        LpNorm::LInf => d.iter().fold(0.0, |m, v| m.max(v.abs())),
        LpNorm::L1 => (0..xs.len() - 1)
            .map(|i| cell_l1(xs[i + 1] - xs[i], d[i], d[i + 1]))
            .sum(),
        LpNorm::L2 => (0..xs.len() - 1)
            .map(|i| cell_l2sq(xs[i + 1] - xs[i], d[i], d[i + 1]))
            .sum::<f64>()
            .sqrt(),
    })
}

/// Exact Lᵖ norm of the difference of two monotone CDFs over `[a, b]`,
/// accounting for jumps: on each open cell between merged breakpoints the
/// difference is linear; for p = ∞ both one-sided limits at every
/// breakpoint are inspected.
pub fn cdf_norm_diff(f: &MonotoneCdf, g: &MonotoneCdf, p: LpNorm, window: (f64, f64)) -> Result<f64> {
    let (a, b) = window;
    if !(a < b) {
        return Err(Error::InvalidInput(format!("empty window [{a}, {b}]")));
    }
    let mut xs = vec![a];
    for &x in merge_nodes(&f.breakpoints(), &g.breakpoints()).iter() {
        if x > a && x < b {
            xs.push(x);
        }
    }
    xs.push(b);
    if p == LpNorm::LInf {
        let mut m: f64 = 0.0;
        for &x in &xs {
            m = m.max((f.eval_left(x) - g.eval_left(x)).abs());
            m = m.max((f.eval_right(x) - g.eval_right(x)).abs());
        }
        return Ok(m);
    }
    let mut acc = 0.0;
    for i in 0..xs.len() - 1 {
        let w = xs[i + 1] - xs[i];
        let d0 = f.eval_right(xs[i]) - g.eval_right(xs[i]);
        let d1 = f.eval_left(xs[i + 1]) - g.eval_left(xs[i + 1]);
        acc += match p {
            LpNorm::L1 => cell_l1(w, d0, d1),
            LpNorm::L2 => cell_l2sq(w, d0, d1),
            LpNorm::LInf => unreachable!(),
        };
    }
    Ok(if p == LpNorm::L2 { acc.sqrt() } else { acc })
}

/// A piecewise-constant function: `cells[i]` on `[breaks[i], breaks[i+1])`
/// and `outside` beyond the break range. Houses derivatives of
/// piecewise-linear functions and per-cell Lagrangian data.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstantFn {
    pub breaks: Vec<f64>,
    pub cells: Vec<f64>,
    pub outside: f64,
}

impl PiecewiseConstantFn {
    pub fn new(breaks: Vec<f64>, cells: Vec<f64>, outside: f64) -> Result<Self> {
        if breaks.len() != cells.len() + 1 {
            return Err(Error::InvalidInput("piecewise-constant: breaks must be cells+1".into()));
        }
        if breaks.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("piecewise-constant: breaks not sorted".into()));
        }
        Ok(Self { breaks, cells, outside })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.breaks.len();
        if x < self.breaks[0] || x >= self.breaks[n - 1] {
            return self.outside;
        }
        let i = self.breaks.partition_point(|&b| b <= x);
        self.cells[i - 1]
    }

    /// ∫ |f| over the break range plus nothing outside (callers compare
    /// functions with equal `outside`, where the difference vanishes there).
    pub fn abs_integral(&self) -> f64 {
        (0..self.cells.len())
            .map(|i| self.cells[i].abs() * (self.breaks[i + 1] - self.breaks[i]))
            .sum()
    }
}

/// Exact Lᵖ (p ∈ {1, 2}) norm of the difference of two piecewise-constant
/// functions over the merged cell decomposition. Returns +∞ when the
/// `outside` values differ (the difference is then not integrable).
pub fn piecewise_constant_norm_diff(
    f: &PiecewiseConstantFn,
    g: &PiecewiseConstantFn,
    p: LpNorm,
) -> f64 {
    if f.outside != g.outside {
        return f64::INFINITY;
    }
    let xs = merge_nodes(&f.breaks, &g.breaks);
    let mut acc = 0.0;
    let mut sup: f64 = (f.outside - g.outside).abs();
    for i in 0..xs.len() - 1 {
        let w = xs[i + 1] - xs[i];
        if w <= 0.0 {
            continue;
        }
        let mid = 0.5 * (xs[i] + xs[i + 1]);
        let d = f.eval(mid) - g.eval(mid);
        match p {
            LpNorm::L1 => acc += d.abs() * w,
            LpNorm::L2 => acc += d * d * w,
            LpNorm::LInf => sup = sup.max(d.abs()),
        }
    }
    match p {
        LpNorm::L1 => acc,
        LpNorm::L2 => acc.sqrt(),
        LpNorm::LInf => sup,
    }
}
