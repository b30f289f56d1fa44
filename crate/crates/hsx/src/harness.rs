//! Experiment driver: configure example/α/Δx-list/T, run
//! project → Lagrangian map → exact evolution → inverse map, probe errors
//! against the closed-form references, fit convergence orders, and emit
//! CSV snapshots, the error table and a gnuplot script.

use crate::eulerian::{load_initial_data, EulerianTriple};
use crate::lagrangian::{evolve, to_eulerian, to_lagrangian, LagrangianState};
use crate::projection::{project, project_source, GridSpec};
use crate::reference::{
    exact_error_probe, CosineSolution, CuspSolution, ErrorRecord, ExactSolution,
    MultipeakonSolution, ProbeConfig,
};
use crate::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum ExampleSpec {
    Multipeakon,
    Cusp,
    Cosine,
    Custom(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub example: ExampleSpec,
    pub alpha: f64,
    /// Atom mass of the multipeakon family (ignored elsewhere).
    pub beta: f64,
    pub dx_list: Vec<f64>,
    pub grid_origin: f64,
    /// Optional override of the Eulerian comparison domain.
    pub domain: Option<(f64, f64)>,
    pub t_final: f64,
    pub n_time_samples: usize,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(example: ExampleSpec) -> Self {
        let t_final = match example {
            ExampleSpec::Cusp => 3.0,
            ExampleSpec::Cosine => 1.3,
            _ => 4.0,
        };
        Self {
            example,
            alpha: 0.5,
            beta: 0.5,
            dx_list: default_dx_list(),
            grid_origin: 0.0,
            domain: None,
            t_final,
            n_time_samples: 257,
            snapshot_times: vec![0.0, t_final / 2.0, t_final],
            output_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            threads: 1,
        }
    }
}

/// Geometric Δx sweep from ~2.4e-1 down to ~6e-3.
pub fn default_dx_list() -> Vec<f64> {
    let (hi, lo, n) = (0.24f64, 0.006f64, 6usize);
    (0..n)
        .map(|k| hi * (lo / hi).powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Per-column convergence-order fit outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderFit {
    Fitted(f64),
    /// Some error vanished: the method is exact on this configuration.
    Exact,
    Undefined,
}

impl OrderFit {
    fn cell(&self) -> String {
        match self {
            OrderFit::Fitted(v) => format!("{v}"),
            OrderFit::Exact => "exact".into(),
            OrderFit::Undefined => String::new(),
        }
    }
    pub fn value(&self) -> Option<f64> {
        match self {
            OrderFit::Fitted(v) => Some(*v),
            _ => None,
        }
    }
}

impl std::fmt::Display for OrderFit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.cell())
    }
}

#[derive(Debug, Clone)]
pub struct ErrorTable {
    /// Rows sorted by Δx descending.
    pub rows: Vec<ErrorRecord>,
    pub order_u: OrderFit,
    pub order_f: OrderFit,
    pub order_a: OrderFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitError {
    TooFewRows,
    ZeroError,
}

/// Least-squares slope of `log(error)` against `log(dx)`.
pub fn fit_order(pairs: &[(f64, f64)]) -> std::result::Result<f64, FitError> {
    if pairs.len() < 3 {
        return Err(FitError::TooFewRows);
    }
    if pairs.iter().any(|&(_, e)| e <= 0.0) {
        return Err(FitError::ZeroError);
    }
    let n = pairs.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(dx, e) in pairs {
        let (x, y) = (dx.ln(), e.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

fn fit_column(rows: &[ErrorRecord], col: impl Fn(&ErrorRecord) -> Option<f64>) -> OrderFit {
    let pairs: Vec<(f64, f64)> = rows.iter().filter_map(|r| col(r).map(|e| (r.dx, e))).collect();
    if pairs.is_empty() {
        return OrderFit::Undefined;
    }
    match fit_order(&pairs) {
        Ok(v) => OrderFit::Fitted(v),
        Err(FitError::ZeroError) => OrderFit::Exact,
        Err(FitError::TooFewRows) => OrderFit::Undefined,
    }
}

/// Writes a profile snapshot: one row per breakpoint plus the window ends,
/// with both one-sided values of the cumulatives so atoms are visible as
/// `F_left != F_right`.
pub fn emit_snapshot(state: &EulerianTriple, t: f64, path: &Path) -> Result<()> {
    let (mut lo, mut hi) = state.support;
    if lo >= hi {
        lo -= 1.0;
        hi += 1.0;
    }
    let mut xs = vec![lo];
    // constant functions carry one synthetic node; only genuine
    // breakpoints (cell boundaries and atoms) produce rows
    let u_nodes: &[f64] = if state.u.num_cells() > 0 { state.u.nodes() } else { &[] };
    let cdf_breaks = |c: &crate::pwl::MonotoneCdf| -> Vec<f64> {
        let mut b: Vec<f64> = if c.continuous_part().num_cells() > 0 {
            c.continuous_part().nodes().to_vec()
        } else {
            Vec::new()
        };
        b.extend(c.atoms().iter().map(|a| a.x));
        b.sort_by(|p, q| p.partial_cmp(q).unwrap());
        b
    };
    let inner = crate::pwl::merge_nodes(
        u_nodes,
        &crate::pwl::merge_nodes(&cdf_breaks(&state.f), &cdf_breaks(&state.g)),
    );
    for &x in &inner {
        if x > lo && x < hi {
            xs.push(x);
        }
    }
    xs.push(hi);
    let mut out = String::new();
    out.push_str(&format!("# t = {t}\n"));
    out.push_str("x,u,F_left,F_right,G_left,G_right\n");
    for &x in &xs {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            x,
            state.u.eval(x),
            state.f.eval_left(x),
            state.f.eval_right(x),
            state.g.eval_left(x),
            state.g.eval_right(x)
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parses a snapshot back (used to verify round trips).
pub fn read_snapshot(path: &Path) -> Result<Vec<[f64; 6]>> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for line in text.lines().skip(2) {
        let vals: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|v| v.parse::<f64>()).collect();
        let vals = vals.map_err(|e| Error::Format(format!("bad snapshot row: {e}")))?;
        if vals.len() != 6 {
            return Err(Error::Format(format!("expected 6 columns, got {}", vals.len())));
        }
        rows.push([vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]]);
    }
    Ok(rows)
}

enum SourceKind {
    State(Box<EulerianTriple>),
    Cusp(CuspSolution),
    Cosine(CosineSolution),
}

impl SourceKind {
    fn support(&self) -> (f64, f64) {
        match self {
            SourceKind::State(s) => s.support,
            SourceKind::Cusp(c) => crate::projection::InitialDataSource::support(c),
            SourceKind::Cosine(c) => crate::projection::InitialDataSource::support(c),
        }
    }

    fn project(&self, grid: &GridSpec) -> Result<EulerianTriple> {
        match self {
            SourceKind::State(s) => project(s, grid),
            SourceKind::Cusp(c) => project_source(c, grid),
            SourceKind::Cosine(c) => project_source(c, grid),
        }
    }
}

fn build_source(cfg: &ExperimentConfig) -> Result<(SourceKind, Option<ExactSolution>)> {
    match &cfg.example {
        ExampleSpec::Multipeakon => {
            let m = MultipeakonSolution::new(cfg.alpha, cfg.beta);
            Ok((SourceKind::State(Box::new(m.initial_state())), Some(ExactSolution::Multipeakon(m))))
        }
        ExampleSpec::Cusp => {
            let c = CuspSolution::new(cfg.alpha);
            Ok((SourceKind::Cusp(c), Some(ExactSolution::Cusp(c))))
        }
        ExampleSpec::Cosine => {
            let c = CosineSolution::new(cfg.alpha);
            Ok((SourceKind::Cosine(c), Some(ExactSolution::Cosine(c))))
        }
        ExampleSpec::Custom(path) => Ok((SourceKind::State(Box::new(load_initial_data(path)?)), None)),
    }
}

fn validate_config(cfg: &ExperimentConfig, exact: Option<&ExactSolution>) -> Result<()> {
    if cfg.dx_list.is_empty() || cfg.dx_list.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::Config("dx list must be nonempty and positive".into()));
    }
    if !(cfg.t_final >= 0.0) {
        return Err(Error::Config(format!("T must be nonnegative, got {}", cfg.t_final)));
    }
    if let Some(e) = exact {
        if cfg.t_final > e.time_limit() {
            return Err(Error::Config(format!(
                "T = {} outside the example's valid time window [0, {}]",
                cfg.t_final,
                e.time_limit()
            )));
        }
    }
    if cfg.n_time_samples < 2 {
        return Err(Error::Config("need at least two time samples".into()));
    }
    if cfg.threads == 0 {
        return Err(Error::Config("threads must be >= 1".into()));
    }
    if cfg.snapshot_times.iter().any(|&t| t < 0.0 || t > cfg.t_final) {
        return Err(Error::Config("snapshot times must lie in [0, T]".into()));
    }
    Ok(())
}

/// Uniform sample times on `[0, T]` including both ends, with the exact
/// breaking instants injected (the energy drop is inclusive at `t = τ`).
fn sample_times(cfg: &ExperimentConfig, exact: Option<&ExactSolution>) -> Vec<f64> {
    let n = cfg.n_time_samples;
    let mut ts: Vec<f64> = (0..n)
        .map(|k| cfg.t_final * k as f64 / (n - 1) as f64)
        .collect();
    if let Some(e) = exact {
        for b in e.breaking_instants() {
            if b <= cfg.t_final {
                ts.push(b);
            }
        }
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts.dedup();
    ts
}

/// Fixed uniform comparison mesh: a 16x refinement of the finest Δx over
/// the domain swept by the exact breakpoints (plus margin).
fn comparison_mesh(cfg: &ExperimentConfig, exact: Option<&ExactSolution>, support: (f64, f64)) -> Vec<f64> {
    let (mut lo, mut hi) = cfg.domain.unwrap_or(support);
    if cfg.domain.is_none() {
        if let Some(e) = exact {
            for t in [0.0, 0.5 * cfg.t_final, cfg.t_final] {
                for x in e.eulerian_breakpoints(t) {
                    lo = lo.min(x);
                    hi = hi.max(x);
                }
            }
        }
        lo -= 0.5;
        hi += 0.5;
    }
    let finest = cfg.dx_list.iter().cloned().fold(f64::INFINITY, f64::min);
    let step = finest / 16.0;
    let n = ((hi - lo) / step).ceil() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

struct DxRun {
    record: ErrorRecord,
    x0: LagrangianState,
}

fn run_single_dx(
    cfg: &ExperimentConfig,
    source: &SourceKind,
    exact: Option<&ExactSolution>,
    dx: f64,
    times: &[f64],
    mesh: &[f64],
) -> Result<DxRun> {
    let grid = GridSpec::covering(dx, cfg.grid_origin, source.support())?;
    let projected = source.project(&grid)?;
    let x0 = to_lagrangian(&projected)?;
    let record = match exact {
        Some(e) => {
            let probe = ProbeConfig {
                t_final: cfg.t_final,
                times: times.to_vec(),
                mesh: mesh.to_vec(),
                xi_refine: 3,
            };
            let mut r = exact_error_probe(e, &x0, &probe)?;
            r.dx = dx;
            r
        }
        None => ErrorRecord { dx, err_u_sup: None, err_f_inf: f64::NAN, err_a: None },
    };
    Ok(DxRun { record, x0 })
}

/// Runs the full experiment: per Δx project → map → evolve → map back,
/// probes errors against the exact solution, writes the error table, the
/// snapshots and a plot script, and returns the table. Outputs are
/// byte-reproducible for identical configurations.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ErrorTable> {
    let (source, exact) = build_source(cfg)?;
    validate_config(cfg, exact.as_ref())?;
    let times = sample_times(cfg, exact.as_ref());
    let mesh = if matches!(exact, Some(ExactSolution::Cosine(_)) | None) {
        Vec::new()
    } else {
        comparison_mesh(cfg, exact.as_ref(), source.support())
    };

    let mut dx_sorted = cfg.dx_list.clone();
    dx_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let n = dx_sorted.len();
    let mut runs: Vec<Option<Result<DxRun>>> = (0..n).map(|_| None).collect();
    if cfg.threads <= 1 || n <= 1 {
        for (i, &dx) in dx_sorted.iter().enumerate() {
            runs[i] = Some(run_single_dx(cfg, &source, exact.as_ref(), dx, &times, &mesh));
        }
    } else {
        let idx = std::sync::atomic::AtomicUsize::new(0);
        let slots = std::sync::Mutex::new(&mut runs);
        std::thread::scope(|scope| {
            for _ in 0..cfg.threads.min(n) {
                scope.spawn(|| loop {
                    let i = idx.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                    if i >= n {
                        break;
                    }
                    let out = run_single_dx(cfg, &source, exact.as_ref(), dx_sorted[i], &times, &mesh);
                    slots.lock().unwrap()[i] = Some(out);
                });
            }
        });
    }

    let mut rows = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for r in runs.into_iter() {
        let run = r.expect("every slot filled")?;
        rows.push(run.record);
        states.push(run.x0);
    }

    std::fs::create_dir_all(&cfg.output_dir)?;
    for (di, x0) in states.iter().enumerate() {
        for (si, &t) in cfg.snapshot_times.iter().enumerate() {
            let st = to_eulerian(&evolve(x0, t)?)?;
            let path = cfg.output_dir.join(format!("snapshot_d{di:02}_s{si:02}.csv"));
            emit_snapshot(&st, t, &path)?;
        }
    }

    let table = ErrorTable {
        order_u: fit_column(&rows, |r| r.err_u_sup),
        order_f: fit_column(&rows, |r| if r.err_f_inf.is_nan() { None } else { Some(r.err_f_inf) }),
        order_a: fit_column(&rows, |r| r.err_a),
        rows,
    };
    write_error_table_csv(&table, &cfg.output_dir.join("error_table.csv"))?;
    if cfg.format == OutputFormat::Json {
        write_error_table_json(&table, &cfg.output_dir.join("error_table.json"))?;
    }
    write_plot_script(cfg, &table, &cfg.output_dir.join("plots.gp"))?;
    Ok(table)
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn write_error_table_csv(table: &ErrorTable, path: &Path) -> Result<()> {
    let mut out = String::from("dx,err_u_sup,err_Finf,err_A,order_u,order_Finf,order_A\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.dx,
            opt_cell(r.err_u_sup),
            if r.err_f_inf.is_nan() { String::new() } else { format!("{}", r.err_f_inf) },
            opt_cell(r.err_a),
            table.order_u.cell(),
            table.order_f.cell(),
            table.order_a.cell(),
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_error_table_json(table: &ErrorTable, path: &Path) -> Result<()> {
    #[derive(serde::Serialize)]
    struct Row {
        dx: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        err_u_sup: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        err_f_inf: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        err_a: Option<f64>,
    }
    #[derive(serde::Serialize)]
    struct Out {
        rows: Vec<Row>,
        order_u: Option<f64>,
        order_f_inf: Option<f64>,
        order_a: Option<f64>,
    }
    let out = Out {
        rows: table
            .rows
            .iter()
            .map(|r| Row {
                dx: r.dx,
                err_u_sup: r.err_u_sup,
                err_f_inf: if r.err_f_inf.is_nan() { None } else { Some(r.err_f_inf) },
                err_a: r.err_a,
            })
            .collect(),
        order_u: table.order_u.value(),
        order_f_inf: table.order_f.value(),
        order_a: table.order_a.value(),
    };
    let mut f = std::fs::File::create(path)?;
    f.write_all(serde_json::to_string_pretty(&out).map_err(|e| Error::Format(e.to_string()))?.as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

fn write_plot_script(cfg: &ExperimentConfig, table: &ErrorTable, path: &Path) -> Result<()> {
    let mut s = String::new();
    s.push_str("# gnuplot script; run from this directory\n");
    s.push_str("set datafile separator ','\n\n");
    s.push_str("set terminal pngcairo size 900,600\nset output 'errors.png'\n");
    s.push_str("set logscale xy\nset xlabel 'dx'\nset ylabel 'error'\nset key left top\n");
    let mut plots = Vec::new();
    if table.rows.iter().any(|r| r.err_u_sup.is_some()) {
        plots.push("'error_table.csv' using 1:2 skip 1 with linespoints title 'sup_t |u-u_dx|'".to_string());
    }
    if table.rows.iter().any(|r| !r.err_f_inf.is_nan()) {
        plots.push("'error_table.csv' using 1:3 skip 1 with linespoints title '|F_inf - F_dx_inf|(T)'".to_string());
    }
    if table.rows.iter().any(|r| r.err_a.is_some()) {
        plots.push("'error_table.csv' using 1:4 skip 1 with linespoints title 'A_dx(T)'".to_string());
    }
    if !plots.is_empty() {
        s.push_str(&format!("plot {}\n\n", plots.join(", \\\n     ")));
    }
    for (si, &t) in cfg.snapshot_times.iter().enumerate() {
        s.push_str(&format!(
            "set terminal pngcairo size 900,600\nset output 'snapshot_s{si:02}.png'\n"
        ));
        s.push_str(&format!("unset logscale\nset xlabel 'x'\nset title 't = {t}'\n"));
        let series: Vec<String> = (0..cfg.dx_list.len())
            .map(|di| {
                format!(
                    "'snapshot_d{di:02}_s{si:02}.csv' using 1:2 skip 2 with lines title 'u, dx index {di}'"
                )
            })
            .collect();
        s.push_str(&format!("plot {}\n\n", series.join(", \\\n     ")));
    }
    std::fs::write(path, s)?;
    Ok(())
}
