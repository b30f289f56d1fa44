//! Python bindings: the Eulerian/Lagrangian state types, the projection,
//! the exact evolution, the closed-form reference solutions and the
//! experiment driver.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hsx::eulerian;
use hsx::harness;
use hsx::lagrangian;
use hsx::projection::{self, GridSpec, InitialDataSource};
use hsx::reference::{CosineSolution, CuspSolution, MultipeakonSolution};

fn err(e: hsx::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[derive(Clone, Copy)]
enum Example {
    Multipeakon,
    Cusp,
    Cosine,
}

fn parse_example(name: &str) -> PyResult<Example> {
    match name {
        "multipeakon" => Ok(Example::Multipeakon),
        "cusp" => Ok(Example::Cusp),
        "cosine" => Ok(Example::Cosine),
        other => Err(PyValueError::new_err(format!(
            "unknown example {other:?}; expected multipeakon, cusp or cosine"
        ))),
    }
}

/// An Eulerian state (wave profile plus the cumulative energies).
#[pyclass(name = "EulerianState", skip_from_py_object)]
#[derive(Clone)]
struct PyEulerianState {
    inner: eulerian::EulerianTriple,
}

#[pymethods]
impl PyEulerianState {
    /// Parses the initial-data JSON format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: eulerian::initial_data_from_json(text).map_err(err)? })
    }

    /// The hat-profile family with an energy atom of mass `beta` at 0.
    #[staticmethod]
    fn multipeakon(alpha: f64, beta: f64) -> Self {
        Self { inner: MultipeakonSolution::new(alpha, beta).initial_state() }
    }

    fn u(&self, x: f64) -> f64 {
        self.inner.u.eval(x)
    }

    fn f_left(&self, x: f64) -> f64 {
        self.inner.f.eval_left(x)
    }

    fn f_right(&self, x: f64) -> f64 {
        self.inner.f.eval_right(x)
    }

    fn g_left(&self, x: f64) -> f64 {
        self.inner.g.eval_left(x)
    }

    fn g_right(&self, x: f64) -> f64 {
        self.inner.g.eval_right(x)
    }

    fn total_energy(&self) -> f64 {
        eulerian::total_energy(&self.inner)
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    #[getter]
    fn support(&self) -> (f64, f64) {
        self.inner.support
    }

    /// Descriptions of every violated admissibility clause (empty = valid).
    fn validate(&self) -> Vec<String> {
        let rep = eulerian::validate_d0(&self.inner, eulerian::DEFAULT_VALIDATION_TOL);
        rep.violations
            .iter()
            .map(|v| format!("{:?} at x={}: {}", v.clause, v.location, v.detail))
            .collect()
    }

    /// Projects onto the two-cell grid `x_i = origin + i*dx`.
    fn project(&self, dx: f64, origin: f64) -> PyResult<Self> {
        let grid = GridSpec::covering(dx, origin, self.inner.support).map_err(err)?;
        Ok(Self { inner: projection::project(&self.inner, &grid).map_err(err)? })
    }

    /// Maps to Lagrangian coordinates (requires mu = nu).
    fn to_lagrangian(&self) -> PyResult<PyLagrangianState> {
        Ok(PyLagrangianState { inner: lagrangian::to_lagrangian(&self.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!(
            "EulerianState(alpha={}, support=({}, {}), energy={})",
            self.inner.alpha,
            self.inner.support.0,
            self.inner.support.1,
            eulerian::total_energy(&self.inner)
        )
    }
}

/// A Lagrangian state: characteristics, velocity, and the two cumulative
/// energies as functions of the label.
#[pyclass(name = "LagrangianState", skip_from_py_object)]
#[derive(Clone)]
struct PyLagrangianState {
    inner: lagrangian::LagrangianState,
}

#[pymethods]
impl PyLagrangianState {
    /// Exact solution at time `t` (must be called on the time-zero state).
    fn evolve(&self, t: f64) -> PyResult<Self> {
        Ok(Self { inner: lagrangian::evolve(&self.inner, t).map_err(err)? })
    }

    fn to_eulerian(&self) -> PyResult<PyEulerianState> {
        Ok(PyEulerianState { inner: lagrangian::to_eulerian(&self.inner).map_err(err)? })
    }

    #[getter]
    fn time(&self) -> f64 {
        self.inner.time
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    /// Total current energy.
    fn v_inf(&self) -> f64 {
        self.inner.v_inf
    }

    fn num_cells(&self) -> usize {
        self.inner.num_cells()
    }

    fn y(&self, xi: f64) -> f64 {
        self.inner.eval_y(xi)
    }

    fn u(&self, xi: f64) -> f64 {
        self.inner.eval_u(xi)
    }

    /// Per-cell wave-breaking times (inf = never).
    fn breaking_times(&self) -> Vec<f64> {
        self.inner.tau.clone()
    }

    /// The seven-term Lagrangian distance to another state.
    fn metric(&self, other: &PyLagrangianState) -> PyResult<f64> {
        lagrangian::metric_d(&self.inner, &other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "LagrangianState(t={}, alpha={}, cells={}, energy={})",
            self.inner.time,
            self.inner.alpha,
            self.inner.num_cells(),
            self.inner.v_inf
        )
    }
}

/// Projects one of the stock examples' initial data onto a grid (the cusp
/// and cosine profiles are sampled from their closed forms).
#[pyfunction]
#[pyo3(signature = (example, alpha, dx, origin=0.0, beta=0.5))]
fn project_example(example: &str, alpha: f64, dx: f64, origin: f64, beta: f64) -> PyResult<PyEulerianState> {
    let inner = match parse_example(example)? {
        Example::Multipeakon => {
            let s = MultipeakonSolution::new(alpha, beta).initial_state();
            let grid = GridSpec::covering(dx, origin, s.support).map_err(err)?;
            projection::project(&s, &grid).map_err(err)?
        }
        Example::Cusp => {
            let c = CuspSolution::new(alpha);
            let grid = GridSpec::covering(dx, origin, InitialDataSource::support(&c)).map_err(err)?;
            projection::project_source(&c, &grid).map_err(err)?
        }
        Example::Cosine => {
            let c = CosineSolution::new(alpha);
            let grid = GridSpec::covering(dx, origin, InitialDataSource::support(&c)).map_err(err)?;
            projection::project_source(&c, &grid).map_err(err)?
        }
    };
    Ok(PyEulerianState { inner })
}

/// Exact `(u, F)` of a family with a closed Eulerian form.
#[pyfunction]
#[pyo3(signature = (example, alpha, t, x, beta=0.5))]
fn exact_eulerian(example: &str, alpha: f64, t: f64, x: f64, beta: f64) -> PyResult<(f64, f64)> {
    match parse_example(example)? {
        Example::Multipeakon => Ok(MultipeakonSolution::new(alpha, beta).eulerian(t, x)),
        Example::Cusp => Ok(CuspSolution::new(alpha).eulerian(t, x)),
        Example::Cosine => Err(PyValueError::new_err(
            "the cosine family has no closed Eulerian form; use exact_lagrangian",
        )),
    }
}

/// Exact `(y, U, V, H)` along the characteristic labeled `xi`.
#[pyfunction]
#[pyo3(signature = (example, alpha, t, xi, beta=0.5))]
fn exact_lagrangian(example: &str, alpha: f64, t: f64, xi: f64, beta: f64) -> PyResult<(f64, f64, f64, f64)> {
    match parse_example(example)? {
        Example::Multipeakon => Ok(MultipeakonSolution::new(alpha, beta).lagrangian(t, xi)),
        Example::Cusp => {
            let c = CuspSolution::new(alpha);
            let (y, u, v) = c.lagrangian(t, xi).map_err(err)?;
            Ok((y, u, v, c.lagrangian(0.0, xi).map_err(err)?.2))
        }
        Example::Cosine => CosineSolution::new(alpha).lagrangian(t, xi).map_err(err),
    }
}

/// Exact total energy `F_inf(t)`.
#[pyfunction]
#[pyo3(signature = (example, alpha, t, beta=0.5))]
fn exact_total_energy(example: &str, alpha: f64, t: f64, beta: f64) -> PyResult<f64> {
    Ok(match parse_example(example)? {
        Example::Multipeakon => MultipeakonSolution::new(alpha, beta).total_energy(t),
        Example::Cusp => CuspSolution::new(alpha).total_energy(t),
        Example::Cosine => CosineSolution::new(alpha).total_energy(t),
    })
}

/// Runs a grid-refinement study; returns the error table as a dict and
/// writes the CSV artifacts into `out_dir`.
#[pyfunction]
#[pyo3(signature = (example, out_dir, alpha=0.5, beta=0.5, dx_list=None, grid_origin=0.0,
                    t_final=None, nt=257, snapshots=None, threads=1))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    py: Python<'_>,
    example: &str,
    out_dir: &str,
    alpha: f64,
    beta: f64,
    dx_list: Option<Vec<f64>>,
    grid_origin: f64,
    t_final: Option<f64>,
    nt: usize,
    snapshots: Option<Vec<f64>>,
    threads: usize,
) -> PyResult<Py<PyDict>> {
    let spec = match parse_example(example)? {
        Example::Multipeakon => harness::ExampleSpec::Multipeakon,
        Example::Cusp => harness::ExampleSpec::Cusp,
        Example::Cosine => harness::ExampleSpec::Cosine,
    };
    let mut cfg = harness::ExperimentConfig::new(spec);
    cfg.alpha = alpha;
    cfg.beta = beta;
    if let Some(dx) = dx_list {
        cfg.dx_list = dx;
    }
    cfg.grid_origin = grid_origin;
    if let Some(t) = t_final {
        cfg.t_final = t;
        cfg.snapshot_times = vec![0.0, t / 2.0, t];
    }
    cfg.n_time_samples = nt;
    if let Some(s) = snapshots {
        cfg.snapshot_times = s;
    }
    cfg.output_dir = out_dir.into();
    cfg.threads = threads;
    let table = harness::run_experiment(&cfg).map_err(err)?;

    let out = PyDict::new(py);
    let rows: Vec<Py<PyDict>> = table
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("dx", r.dx)?;
            d.set_item("err_u_sup", r.err_u_sup)?;
            d.set_item("err_f_inf", if r.err_f_inf.is_nan() { None } else { Some(r.err_f_inf) })?;
            d.set_item("err_a", r.err_a)?;
            Ok(d.unbind())
        })
        .collect::<PyResult<_>>()?;
    out.set_item("rows", rows)?;
    out.set_item("order_u", table.order_u.value())?;
    out.set_item("order_f_inf", table.order_f.value())?;
    out.set_item("order_a", table.order_a.value())?;
    Ok(out.unbind())
}

#[pymodule]
fn hsx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEulerianState>()?;
    m.add_class::<PyLagrangianState>()?;
    m.add_function(wrap_pyfunction!(project_example, m)?)?;
    m.add_function(wrap_pyfunction!(exact_eulerian, m)?)?;
    m.add_function(wrap_pyfunction!(exact_lagrangian, m)?)?;
    m.add_function(wrap_pyfunction!(exact_total_energy, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
