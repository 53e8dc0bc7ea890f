//! Python bindings: state construction, evolution, entanglement measures,
//! sweeps, boundary search and the closed-form audit.

use noninertial::analytic;
use noninertial::entanglement;
use noninertial::model::{self, AccelParams, ChannelKind, Partition};
use noninertial::qmat::{self, CMatrix, Complex, QubitLabel};
use noninertial::sweep::{
    find_boundary, run_sweep, write_csv_file, Axis, BoundaryKind, BoundaryQuery, Grid, SweepConfig,
};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: noninertial::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = noninertial::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &value)
}

fn rows_of(m: &CMatrix) -> Vec<Vec<Complex>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn matrix_from_rows(rows: Vec<Vec<Complex>>) -> PyResult<CMatrix> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    CMatrix::new(n, cols, rows.into_iter().flatten().collect()).map_err(err)
}

fn labels_of(names: &[String]) -> PyResult<Vec<QubitLabel>> {
    names.iter().map(|s| parse::<QubitLabel>(s)).collect()
}

/// Correlation coefficients (c1, c2, c3) of an X state.
#[pyclass(name = "XParams", module = "noninertial_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyXParams {
    inner: model::XParams,
}

#[pymethods]
impl PyXParams {
    #[new]
    fn new(c1: f64, c2: f64, c3: f64) -> PyResult<Self> {
        Ok(Self {
            inner: model::XParams::new(c1, c2, c3).map_err(err)?,
        })
    }

    #[staticmethod]
    fn bell() -> Self {
        Self {
            inner: model::XParams::bell(),
        }
    }

    #[staticmethod]
    fn werner(c: f64) -> PyResult<Self> {
        Ok(Self {
            inner: model::XParams::werner(c).map_err(err)?,
        })
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: model::XParams::preset(name).map_err(err)?,
        })
    }

    #[getter]
    fn c1(&self) -> f64 {
        self.inner.c1
    }

    #[getter]
    fn c2(&self) -> f64 {
        self.inner.c2
    }

    #[getter]
    fn c3(&self) -> f64 {
        self.inner.c3
    }

    fn min_eigenvalue(&self) -> f64 {
        self.inner.min_eigenvalue()
    }

    fn best_sign_min_eigenvalue(&self) -> f64 {
        self.inner.best_sign_min_eigenvalue()
    }

    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    fn __repr__(&self) -> String {
        format!("XParams({}, {}, {})", self.inner.c1, self.inner.c2, self.inner.c3)
    }
}

/// Damping channel with per-side decay probabilities.
#[pyclass(name = "ChannelSpec", module = "noninertial_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyChannelSpec {
    inner: model::ChannelSpec,
}

#[pymethods]
impl PyChannelSpec {
    #[new]
    fn new(kind: &str, p_a: f64, p_r: f64) -> PyResult<Self> {
        Ok(Self {
            inner: model::ChannelSpec::new(parse(kind)?, p_a, p_r).map_err(err)?,
        })
    }

    #[staticmethod]
    fn equal(kind: &str, p: f64) -> PyResult<Self> {
        Ok(Self {
            inner: model::ChannelSpec::equal(parse(kind)?, p).map_err(err)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn p_a(&self) -> f64 {
        self.inner.p_a
    }

    #[getter]
    fn p_r(&self) -> f64 {
        self.inner.p_r
    }

    /// Kraus operators of one side ("A" or "R") as nested lists.
    fn kraus(&self, side: &str) -> PyResult<Vec<Vec<Vec<Complex>>>> {
        let side = match side {
            "A" | "a" => model::Side::A,
            "R" | "r" => model::Side::R,
            _ => return Err(PyValueError::new_err(format!("unknown side '{side}'"))),
        };
        Ok(self.inner.kraus(side).operators().iter().map(rows_of).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "ChannelSpec('{}', {}, {})",
            self.inner.kind, self.inner.p_a, self.inner.p_r
        )
    }
}

/// Labeled density matrix.
#[pyclass(name = "DensityMatrix", module = "noninertial_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyDensityMatrix {
    inner: qmat::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    #[pyo3(signature = (rows, labels, nonphysical = false))]
    fn new(rows: Vec<Vec<Complex>>, labels: Vec<String>, nonphysical: bool) -> PyResult<Self> {
        let inner =
            qmat::DensityMatrix::with_flag(matrix_from_rows(rows)?, labels_of(&labels)?, nonphysical).map_err(err)?;
        Ok(Self { inner })
    }

    fn matrix(&self) -> Vec<Vec<Complex>> {
        rows_of(self.inner.matrix())
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().iter().map(ToString::to_string).collect()
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    #[getter]
    fn nonphysical(&self) -> bool {
        self.inner.is_nonphysical()
    }

    fn partial_trace(&self, keep: Vec<String>) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.partial_trace(&labels_of(&keep)?).map_err(err)?,
        })
    }

    fn partial_transpose(&self, label: &str) -> PyResult<Vec<Vec<Complex>>> {
        Ok(rows_of(&self.inner.partial_transpose(parse(label)?).map_err(err)?))
    }

    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.diagnostics().map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(labels={:?})", self.labels())
    }
}

#[pyfunction]
#[pyo3(signature = (params, allow_nonphysical = false))]
fn x_state(params: PyRef<'_, PyXParams>, allow_nonphysical: bool) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: model::x_state(&params.inner, allow_nonphysical).map_err(err)?,
    })
}

#[pyfunction]
fn apply_unruh(rho: PyRef<'_, PyDensityMatrix>, r: f64) -> PyResult<PyDensityMatrix> {
    let accel = AccelParams::new(r).map_err(err)?;
    Ok(PyDensityMatrix {
        inner: model::apply_unruh(&rho.inner, &accel).map_err(err)?,
    })
}

#[pyfunction]
fn r_from_acceleration(omega: f64, a: f64, c_light: f64) -> PyResult<f64> {
    Ok(model::r_from_acceleration(omega, a, c_light).map_err(err)?.r)
}

/// Four-qubit state over (A, R, EA, ER).
#[pyfunction]
#[pyo3(signature = (params, r, spec, allow_nonphysical = false))]
fn evolve(
    params: PyRef<'_, PyXParams>,
    r: f64,
    spec: PyRef<'_, PyChannelSpec>,
    allow_nonphysical: bool,
) -> PyResult<PyDensityMatrix> {
    let accel = AccelParams::new(r).map_err(err)?;
    Ok(PyDensityMatrix {
        inner: model::evolve_from_params(&params.inner, &accel, &spec.inner, allow_nonphysical).map_err(err)?,
    })
}

#[pyfunction]
fn reduce(total: PyRef<'_, PyDensityMatrix>, partition: &str) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: model::reduce_partition(&total.inner, parse(partition)?).map_err(err)?,
    })
}

/// Wootters concurrence, with the X-state shortcut when it applies.
#[pyfunction]
fn concurrence(rho: PyRef<'_, PyDensityMatrix>) -> PyResult<f64> {
    Ok(entanglement::concurrence_auto(&rho.inner).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (rho, tol = entanglement::PPT_TOL))]
fn ppt<'py>(py: Python<'py>, rho: PyRef<'_, PyDensityMatrix>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &entanglement::ppt_test(&rho.inner, tol).map_err(err)?)
}

fn sweep_config(
    params: &PyXParams,
    channel: &str,
    r_steps: usize,
    p_steps: usize,
    partitions: Option<Vec<String>>,
    allow_nonphysical: bool,
) -> PyResult<SweepConfig> {
    let mut cfg = SweepConfig::new(params.inner, parse::<ChannelKind>(channel)?);
    cfg.r_grid = Grid::full_r(r_steps);
    cfg.p_grid = Grid::full_p(p_steps);
    if let Some(names) = partitions {
        cfg.partitions = names.iter().map(|s| parse::<Partition>(s)).collect::<PyResult<_>>()?;
    }
    cfg.allow_nonphysical = allow_nonphysical;
    Ok(cfg)
}

/// Full-range (r, p) sweep. Returns a dict with the CSV header, the rows and
/// the physicality metadata; `csv_path` additionally writes the CSV.
#[pyfunction]
#[pyo3(signature = (params, channel, r_steps = 65, p_steps = 65, partitions = None, allow_nonphysical = false, csv_path = None))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyXParams>,
    channel: &str,
    r_steps: usize,
    p_steps: usize,
    partitions: Option<Vec<String>>,
    allow_nonphysical: bool,
    csv_path: Option<std::path::PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = sweep_config(&params, channel, r_steps, p_steps, partitions, allow_nonphysical)?;
    let table = py.detach(|| run_sweep(&cfg)).map_err(err)?;
    if let Some(path) = csv_path {
        write_csv_file(&table, &path).map_err(|e| PyIOError::new_err(e.to_string()))?;
    }
    let rows: Vec<Vec<f64>> = table
        .rows
        .iter()
        .map(|r| {
            [r.r, r.p]
                .iter()
                .chain(&r.concurrence)
                .chain(&r.negativity)
                .copied()
                .collect()
        })
        .collect();
    let doc = serde_json::json!({
        "header": table.header().split(',').collect::<Vec<_>>(),
        "rows": rows,
        "nonphysical": table.nonphysical,
        "min_eigenvalue": table.min_eigenvalue,
    });
    json_to_py(py, &doc)
}

/// First SD/SB transition along one axis with the other fixed, e.g.
/// `boundary(XParams.bell(), "amplitude", "SD", "AR", "r", math.pi / 4)`.
#[pyfunction]
#[pyo3(signature = (params, channel, kind, partition, fixed_axis, fixed_value, allow_nonphysical = false))]
#[allow(clippy::too_many_arguments)]
fn boundary<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyXParams>,
    channel: &str,
    kind: &str,
    partition: &str,
    fixed_axis: &str,
    fixed_value: f64,
    allow_nonphysical: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = sweep_config(&params, channel, 65, 65, None, allow_nonphysical)?;
    let fixed: Axis = parse(fixed_axis)?;
    let q = BoundaryQuery::new(
        parse::<BoundaryKind>(kind)?,
        parse(partition)?,
        fixed.other(),
        fixed_value,
    );
    let res = py.detach(|| find_boundary(&cfg, &q)).map_err(err)?;
    to_py(py, &res)
}

/// Entry-wise audit of the published closed forms for one channel.
#[pyfunction]
#[pyo3(signature = (params, r, p, channel, allow_nonphysical = false))]
fn audit<'py>(
    py: Python<'py>,
    params: PyRef<'_, PyXParams>,
    r: f64,
    p: f64,
    channel: &str,
    allow_nonphysical: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let report = analytic::audit(&params.inner, r, p, parse(channel)?, allow_nonphysical).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn noninertial_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyXParams>()?;
    m.add_class::<PyChannelSpec>()?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_function(wrap_pyfunction!(x_state, m)?)?;
    m.add_function(wrap_pyfunction!(apply_unruh, m)?)?;
    m.add_function(wrap_pyfunction!(r_from_acceleration, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(ppt, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(boundary, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    Ok(())
}
