//! Python bindings: elements, 1D node sets, the matrix baseline, point
//! location and the verification suite.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use baryeval::bench;
use baryeval::element::order_basis;
use baryeval::{
    bary_evaluate, Deriv, ElementEvaluator, Error, EvalResult, FieldValues, InterpMode,
    InterpOperator, LocateConfig, LocateProblem, NodeKind, NodeSet, Shape, TensorBasis,
};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_deriv(s: &str) -> PyResult<Deriv> {
    match s {
        "value" => Ok(Deriv::Value),
        "first" | "gradient" => Ok(Deriv::First),
        "second" => Ok(Deriv::Second),
        other => Err(PyValueError::new_err(format!(
            "deriv must be value, first or second, got `{other}`"
        ))),
    }
}

type Evaluation = (f64, Option<Vec<f64>>, Option<f64>);
type MatrixOutput = (Vec<f64>, Option<Vec<Vec<f64>>>);
type BenchRow = (String, usize, String, String, usize, usize, f64, f64);

fn unpack(r: EvalResult) -> Evaluation {
    (r.value, r.gradient().map(<[f64]>::to_vec), r.d2)
}

/// Reference-space coordinates of every grid node, in storage order.
fn node_points(shape: Shape, basis: &TensorBasis) -> Vec<Vec<f64>> {
    let d = shape.dim();
    (0..basis.grid_len())
        .map(|i| shape.expand(&basis.grid_point(i)[..d])[..d].to_vec())
        .collect()
}

/// A field sampled on the nodes of a reference element of order `order`.
#[pyclass(name = "Element", module = "baryeval", frozen)]
struct PyElement {
    inner: ElementEvaluator,
    order: usize,
}

#[pymethods]
impl PyElement {
    /// Builds an element from nodal values given in the order of `nodes()`.
    #[new]
    fn new(shape: &str, order: usize, values: Vec<f64>) -> PyResult<Self> {
        let shape: Shape = shape.parse().map_err(py_err)?;
        let basis = order_basis(shape, order).map_err(py_err)?;
        let field = FieldValues::new(&basis, values).map_err(py_err)?;
        let inner = ElementEvaluator::new(shape, basis, field).map_err(py_err)?;
        Ok(Self { inner, order })
    }

    /// Samples the callable `f(xi: list[float]) -> float` at the nodes.
    #[staticmethod]
    fn from_function(shape: &str, order: usize, f: Bound<'_, PyAny>) -> PyResult<Self> {
        let shape: Shape = shape.parse().map_err(py_err)?;
        let basis = order_basis(shape, order).map_err(py_err)?;
        let values = node_points(shape, &basis)
            .into_iter()
            .map(|xi| f.call1((xi,))?.extract::<f64>())
            .collect::<PyResult<Vec<f64>>>()?;
        Self::new(shape.name(), order, values)
    }

    #[getter]
    fn shape(&self) -> &'static str {
        self.inner.shape().name()
    }

    #[getter]
    fn order(&self) -> usize {
        self.order
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.shape().dim()
    }

    /// Reference coordinates of the nodes.
    fn nodes(&self) -> Vec<Vec<f64>> {
        node_points(self.inner.shape(), self.inner.basis())
    }

    fn values(&self) -> Vec<f64> {
        self.inner.field().data().to_vec()
    }

    /// Number of barycentric weights kept (one per node per axis).
    fn weight_storage(&self) -> usize {
        self.inner.basis().weight_storage()
    }

    /// Returns `(value, gradient or None, second derivative or None)`.
    #[pyo3(signature = (xi, deriv = "value"))]
    fn evaluate(&self, xi: Vec<f64>, deriv: &str) -> PyResult<Evaluation> {
        let want = parse_deriv(deriv)?;
        self.inner
            .phys_evaluate(&xi, want)
            .map(unpack)
            .map_err(py_err)
    }

    /// Values (and gradients) at many points through the cached
    /// interpolation-matrix baseline.
    #[pyo3(signature = (points, gradient = false))]
    fn evaluate_matrix(&self, points: Vec<Vec<f64>>, gradient: bool) -> PyResult<MatrixOutput> {
        let want = if gradient { Deriv::First } else { Deriv::Value };
        let op = InterpOperator::for_element(&self.inner, &points, want, InterpMode::Cached)
            .map_err(py_err)?;
        let out = op.apply(self.inner.field()).map_err(py_err)?;
        let grads = gradient.then(|| (0..points.len()).filter_map(|m| out.gradient(m)).collect());
        Ok((out.values, grads))
    }

    fn __repr__(&self) -> String {
        format!("Element(shape={:?}, order={})", self.shape(), self.order)
    }
}

/// A 1D node set with barycentric weights and differentiation matrices.
#[pyclass(name = "NodeSet", module = "baryeval", frozen)]
struct PyNodeSet {
    inner: NodeSet,
}

#[pymethods]
impl PyNodeSet {
    /// `kind` is one of gll, radau, chebyshev, equispaced.
    #[new]
    fn new(kind: &str, n: usize) -> PyResult<Self> {
        let kind: NodeKind = kind.parse().map_err(py_err)?;
        Ok(Self {
            inner: NodeSet::new(kind, n).map_err(py_err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().to_vec()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    /// First derivative matrix, row-major.
    fn d1(&self) -> Vec<f64> {
        self.inner.d1().to_vec()
    }

    /// Evaluates the interpolant of `values` at `eta`.
    #[pyo3(signature = (values, eta, deriv = "value"))]
    fn evaluate(&self, values: Vec<f64>, eta: f64, deriv: &str) -> PyResult<Evaluation> {
        let want = parse_deriv(deriv)?;
        bary_evaluate(&self.inner, &values, eta, want)
            .map(unpack)
            .map_err(py_err)
    }
}

/// Inverts `map(xi: list[float]) -> list[float]` at `target`.
/// Returns `(xi, residual, iterations, converged)`.
#[pyfunction]
#[pyo3(signature = (shape, order, map, target, max_iters = None))]
fn locate(
    shape: &str,
    order: usize,
    map: Bound<'_, PyAny>,
    target: Vec<f64>,
    max_iters: Option<usize>,
) -> PyResult<(Vec<f64>, f64, usize, bool)> {
    let shape: Shape = shape.parse().map_err(py_err)?;
    let basis = order_basis(shape, order).map_err(py_err)?;
    let d = shape.dim();
    let mapped = node_points(shape, &basis)
        .into_iter()
        .map(|xi| map.call1((xi,))?.extract::<Vec<f64>>())
        .collect::<PyResult<Vec<Vec<f64>>>>()?;
    if let Some(bad) = mapped.iter().find(|x| x.len() != d) {
        return Err(PyValueError::new_err(format!(
            "map returned {} coordinates, expected {d}",
            bad.len()
        )));
    }
    let coord_fields = (0..d)
        .map(|c| FieldValues::new(&basis, mapped.iter().map(|x| x[c]).collect()))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(py_err)?;
    let mut config = LocateConfig::default();
    if let Some(m) = max_iters {
        config.max_iters = m;
    }
    let problem = LocateProblem::new(shape, basis, coord_fields, target, config).map_err(py_err)?;
    let r = baryeval::locate(&problem).map_err(py_err)?;
    Ok((r.xi, r.residual, r.iterations, r.converged))
}

/// Runs the verification suites; returns one `(shape, order, passed, summary)` per cell.
#[pyfunction]
#[pyo3(signature = (shapes = "all", orders = "2..10"))]
fn verify(shapes: &str, orders: &str) -> PyResult<Vec<(String, usize, bool, String)>> {
    let shapes = bench::parse_shapes(shapes).map_err(py_err)?;
    let orders = bench::parse_orders(orders).map_err(py_err)?;
    let report = bench::run_verify(&shapes, &orders).map_err(py_err)?;
    Ok(report
        .cells
        .iter()
        .map(|c| {
            (
                c.shape.name().to_string(),
                c.order,
                c.passed(),
                c.to_string(),
            )
        })
        .collect())
}

/// Times the evaluation methods; returns rows matching the CLI's CSV columns.
#[pyfunction]
#[pyo3(signature = (shapes = "all", orders = "2..6", reps = None, seed = 0))]
fn run_bench(
    shapes: &str,
    orders: &str,
    reps: Option<usize>,
    seed: u64,
) -> PyResult<Vec<BenchRow>> {
    let cfg = bench::BenchConfig::new(
        bench::parse_shapes(shapes).map_err(py_err)?,
        bench::parse_orders(orders).map_err(py_err)?,
        reps,
        seed,
    );
    let records = bench::run_bench(&cfg).map_err(py_err)?;
    Ok(records
        .into_iter()
        .map(|r| {
            (
                r.shape,
                r.order,
                r.method.name().to_string(),
                r.quantity.name().to_string(),
                r.sample_points,
                r.reps,
                r.mean_ns,
                r.stddev_ns,
            )
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "baryeval")]
fn baryeval_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_class::<PyNodeSet>()?;
    m.add_function(wrap_pyfunction!(locate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    m.add(
        "SHAPES",
        Shape::ALL.iter().map(|s| s.name()).collect::<Vec<_>>(),
    )?;
    Ok(())
}
