//! Python bindings: instances, tours, the TSP and knight's tour solvers,
//! polygon tours and the SAT solvers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gaptour::io::{parse_dimacs, parse_tsplib};
use gaptour::sat::{self, Knowledge, ListId, SatOutcome};
use gaptour::tsp::{self, Crossing, StopReason};
use gaptour::{Board, EulerScheme, GapInstance, GreedyConfig, Metric, Point, PolygonSpec, RasterVerdict, StepPolicy};

fn err(e: gaptour::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn metric(name: &str) -> PyResult<Metric> {
    name.parse().map_err(err)
}

fn list_id(name: &str) -> PyResult<ListId> {
    match name {
        "free" | "S" => Ok(ListId::Free),
        "blocked" | "M" => Ok(ListId::Blocked),
        _ => Err(PyValueError::new_err(format!("unknown list {name:?}, expected 'free' or 'blocked'"))),
    }
}

fn config(seed: u64, restarts: usize, policy: &str) -> PyResult<GreedyConfig> {
    let step_policy: StepPolicy = policy.parse().map_err(err)?;
    Ok(GreedyConfig { restarts, step_policy, ..GreedyConfig::with_seed(seed) })
}

#[pyclass(name = "Instance", module = "pygaptour", frozen)]
struct PyInstance {
    inner: GapInstance,
}

#[pymethods]
impl PyInstance {
    /// Points are `(x, y)` or `(x, y, z)` tuples.
    #[staticmethod]
    #[pyo3(signature = (points, metric = "euclidean"))]
    fn from_points(points: Vec<Vec<f64>>, metric: &str) -> PyResult<Self> {
        let pts = points
            .iter()
            .map(|p| match p.as_slice() {
                [x, y] => Ok(Point::new(*x, *y)),
                [x, y, z] => Ok(Point::new3(*x, *y, *z)),
                _ => Err(PyValueError::new_err("points need 2 or 3 coordinates")),
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyInstance { inner: gaptour::build_instance(&pts, self::metric(metric)?).map_err(err)? })
    }

    #[staticmethod]
    fn from_matrix(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(PyInstance { inner: GapInstance::from_matrix(&rows).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (text, rounding = false))]
    fn from_tsplib(text: &str, rounding: bool) -> PyResult<Self> {
        Ok(PyInstance { inner: parse_tsplib(text, rounding).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn cost(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(PyValueError::new_err(format!("vertex out of range for n = {n}")));
        }
        Ok(self.inner.cost(i, j))
    }

    fn is_planar(&self) -> bool {
        self.inner.is_planar()
    }

    fn __repr__(&self) -> String {
        format!("Instance(n={})", self.inner.n())
    }
}

#[pyclass(name = "Tour", module = "pygaptour", frozen)]
struct PyTour {
    inner: gaptour::Tour,
}

#[pymethods]
impl PyTour {
    #[new]
    fn new(order: Vec<usize>, instance: &PyInstance) -> PyResult<Self> {
        Ok(PyTour { inner: gaptour::Tour::new(order, &instance.inner).map_err(err)? })
    }

    #[getter]
    fn order(&self) -> Vec<usize> {
        self.inner.order().to_vec()
    }

    #[getter]
    fn cost(&self) -> f64 {
        self.inner.cost()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Tour(order={:?}, cost={})", self.inner.order(), self.inner.cost())
    }
}

fn tour(inner: gaptour::Tour) -> PyTour {
    PyTour { inner }
}

#[pyfunction]
fn canonicalize(t: &PyTour) -> PyTour {
    tour(gaptour::canonicalize(&t.inner))
}

#[pyfunction]
#[pyo3(signature = (instance, maximize = false, limit = gaptour::DEFAULT_BRUTE_FORCE_LIMIT))]
fn brute_force_optimum(instance: &PyInstance, maximize: bool, limit: usize) -> PyResult<PyTour> {
    gaptour::brute_force_optimum_limited(&instance.inner, maximize, limit).map(tour).map_err(err)
}

/// `[pred_rank, succ_rank]` per vertex.
#[pyfunction]
fn edge_rank_profile(t: &PyTour, instance: &PyInstance) -> PyResult<Vec<[usize; 2]>> {
    gaptour::edge_rank_profile(&t.inner, &instance.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (instance, seed = 0, restarts = tsp::DEFAULT_RESTARTS, policy = "greedy"))]
fn greedy_tour(instance: &PyInstance, seed: u64, restarts: usize, policy: &str) -> PyResult<PyTour> {
    gaptour::greedy_tour(&instance.inner, &config(seed, restarts, policy)?, None).map(tour).map_err(err)
}

#[pyfunction]
fn find_crossing(t: &PyTour, instance: &PyInstance) -> PyResult<Option<(usize, usize)>> {
    Ok(gaptour::find_crossing(&t.inner, &instance.inner).map_err(err)?.map(|c| (c.i, c.j)))
}

#[pyfunction]
fn uncross(t: &PyTour, i: usize, j: usize, instance: &PyInstance) -> PyResult<PyTour> {
    gaptour::uncross(&t.inner, Crossing { i, j }, &instance.inner).map(tour).map_err(err)
}

/// Returns `{"tour", "stop", "round_costs"}`.
#[pyfunction]
#[pyo3(signature = (instance, seed = 0, restarts = tsp::DEFAULT_RESTARTS, policy = "greedy", max_rounds = None))]
fn solve_tsp<'py>(
    py: Python<'py>,
    instance: &PyInstance,
    seed: u64,
    restarts: usize,
    policy: &str,
    max_rounds: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = config(seed, restarts, policy)?;
    let rounds = max_rounds.unwrap_or(tsp::default_max_rounds(instance.inner.n()));
    let run = py.detach(|| gaptour::solve_tsp(&instance.inner, &cfg, rounds)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item(
        "stop",
        match run.stop {
            StopReason::JordanCurve => "jordan_curve",
            StopReason::MaxRounds => "max_rounds",
            StopReason::DegenerateCrossings => "degenerate_crossings",
        },
    )?;
    d.set_item("round_costs", run.rounds.iter().map(|r| r.cost).collect::<Vec<_>>())?;
    d.set_item("tour", Py::new(py, tour(run.tour))?)?;
    Ok(d)
}

/// Returns `(verdict, marked_vertices, interior_pixels)`; `k` defaults to
/// `adequate_resolution`.
#[pyfunction]
#[pyo3(signature = (t, instance, k = None))]
fn two_color_raster(t: &PyTour, instance: &PyInstance, k: Option<u32>) -> PyResult<(String, Vec<usize>, usize)> {
    let k = match k {
        Some(k) => k,
        None => tsp::adequate_resolution(&t.inner, &instance.inner).map_err(err)?,
    };
    let check = gaptour::two_color_raster(&t.inner, &instance.inner, k).map_err(err)?;
    Ok(match check.verdict {
        RasterVerdict::Simple => ("simple".into(), Vec::new(), check.interior_pixels),
        RasterVerdict::Crossed { marked } => ("crossed".into(), marked, check.interior_pixels),
    })
}

#[pyfunction]
fn adequate_resolution(t: &PyTour, instance: &PyInstance) -> PyResult<u32> {
    tsp::adequate_resolution(&t.inner, &instance.inner).map_err(err)
}

/// Returns `{"tour", "proven", "parity_feasible", "non_knight_edges",
/// "restarts_used"}`; squares are `(row, col)`, 1-based.
#[pyfunction]
#[pyo3(signature = (rows, cols, scheme = "uniform", seed = 0, budget = 1_000_000, restarts = tsp::DEFAULT_RESTARTS))]
fn solve_ktp<'py>(
    py: Python<'py>,
    rows: usize,
    cols: usize,
    scheme: &str,
    seed: u64,
    budget: u64,
    restarts: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let board = Board::new(rows, cols).map_err(err)?;
    let scheme: EulerScheme = scheme.parse().map_err(err)?;
    let cfg = GreedyConfig { restarts, ..GreedyConfig::with_seed(seed) };
    let run = py.detach(|| gaptour::solve_ktp(&board, &scheme, &cfg, budget)).map_err(err)?;
    let squares: Vec<(usize, usize)> = run.tour.order().iter().map(|&v| board.square(v)).map(|s| (s.row, s.col)).collect();
    let flagged: Vec<((usize, usize), (usize, usize))> =
        run.report.non_knight_edges.iter().map(|(a, b)| ((a.row, a.col), (b.row, b.col))).collect();
    let d = PyDict::new(py);
    d.set_item("tour", squares)?;
    d.set_item("cost", run.tour.cost())?;
    d.set_item("proven", run.proven)?;
    d.set_item("parity_feasible", run.parity_feasible)?;
    d.set_item("non_knight_edges", flagged)?;
    d.set_item("restarts_used", run.restarts_used)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (n, radius = 1.0))]
fn regular_polygon(n: usize, radius: f64) -> PyResult<Vec<(f64, f64)>> {
    let spec = PolygonSpec::new(n, radius).map_err(err)?;
    Ok(gaptour::regular_polygon(&spec).iter().map(|p| (p.x, p.y)).collect())
}

#[pyfunction]
#[pyo3(signature = (n, radius = 1.0))]
fn star_tour(n: usize, radius: f64) -> PyResult<PyTour> {
    let spec = PolygonSpec::new(n, radius).map_err(err)?;
    gaptour::star_tour(&spec, Metric::Euclidean).map(tour).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, radius = 1.0, metric = "euclidean"))]
fn min_polygon_tour(n: usize, radius: f64, metric: &str) -> PyResult<PyTour> {
    let spec = PolygonSpec::new(n, radius).map_err(err)?;
    Ok(tour(gaptour::min_polygon_tour(&spec, self::metric(metric)?)))
}

#[pyfunction]
fn one_based_labels(order: Vec<usize>) -> Vec<usize> {
    gaptour::one_based_labels(&order)
}

#[pyclass(name = "SatInstance", module = "pygaptour", frozen)]
struct PySatInstance {
    inner: sat::SatInstance,
}

#[pymethods]
impl PySatInstance {
    /// Clauses as digit strings, `x_{n-1}` first (0 negated, 1 positive, 2 absent).
    #[new]
    fn new(n: usize, clauses: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = clauses.iter().map(String::as_str).collect();
        Ok(PySatInstance { inner: sat::SatInstance::parse(n, &refs).map_err(err)? })
    }

    #[staticmethod]
    fn from_values(n: usize, values: Vec<u64>) -> PyResult<Self> {
        Ok(PySatInstance { inner: sat::SatInstance::from_values(n, &values).map_err(err)? })
    }

    #[staticmethod]
    fn from_dimacs(text: &str) -> PyResult<Self> {
        Ok(PySatInstance { inner: parse_dimacs(text).map_err(err)?.instance })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn is_simple(&self) -> bool {
        self.inner.is_simple()
    }

    fn clauses(&self) -> Vec<String> {
        self.inner.clauses().iter().map(|c| c.to_string()).collect()
    }

    fn evaluate(&self, y: u64) -> PyResult<bool> {
        self.inner.evaluate(y).map_err(err)
    }

    fn evaluate_ternary(&self, assignment: &str) -> PyResult<bool> {
        self.inner.evaluate_ternary(assignment).map_err(err)
    }

    fn usage_matrix(&self) -> Vec<Vec<u8>> {
        self.inner.usage_matrix()
    }
}

fn outcome(o: SatOutcome) -> (&'static str, Option<u64>) {
    match o {
        SatOutcome::Solution(y) => ("solution", Some(y)),
        SatOutcome::Augmented(y) => ("augmented", Some(y)),
        SatOutcome::Unsatisfiable => ("unsatisfiable", None),
    }
}

/// Returns `(kind, witness or None, evaluations)`.
#[pyfunction]
fn solve_deterministic(instance: &PySatInstance) -> PyResult<(&'static str, Option<u64>, u64)> {
    let run = sat::solve_deterministic(&instance.inner).map_err(err)?;
    let (kind, y) = outcome(run.outcome);
    Ok((kind, y, run.evaluations))
}

#[pyfunction]
#[pyo3(signature = (instance, seed = 0))]
fn solve_probabilistic(instance: &PySatInstance, seed: u64) -> PyResult<(&'static str, Option<u64>, u64)> {
    let run = sat::solve_probabilistic(&instance.inner, seed).map_err(err)?;
    let (kind, y) = outcome(run.outcome);
    Ok((kind, y, run.evaluations))
}

#[pyfunction]
fn is_unsatisfiable_by_coverage(instance: &PySatInstance) -> PyResult<bool> {
    sat::is_unsatisfiable_by_coverage(&instance.inner).map_err(err)
}

#[pyfunction]
fn complement(y: u64, n: usize) -> PyResult<u64> {
    sat::complement(y, n).map_err(err)
}

/// The free/blocked linked lists over `[0, 2^n)`. Lists are named "free"
/// (alias "S") and "blocked" (alias "M").
#[pyclass(name = "Knowledge", module = "pygaptour")]
struct PyKnowledge {
    inner: Knowledge,
}

#[pymethods]
impl PyKnowledge {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(PyKnowledge { inner: Knowledge::new(n).map_err(err)? })
    }

    fn ks_move(&mut self, value: u64, src: &str, dst: &str) -> PyResult<()> {
        self.inner.ks_move(value, list_id(src)?, list_id(dst)?).map_err(err)
    }

    /// `(prev, next)`: tail and head slots, 1-based, 0 when empty.
    fn header(&self, list: &str) -> PyResult<(u32, u32)> {
        let h = self.inner.header(list_id(list)?);
        Ok((h.prev, h.next))
    }

    fn link(&self, list: &str, value: u64) -> PyResult<(u32, u32)> {
        let l = self.inner.link(list_id(list)?, value).map_err(err)?;
        Ok((l.prev, l.next))
    }

    fn forward(&self, list: &str) -> PyResult<Vec<u64>> {
        Ok(self.inner.forward(list_id(list)?))
    }

    fn backward(&self, list: &str) -> PyResult<Vec<u64>> {
        Ok(self.inner.backward(list_id(list)?))
    }

    fn solutions(&self) -> Vec<u64> {
        self.inner.solutions().to_vec()
    }

    fn check_integrity(&self) -> PyResult<()> {
        self.inner.check_integrity().map_err(err)
    }
}

#[pyfunction]
fn build_knowledge(instance: &PySatInstance) -> PyResult<PyKnowledge> {
    Ok(PyKnowledge { inner: sat::build_knowledge(&instance.inner).map_err(err)? })
}

#[pymodule]
fn pygaptour(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyTour>()?;
    m.add_class::<PySatInstance>()?;
    m.add_class::<PyKnowledge>()?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(edge_rank_profile, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_tour, m)?)?;
    m.add_function(wrap_pyfunction!(find_crossing, m)?)?;
    m.add_function(wrap_pyfunction!(uncross, m)?)?;
    m.add_function(wrap_pyfunction!(solve_tsp, m)?)?;
    m.add_function(wrap_pyfunction!(two_color_raster, m)?)?;
    m.add_function(wrap_pyfunction!(adequate_resolution, m)?)?;
    m.add_function(wrap_pyfunction!(solve_ktp, m)?)?;
    m.add_function(wrap_pyfunction!(regular_polygon, m)?)?;
    m.add_function(wrap_pyfunction!(star_tour, m)?)?;
    m.add_function(wrap_pyfunction!(min_polygon_tour, m)?)?;
    m.add_function(wrap_pyfunction!(one_based_labels, m)?)?;
    m.add_function(wrap_pyfunction!(solve_deterministic, m)?)?;
    m.add_function(wrap_pyfunction!(solve_probabilistic, m)?)?;
    m.add_function(wrap_pyfunction!(is_unsatisfiable_by_coverage, m)?)?;
    m.add_function(wrap_pyfunction!(complement, m)?)?;
    m.add_function(wrap_pyfunction!(build_knowledge, m)?)?;
    Ok(())
}
