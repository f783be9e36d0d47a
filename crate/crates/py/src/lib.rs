//! Python bindings for the nilrigid engine.

use nilrigid::algebra::GraphAlgebra;
use nilrigid::dynamics::{lyapunov_gap_estimate, random_product_walk, to_f64_matrices, Start, WalkConfig};
use nilrigid::gallery::Example;
use nilrigid::graph::{parse_graph, GraphSpec};
use nilrigid::io::{parse_generators, parse_torus_matrices};
use nilrigid::rational::fmt_q;
use nilrigid::report::{analyze_set, AnalysisOptions, DynamicsOptions, Report};
use nilrigid::rigidity::{fixed_vectors_in_derived, verify_certificate, Budgets, GeneratorSet};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: nilrigid::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite simple graph with labelled vertices.
#[pyclass(name = "Graph", frozen)]
struct PyGraph(GraphSpec);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Self> {
        GraphSpec::new(&vertices, &edges).map(PyGraph).map_err(err)
    }

    /// Parses the `vertices:` / `edge:` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_graph(text).map(PyGraph).map_err(err)
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.0.vertices().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String)> {
        self.0.edges().iter().map(|&(i, j)| (self.0.label(i).to_string(), self.0.label(j).to_string())).collect()
    }

    fn is_coherent(&self, subset: Vec<String>) -> PyResult<bool> {
        self.0.is_coherent(&subset).map_err(err)
    }

    fn coherent_components(&self) -> Vec<Vec<String>> {
        self.0.coherent_components().labelled(&self.0)
    }

    fn render(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Graph({} vertices, {} edges)", self.0.vertex_count(), self.0.edge_count())
    }
}

/// Generators of an affine action on a 2-step nilmanifold or a linear action
/// on a torus.
#[pyclass(name = "GeneratorSet", frozen)]
struct PyGeneratorSet {
    inner: GeneratorSet,
    source: String,
    dense: bool,
}

#[pymethods]
impl PyGeneratorSet {
    /// A gallery example such as `"heisenberg"`, `"complete:3"` or `"torus-f2"`.
    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        let ex = Example::parse(name).map_err(err)?;
        Ok(PyGeneratorSet {
            inner: ex.build().map_err(err)?,
            source: format!("example:{}", ex.name()),
            dense: ex.zariski_dense(),
        })
    }

    /// Generators given as a JSON list of `{translation, shear, linear}` records.
    #[staticmethod]
    fn nilmanifold(graph: &PyGraph, generators_json: &str) -> PyResult<Self> {
        let alg = GraphAlgebra::new(graph.0.clone());
        let gens = parse_generators(generators_json, &alg).map_err(err)?;
        let inner = GeneratorSet::nilmanifold(alg, gens).map_err(err)?;
        Ok(PyGeneratorSet { inner, source: "python".into(), dense: false })
    }

    /// Integer matrices of determinant +-1 given as a JSON list of `{linear}` records.
    #[staticmethod]
    fn torus(generators_json: &str) -> PyResult<Self> {
        let (n, mats) = parse_torus_matrices(generators_json).map_err(err)?;
        let inner = GeneratorSet::torus(n, mats).map_err(err)?;
        Ok(PyGeneratorSet { inner, source: "python".into(), dense: false })
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Linear actions as lists of rows of rational strings.
    fn matrices(&self) -> Vec<Vec<Vec<String>>> {
        self.inner
            .matrices()
            .iter()
            .map(|m| m.to_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect())
            .collect()
    }

    /// Basis of the vectors in W fixed by every generator.
    fn fixed_vectors(&self) -> PyResult<Vec<Vec<String>>> {
        let fixed = fixed_vectors_in_derived(&self.inner).map_err(err)?;
        Ok(fixed.iter().map(|v| v.iter().map(fmt_q).collect()).collect())
    }

    /// Runs the rigidity decision. Gallery examples that generate a lattice
    /// are analyzed as Zariski dense.
    #[pyo3(signature = (*, assume_zariski_dense = None, max_word_length = 8, orbit_bound = 10_000, gap_tol = 0.05, max_words = 4096, dynamics_steps = None, seed = 42))]
    #[allow(clippy::too_many_arguments)]
    fn analyze(
        &self,
        py: Python<'_>,
        assume_zariski_dense: Option<bool>,
        max_word_length: usize,
        orbit_bound: usize,
        gap_tol: f64,
        max_words: usize,
        dynamics_steps: Option<usize>,
        seed: u64,
    ) -> PyResult<PyReport> {
        let options = AnalysisOptions {
            assume_zariski_dense: assume_zariski_dense.unwrap_or(self.dense),
            budgets: Budgets { max_word_length, orbit_bound, gap_tol, max_words },
            dynamics: dynamics_steps.map(|steps| DynamicsOptions { steps, seed, ..DynamicsOptions::default() }),
        };
        let report = py.detach(|| analyze_set(&self.inner, self.source.clone(), &options)).map_err(err)?;
        Ok(PyReport(report))
    }

    /// Top two Lyapunov exponents of the uniform random walk.
    #[pyo3(signature = (steps = 100_000, seed = 42, burn_in = 100))]
    fn lyapunov(&self, py: Python<'_>, steps: usize, seed: u64, burn_in: usize) -> PyResult<(f64, Option<f64>)> {
        let mats = to_f64_matrices(self.inner.matrices());
        let cfg = WalkConfig { steps, seed, burn_in, start: Start::Random };
        let est = py.detach(|| lyapunov_gap_estimate(&mats, &cfg)).map_err(err)?;
        Ok((est.lambda1, est.lambda2))
    }

    /// Unit representatives of a random-walk trajectory on projective space.
    #[pyo3(signature = (steps = 10_000, seed = 42))]
    fn trajectory(&self, py: Python<'_>, steps: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        let mats = to_f64_matrices(self.inner.matrices());
        let cfg = WalkConfig { steps, seed, burn_in: 0, start: Start::Random };
        py.detach(|| random_product_walk(&mats, &cfg)).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("GeneratorSet({}, dimension {}, {} generators)", self.inner.mode(), self.inner.dim(), self.inner.len())
    }
}

/// Result of an analysis.
#[pyclass(name = "Report", frozen)]
struct PyReport(Report);

#[pymethods]
impl PyReport {
    #[getter]
    fn verdict(&self) -> String {
        self.0.verdict.status.to_string()
    }

    #[getter]
    fn criterion(&self) -> &str {
        &self.0.verdict.criterion
    }

    #[getter]
    fn assumptions(&self) -> Vec<String> {
        self.0.verdict.assumptions.clone()
    }

    #[getter]
    fn certificate_type(&self) -> Option<&'static str> {
        self.0.verdict.certificate.as_ref().map(|c| c.kind())
    }

    #[getter]
    fn certificate_verified(&self) -> Option<bool> {
        self.0.certificate_verified
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Report({}, {})", self.0.verdict.status, self.0.verdict.criterion)
    }
}

/// Re-checks a certificate from a report against a generator set.
#[pyfunction]
fn verify(report: &PyReport, generators: &PyGeneratorSet) -> Option<bool> {
    report.0.verdict.certificate.as_ref().map(|c| verify_certificate(c, &generators.inner))
}

/// Analyzes a gallery example with default budgets.
#[pyfunction]
fn analyze_example(py: Python<'_>, name: &str) -> PyResult<PyReport> {
    PyGeneratorSet::example(name)?.analyze(py, None, 8, 10_000, 0.05, 4096, None, 42)
}

#[pymodule]
fn pynilrigid(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyGeneratorSet>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_example, m)?)?;
    Ok(())
}
