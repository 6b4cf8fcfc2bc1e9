//! Python bindings. Thin wrappers over the core types plus module-level
//! functions for the closed forms; report structs cross the boundary as
//! plain dicts via their serde encoding.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList};

use qwitness_core::analytic;
use qwitness_core::certify;
use qwitness_core::opt::OptOutcome;
use qwitness_core::pauli::{self, build_graph, GeneralizedGraph, Pauli};
use qwitness_core::potency;
use qwitness_core::state::{self, ProblemHamiltonian, ProductStateParams, QaoaParams};
use qwitness_core::tomography;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, v: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any().unbind(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any().unbind()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any().unbind()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .into_any()
                    .unbind()
            }
        }
        Value::String(s) => s.as_str().into_pyobject(py)?.into_any().unbind(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any().unbind()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, val) in map {
                dict.set_item(key, json_to_py(py, val)?)?;
            }
            dict.into_any().unbind()
        }
    })
}

fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(value_error)?;
    json_to_py(py, &v)
}

fn outcome_to_py(py: Python<'_>, out: &OptOutcome) -> PyResult<Py<PyAny>> {
    let dict = PyDict::new(py);
    dict.set_item("x", out.x.clone())?;
    dict.set_item("value", out.value)?;
    dict.set_item("converged", out.converged)?;
    dict.set_item("iterations", out.iterations)?;
    Ok(dict.into_any().unbind())
}

fn parse_letters(text: &str) -> PyResult<Vec<Pauli>> {
    text.chars()
        .map(|c| {
            Pauli::from_char(c.to_ascii_uppercase())
                .filter(|&p| p != Pauli::I)
                .ok_or_else(|| value_error(format!("invalid witness letter {c:?}")))
        })
        .collect()
}

fn family_graph(family: &str, n: usize) -> PyResult<GeneralizedGraph> {
    match family {
        "ring" => GeneralizedGraph::ring(n).map_err(value_error),
        "line" | "chain" => GeneralizedGraph::line(n).map_err(value_error),
        "complete" => GeneralizedGraph::complete(n).map_err(value_error),
        "tuple" | "full_tuple" => GeneralizedGraph::full_tuple(n).map_err(value_error),
        other => Err(value_error(format!(
            "unknown family {other:?} (expected ring, line, complete, or tuple)"
        ))),
    }
}

fn spec_from_letters(graph: GeneralizedGraph, letters: &str) -> PyResult<pauli::WitnessSpec> {
    let parsed = parse_letters(letters)?;
    match parsed.len() {
        2 => pauli::WitnessSpec::w_pq(graph, parsed[0], parsed[1]).map_err(value_error),
        3 => {
            let mut sorted = parsed.clone();
            sorted.sort_by_key(|p| p.as_char());
            if sorted != [Pauli::X, Pauli::Y, Pauli::Z] {
                return Err(value_error("three-letter witnesses must use X, Y, and Z"));
            }
            pauli::WitnessSpec::w_xyz(graph).map_err(value_error)
        }
        m => Err(value_error(format!("expected 2 or 3 letters, got {m}"))),
    }
}

/// Witness description: a generalized graph plus up to three Pauli terms.
#[pyclass(name = "WitnessSpec", module = "qwitness", skip_from_py_object)]
#[derive(Clone)]
struct PyWitnessSpec {
    inner: pauli::WitnessSpec,
}

impl PyWitnessSpec {
    fn observable(&self) -> PyResult<pauli::Observable> {
        pauli::build_witness(&self.inner).map_err(value_error)
    }
}

#[pymethods]
impl PyWitnessSpec {
    /// Build a named-family witness: ring, line, complete, or tuple.
    #[staticmethod]
    #[pyo3(signature = (family, n, letters = "XZ"))]
    fn family(family: &str, n: usize, letters: &str) -> PyResult<Self> {
        let graph = family_graph(family, n)?;
        Ok(PyWitnessSpec {
            inner: spec_from_letters(graph, letters)?,
        })
    }

    /// Build a witness over explicit k-tuples on n nodes.
    #[staticmethod]
    #[pyo3(signature = (n, edges, letters = "XZ"))]
    fn custom(n: usize, edges: Vec<Vec<usize>>, letters: &str) -> PyResult<Self> {
        let k = edges
            .first()
            .map(Vec::len)
            .ok_or_else(|| value_error("empty edge list"))?;
        let graph = build_graph(n, k, &edges).map_err(value_error)?;
        Ok(PyWitnessSpec {
            inner: spec_from_letters(graph, letters)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyWitnessSpec {
            inner: pauli::WitnessSpec::from_json_str(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.graph.n_nodes()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.graph.n_edges()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.graph.k()
    }

    #[getter]
    fn separable_bound(&self) -> f64 {
        certify::separable_bound(&self.inner)
    }

    #[getter]
    fn weyl_upper(&self) -> f64 {
        certify::weyl_upper(&self.inner)
    }

    fn moment_lower_bound(&self) -> PyResult<f64> {
        certify::moment_lower_bound(&self.inner).map_err(value_error)
    }

    /// Largest eigenvalue and the method that produced it.
    fn max_eigenvalue(&self) -> PyResult<(f64, String)> {
        let (lambda, method) = certify::max_eigenvalue(&self.observable()?).map_err(value_error)?;
        let name = match method {
            certify::EigMethod::Exact => "exact",
            certify::EigMethod::Iterative => "iterative",
        };
        Ok((lambda, name.to_string()))
    }

    /// Separable bound, Weyl upper bound, moment lower bound, and
    /// (optionally) the exact maximum eigenvalue, as a dict.
    #[pyo3(signature = (eigenvalue = true))]
    fn bounds(&self, py: Python<'_>, eigenvalue: bool) -> PyResult<Py<PyAny>> {
        let report = certify::bound_report(&self.inner, eigenvalue).map_err(value_error)?;
        to_py(py, &report)
    }

    fn expectation(&self, state: &PyStateVector) -> PyResult<f64> {
        state::expectation(&self.observable()?, &state.inner).map_err(value_error)
    }

    #[pyo3(signature = (state, p_noise))]
    fn depolarized_expectation(&self, state: &PyStateVector, p_noise: f64) -> PyResult<f64> {
        state::depolarized_expectation(&self.observable()?, &state.inner, p_noise)
            .map_err(value_error)
    }

    /// Compare an expectation against the separable bound.
    #[pyo3(signature = (expectation, tolerance = 1e-6))]
    fn verdict(&self, py: Python<'_>, expectation: f64, tolerance: f64) -> PyResult<Py<PyAny>> {
        to_py(py, &certify::verdict(&self.inner, expectation, tolerance))
    }

    /// Best expectation over k-block product states (heuristic ascent).
    #[pyo3(signature = (k, restarts = 8, seed = 0))]
    fn ksep_max(&self, py: Python<'_>, k: usize, restarts: usize, seed: u64) -> PyResult<Py<PyAny>> {
        let report =
            certify::ksep_max(&self.observable()?, k, restarts, seed).map_err(value_error)?;
        to_py(py, &report)
    }

    /// Fraction of random-angle depth-p circuit states that violate the bound.
    #[pyo3(signature = (hamiltonian, layers = 1, samples = 1000, seed = 0, tolerance = 1e-6, two_sided = false))]
    fn potency_qaoa(
        &self,
        py: Python<'_>,
        hamiltonian: &PyHamiltonian,
        layers: usize,
        samples: usize,
        seed: u64,
        tolerance: f64,
        two_sided: bool,
    ) -> PyResult<Py<PyAny>> {
        let opts = potency::PotencyOptions {
            detection_tolerance: tolerance,
            two_sided,
        };
        let est =
            potency::potency_qaoa_with(&self.inner, &hamiltonian.inner, layers, samples, seed, &opts)
                .map_err(value_error)?;
        to_py(py, &est)
    }

    /// Fraction of Haar-random states that violate the bound.
    #[pyo3(signature = (samples = 1000, seed = 0, tolerance = 1e-6, two_sided = false))]
    fn potency_haar(
        &self,
        py: Python<'_>,
        samples: usize,
        seed: u64,
        tolerance: f64,
        two_sided: bool,
    ) -> PyResult<Py<PyAny>> {
        let opts = potency::PotencyOptions {
            detection_tolerance: tolerance,
            two_sided,
        };
        let est = potency::potency_haar_with(&self.inner, samples, seed, &opts).map_err(value_error)?;
        to_py(py, &est)
    }

    fn __repr__(&self) -> String {
        format!(
            "WitnessSpec(n={}, k={}, edges={}, terms={})",
            self.inner.graph.n_nodes(),
            self.inner.graph.k(),
            self.inner.graph.n_edges(),
            self.inner.n_active_terms()
        )
    }
}

/// Diagonal problem Hamiltonian driving the phase layer.
#[pyclass(name = "Hamiltonian", module = "qwitness", skip_from_py_object)]
#[derive(Clone)]
struct PyHamiltonian {
    inner: ProblemHamiltonian,
}

#[pymethods]
impl PyHamiltonian {
    /// Equal-weight cut Hamiltonian on a named pair-graph family.
    #[staticmethod]
    fn maxcut(family: &str, n: usize) -> PyResult<Self> {
        let graph = family_graph(family, n)?;
        Ok(PyHamiltonian {
            inner: ProblemHamiltonian::maxcut(graph).map_err(value_error)?,
        })
    }

    /// Complete graph with seeded random +-1 couplings.
    #[staticmethod]
    fn random_couplings(n: usize, seed: u64) -> PyResult<Self> {
        Ok(PyHamiltonian {
            inner: potency::random_z2_hamiltonian(n, seed).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyHamiltonian {
            inner: ProblemHamiltonian::from_json_str(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.graph().n_edges()
    }

    #[getter]
    fn couplings(&self) -> Vec<f64> {
        self.inner.couplings().to_vec()
    }

    /// Depth-p circuit state for the given angle schedules.
    fn qaoa(&self, gammas: Vec<f64>, betas: Vec<f64>) -> PyResult<PyStateVector> {
        let params = QaoaParams::new(gammas, betas).map_err(value_error)?;
        Ok(PyStateVector {
            inner: state::qaoa_state(&self.inner, &params).map_err(value_error)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "Hamiltonian(n={}, edges={})",
            self.inner.n_qubits(),
            self.inner.graph().n_edges()
        )
    }
}

/// Pure n-qubit state.
#[pyclass(name = "StateVector", module = "qwitness", skip_from_py_object)]
#[derive(Clone)]
struct PyStateVector {
    inner: state::StateVector,
}

#[pymethods]
impl PyStateVector {
    /// GHZ-type state with optional bit flips and relative sign -1 or +1.
    #[staticmethod]
    #[pyo3(signature = (n, flips = Vec::new(), sign = 1))]
    fn ghz(n: usize, flips: Vec<usize>, sign: i64) -> PyResult<Self> {
        if sign != 1 && sign != -1 {
            return Err(value_error("sign must be +1 or -1"));
        }
        Ok(PyStateVector {
            inner: state::ghz_state(n, &flips, sign as i8).map_err(value_error)?,
        })
    }

    /// Uniform superposition |+...+>.
    #[staticmethod]
    fn plus(n: usize) -> PyResult<Self> {
        Ok(PyStateVector {
            inner: state::StateVector::uniform_plus(n).map_err(value_error)?,
        })
    }

    /// Seeded Haar-random pure state.
    #[staticmethod]
    fn haar(n: usize, seed: u64) -> PyResult<Self> {
        Ok(PyStateVector {
            inner: state::haar_random(n, seed).map_err(value_error)?,
        })
    }

    /// Product of single-qubit states cos(t/2)|0> + e^{i phi} sin(t/2)|1>.
    #[staticmethod]
    fn product(thetas: Vec<f64>, phis: Vec<f64>) -> PyResult<Self> {
        let params = ProductStateParams::new(thetas, phis).map_err(value_error)?;
        Ok(PyStateVector {
            inner: state::product_state(&params).map_err(value_error)?,
        })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn probabilities(&self) -> Vec<f64> {
        (0..self.inner.dim()).map(|x| self.inner.probability(x)).collect()
    }

    /// Amplitudes as (re, im) pairs in computational-basis order.
    fn amplitudes(&self) -> Vec<(f64, f64)> {
        self.inner.amplitudes().iter().map(|a| (a.re, a.im)).collect()
    }

    /// Sample three-basis measurement counts, optionally through
    /// depolarizing noise of strength p_noise.
    #[pyo3(signature = (shots = 1024, p_noise = 0.0, seed = 0))]
    fn simulate_shots(&self, shots: u64, p_noise: f64, seed: u64) -> PyResult<PyMeasurementDataset> {
        Ok(PyMeasurementDataset {
            inner: tomography::simulate_shots(&self.inner, shots, p_noise, seed)
                .map_err(value_error)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("StateVector(n={})", self.inner.n_qubits())
    }
}

/// Bitstring counts for the three uniform measurement bases X, Y, Z.
#[pyclass(name = "MeasurementDataset", module = "qwitness", skip_from_py_object)]
#[derive(Clone)]
struct PyMeasurementDataset {
    inner: tomography::MeasurementDataset,
}

#[pymethods]
impl PyMeasurementDataset {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMeasurementDataset {
            inner: tomography::MeasurementDataset::from_json_str(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json_string().map_err(value_error)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn counts(&self, py: Python<'_>, basis: &str) -> PyResult<Py<PyAny>> {
        let counts = self.inner.basis_counts(basis).map_err(value_error)?;
        let dict = PyDict::new(py);
        for (bits, count) in counts {
            dict.set_item(bits, *count)?;
        }
        Ok(dict.into_any().unbind())
    }

    fn total_shots(&self, basis: &str) -> PyResult<u64> {
        self.inner.total_shots(basis).map_err(value_error)
    }

    /// Raw Bloch vector of one qubit from the three parity estimators.
    fn bloch(&self, qubit: usize) -> PyResult<(f64, f64, f64)> {
        let b = tomography::estimate_bloch(&self.inner, qubit).map_err(value_error)?;
        Ok((b.x, b.y, b.z))
    }

    /// Per-qubit reconstruction report against the depth-1 ideal at the
    /// given node degrees and phase angle.
    fn coherence_report(
        &self,
        py: Python<'_>,
        degrees: Vec<usize>,
        gamma: f64,
    ) -> PyResult<Py<PyAny>> {
        let report =
            tomography::coherence_report(&self.inner, &degrees, gamma).map_err(value_error)?;
        to_py(py, &report)
    }

    /// Witness estimate and its standard error from the counts.
    fn witness_expectation(&self, spec: &PyWitnessSpec) -> PyResult<(f64, f64)> {
        tomography::witness_expectation_from_shots(&self.inner, &spec.inner).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("MeasurementDataset(n={})", self.inner.n_qubits())
    }
}

/// Closed-form per-edge ring value at depth 1.
#[pyfunction]
fn ring_edge(gamma: f64, beta: f64) -> f64 {
    analytic::ring_edge(gamma, beta)
}

/// Closed-form open-chain witness total at depth 1.
#[pyfunction]
fn linear_chain_total(n: usize, gamma: f64, beta: f64) -> PyResult<f64> {
    analytic::linear_chain_total(n, gamma, beta).map_err(value_error)
}

/// Closed-form per-edge complete-graph value at depth 1.
#[pyfunction]
fn complete_edge(n: usize, gamma: f64, beta: f64) -> PyResult<f64> {
    analytic::complete_edge(n, gamma, beta).map_err(value_error)
}

/// Closed-form (xx, yy, zz) edge correlators for edge degrees d_u, d_v and
/// f shared neighbors.
#[pyfunction]
fn edge_correlators(
    d_u: usize,
    d_v: usize,
    f: usize,
    gamma: f64,
    beta: f64,
) -> PyResult<(f64, f64, f64)> {
    let ctx = analytic::EdgeContext::new(d_u, d_v, f).map_err(value_error)?;
    Ok(analytic::edge_expectations(ctx, gamma, beta))
}

/// Maximize the per-edge ring value over angles.
#[pyfunction]
fn maximize_ring(py: Python<'_>) -> PyResult<Py<PyAny>> {
    let out = analytic::maximize_family(&analytic::ring_edge).map_err(value_error)?;
    outcome_to_py(py, &out)
}

/// Maximize the open-chain witness total over angles.
#[pyfunction]
fn maximize_chain(py: Python<'_>, n: usize) -> PyResult<Py<PyAny>> {
    let out = analytic::linear_chain_max_with_angles(n).map_err(value_error)?;
    outcome_to_py(py, &out)
}

/// Maximize the per-edge complete-graph value over angles.
#[pyfunction]
fn maximize_complete(py: Python<'_>, n: usize) -> PyResult<Py<PyAny>> {
    let out =
        analytic::maximize_family(&|g, b| analytic::complete_edge(n, g, b).unwrap_or(f64::NAN))
            .map_err(value_error)?;
    outcome_to_py(py, &out)
}

/// Least-squares slope and intercept of the chain maxima over n in [lo, hi].
#[pyfunction]
fn fit_chain(lo: usize, hi: usize) -> PyResult<(f64, f64)> {
    analytic::fit_linear_chain(lo..=hi).map_err(value_error)
}

/// Angle-space fraction where the ring family exceeds its separable bound.
#[pyfunction]
#[pyo3(signature = (resolution = 2000))]
fn ring_detection_integral(resolution: usize) -> PyResult<f64> {
    potency::heaviside_ring_integral(resolution).map_err(value_error)
}

/// Detection fractions over random +-1 complete-graph instances.
#[pyfunction]
#[pyo3(signature = (n, hams = 40, samples = 500, seed = 0))]
fn random_coupling_protocol(py: Python<'_>, n: usize, hams: usize, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let summary = potency::random_coupling_protocol(n, hams, samples, seed).map_err(value_error)?;
    to_py(py, &summary)
}

/// Ideal depth-1 single-qubit state for a node of the given degree:
/// density matrix entries, coherence, and the best incoherent fidelity.
#[pyfunction]
fn sqrdm_ideal(py: Python<'_>, degree: usize, gamma: f64) -> PyResult<Py<PyAny>> {
    let rho = analytic::sqrdm_qaoa(degree, gamma);
    let dict = PyDict::new(py);
    dict.set_item("rho", to_py(py, &rho)?)?;
    dict.set_item("coherence", analytic::coherence(&rho))?;
    dict.set_item(
        "max_classical_fidelity",
        analytic::max_classical_fidelity(degree, gamma),
    )?;
    Ok(dict.into_any().unbind())
}

/// Noise strength above which an n-qubit chain witness stops certifying.
#[pyfunction]
fn critical_threshold(n: usize) -> PyResult<f64> {
    tomography::critical_threshold(n).map_err(value_error)
}

/// Fit a single depolarizing strength to observed-vs-ideal witness values.
#[pyfunction]
fn fit_noise(py: Python<'_>, observed: Vec<f64>, ideal: Vec<f64>, n_qubits: usize) -> PyResult<Py<PyAny>> {
    let fit = tomography::fit_depolarizing(&observed, &ideal, n_qubits).map_err(value_error)?;
    to_py(py, &fit)
}

/// Generalized Cauchy-Schwarz check: (lhs, rhs) with lhs <= rhs.
#[pyfunction]
fn gcs_check(vectors: Vec<Vec<f64>>) -> PyResult<(f64, f64)> {
    pauli::gcs_check(&vectors).map_err(value_error)
}

#[pymodule]
fn qwitness(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWitnessSpec>()?;
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PyStateVector>()?;
    m.add_class::<PyMeasurementDataset>()?;
    m.add_function(wrap_pyfunction!(ring_edge, m)?)?;
    m.add_function(wrap_pyfunction!(linear_chain_total, m)?)?;
    m.add_function(wrap_pyfunction!(complete_edge, m)?)?;
    m.add_function(wrap_pyfunction!(edge_correlators, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_ring, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_chain, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_complete, m)?)?;
    m.add_function(wrap_pyfunction!(fit_chain, m)?)?;
    m.add_function(wrap_pyfunction!(ring_detection_integral, m)?)?;
    m.add_function(wrap_pyfunction!(random_coupling_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(sqrdm_ideal, m)?)?;
    m.add_function(wrap_pyfunction!(critical_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(fit_noise, m)?)?;
    m.add_function(wrap_pyfunction!(gcs_check, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
