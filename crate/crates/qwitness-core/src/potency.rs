//! Entanglement-detection potency: the fraction of randomly drawn states
//! (or circuit parameters) whose witness expectation violates the separable
//! bound.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::ring_edge;
use crate::error::{Error, Result};
use crate::pauli::{build_graph, build_witness, Pauli, WitnessSpec};
use crate::rng::{derive_seed, substream};
use crate::state::{
    expectation, haar_random_with_rng, qaoa_state, ProblemHamiltonian, QaoaParams,
};

/// Margin added to the separable bound before an expectation counts as a
/// violation; absorbs floating-point jitter on states that sit exactly at
/// the bound.
pub const DEFAULT_DETECTION_TOL: f64 = 1e-6;

/// Detection policy for potency estimates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PotencyOptions {
    /// Expectations within this margin of the bound are not violations.
    pub detection_tolerance: f64,
    /// Count |<W>| > bound rather than only <W> > bound. Off by default:
    /// the detection-fraction protocols count upper violations, matching
    /// the angle-space step integral whose integrand is theta(value - 1).
    pub two_sided: bool,
}

impl Default for PotencyOptions {
    fn default() -> Self {
        PotencyOptions {
            detection_tolerance: DEFAULT_DETECTION_TOL,
            two_sided: false,
        }
    }
}

/// Monte-Carlo potency estimate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PotencyEstimate {
    pub fraction: f64,
    pub detected: usize,
    pub samples: usize,
    /// Binomial standard error sqrt(f(1-f)/samples).
    pub std_error: f64,
    pub seed: u64,
    pub descriptor: String,
}

/// Per-Hamiltonian potency summary for the random-coupling protocol.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub n: usize,
    pub n_hams: usize,
    pub samples_per_ham: usize,
    pub mean: f64,
    pub max: f64,
    pub min: f64,
    pub per_ham: Vec<f64>,
    pub seed: u64,
}

fn detects(value: f64, bound: f64, opts: &PotencyOptions) -> bool {
    value > bound + opts.detection_tolerance
        || (opts.two_sided && value < -bound - opts.detection_tolerance)
}

fn estimate(detected: usize, samples: usize, seed: u64, descriptor: String) -> PotencyEstimate {
    let fraction = detected as f64 / samples as f64;
    PotencyEstimate {
        fraction,
        detected,
        samples,
        std_error: (fraction * (1.0 - fraction) / samples as f64).sqrt(),
        seed,
        descriptor,
    }
}

/// Fraction of uniformly drawn depth-`p` circuit angles (each in [0, 2pi))
/// whose state violates the separable bound of `spec` on `hamiltonian`.
pub fn potency_qaoa(
    spec: &WitnessSpec,
    hamiltonian: &ProblemHamiltonian,
    p: usize,
    samples: usize,
    rng_seed: u64,
) -> Result<PotencyEstimate> {
    potency_qaoa_with(
        spec,
        hamiltonian,
        p,
        samples,
        rng_seed,
        &PotencyOptions::default(),
    )
}

/// `potency_qaoa` with an explicit detection policy.
pub fn potency_qaoa_with(
    spec: &WitnessSpec,
    hamiltonian: &ProblemHamiltonian,
    p: usize,
    samples: usize,
    rng_seed: u64,
    opts: &PotencyOptions,
) -> Result<PotencyEstimate> {
    if samples == 0 {
        return Err(Error::EmptyInput { what: "samples" });
    }
    if p == 0 {
        return Err(Error::EmptyInput { what: "layers" });
    }
    if spec.graph.n_nodes() != hamiltonian.n_qubits() {
        return Err(Error::LengthMismatch {
            expected: hamiltonian.n_qubits(),
            got: spec.graph.n_nodes(),
        });
    }
    let obs = build_witness(spec)?;
    let bound = spec.graph.n_edges() as f64;
    let detected = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(rng_seed, i as u64);
            let gammas: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            let betas: Vec<f64> = (0..p).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            let params = QaoaParams::new(gammas, betas).expect("lengths match");
            let state = qaoa_state(hamiltonian, &params).expect("validated inputs");
            let value = expectation(&obs, &state).expect("dimension match");
            detects(value, bound, opts) as usize
        })
        .sum();
    Ok(estimate(
        detected,
        samples,
        rng_seed,
        format!("qaoa(p={p})"),
    ))
}

/// Fraction of Haar-random pure states violating the separable bound.
pub fn potency_haar(spec: &WitnessSpec, samples: usize, rng_seed: u64) -> Result<PotencyEstimate> {
    potency_haar_with(spec, samples, rng_seed, &PotencyOptions::default())
}

/// `potency_haar` with an explicit detection policy.
pub fn potency_haar_with(
    spec: &WitnessSpec,
    samples: usize,
    rng_seed: u64,
    opts: &PotencyOptions,
) -> Result<PotencyEstimate> {
    if samples == 0 {
        return Err(Error::EmptyInput { what: "samples" });
    }
    let obs = build_witness(spec)?;
    let bound = spec.graph.n_edges() as f64;
    let n = spec.graph.n_nodes();
    let detected = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(rng_seed, i as u64);
            let state = haar_random_with_rng(n, &mut rng).expect("validated inputs");
            let value = expectation(&obs, &state).expect("dimension match");
            detects(value, bound, opts) as usize
        })
        .sum();
    Ok(estimate(detected, samples, rng_seed, "haar".to_string()))
}

/// Analytic angle-space detection fraction for the ring family at depth 1:
/// the area fraction of (gamma, beta) in [0, 2pi)^2 where the closed-form
/// per-edge expectation exceeds 1, via a midpoint grid of `resolution`^2
/// cells. The boundary set has measure zero, so ties need no tolerance.
pub fn heaviside_ring_integral(resolution: usize) -> Result<f64> {
    if resolution < 100 {
        return Err(Error::TooFewPoints {
            min: 100,
            got: resolution,
        });
    }
    let step = std::f64::consts::TAU / resolution as f64;
    let hits: usize = (0..resolution)
        .into_par_iter()
        .map(|i| {
            let gamma = (i as f64 + 0.5) * step;
            (0..resolution)
                .filter(|&j| {
                    let beta = (j as f64 + 0.5) * step;
                    ring_edge(gamma, beta) > 1.0
                })
                .count()
        })
        .sum();
    Ok(hits as f64 / (resolution * resolution) as f64)
}

/// Complete-graph Ising instance with independent uniform +-1 couplings.
pub fn random_z2_hamiltonian(n: usize, rng_seed: u64) -> Result<ProblemHamiltonian> {
    random_z2_hamiltonian_with_rng(n, &mut substream(rng_seed, 0))
}

/// `random_z2_hamiltonian` drawing couplings from a caller-supplied stream.
pub fn random_z2_hamiltonian_with_rng(n: usize, rng: &mut impl Rng) -> Result<ProblemHamiltonian> {
    if n < 2 {
        return Err(Error::FamilyMinimum {
            family: "complete",
            min: 2,
            n,
        });
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push(vec![u, v]);
        }
    }
    let graph = build_graph(n, 2, &edges)?;
    let couplings: Vec<f64> = (0..graph.n_edges())
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    ProblemHamiltonian::with_couplings(graph, couplings)
}

/// Detection-fraction protocol over an ensemble of random +-1 complete-graph
/// Hamiltonians, probed with the two-term X/Z witness on the full n-tuple at
/// circuit depth 1. Reports per-Hamiltonian fractions and their summary.
pub fn random_coupling_protocol(
    n: usize,
    n_hams: usize,
    samples_per_ham: usize,
    rng_seed: u64,
) -> Result<EnsembleSummary> {
    if n_hams == 0 {
        return Err(Error::EmptyInput { what: "hamiltonians" });
    }
    let graph = crate::pauli::GeneralizedGraph::full_tuple(n)?;
    let spec = WitnessSpec::w_pq(graph, Pauli::X, Pauli::Z)?;
    let per_ham: Vec<f64> = (0..n_hams)
        .map(|h| {
            let ham_seed = derive_seed(rng_seed, h as u64);
            let hamiltonian = random_z2_hamiltonian(n, ham_seed)?;
            let est = potency_qaoa(&spec, &hamiltonian, 1, samples_per_ham, derive_seed(ham_seed, 1))?;
            Ok(est.fraction)
        })
        .collect::<Result<_>>()?;
    let mean = per_ham.iter().sum::<f64>() / n_hams as f64;
    let max = per_ham.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = per_ham.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(EnsembleSummary {
        n,
        n_hams,
        samples_per_ham,
        mean,
        max,
        min,
        per_ham,
        seed: rng_seed,
    })
}
