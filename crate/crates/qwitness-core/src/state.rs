//! Dense statevector engine: QAOA evolution, special-state constructors,
//! expectation values, and the depolarizing-noise expectation model.
//!
//! Little-endian convention: qubit `q` is bit `q` of a basis-state index.

use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{build_graph, GeneralizedGraph, Observable};
use crate::rng::substream;

/// Largest qubit count the dense engine accepts by default.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Dimension above which elementwise loops switch to parallel iteration.
const PAR_THRESHOLD: usize = 1 << 14;

/// Normalized pure state on `n` qubits as 2^n complex amplitudes.
#[derive(Clone, Debug)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes, normalizing them; errors on a zero vector.
    pub fn from_amplitudes(n_qubits: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "expected {} amplitudes for {} qubits, got {}",
                1usize << n_qubits,
                n_qubits,
                amps.len()
            )));
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidArgument(
                "amplitudes must have positive finite norm".into(),
            ));
        }
        let inv = 1.0 / norm2.sqrt();
        for a in &mut amps {
            *a *= inv;
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// |+>^N, the uniform superposition.
    pub fn uniform_plus(n_qubits: usize) -> Result<Self> {
        check_cap(n_qubits, DEFAULT_QUBIT_CAP)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(StateVector {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Computational-basis probability of the bitstring with index `x`.
    pub fn probability(&self, x: usize) -> f64 {
        self.amps[x].norm_sqr()
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput { what: "qubits" });
    }
    if n > cap {
        return Err(Error::QubitCapExceeded { n, cap });
    }
    Ok(())
}

/// QAOA layer angles; `gammas` drive the cost phase, `betas` the mixer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() || gammas.len() != betas.len() {
            return Err(Error::InvalidArgument(format!(
                "need p >= 1 with equal angle counts, got {} gammas and {} betas",
                gammas.len(),
                betas.len()
            )));
        }
        Ok(QaoaParams { gammas, betas })
    }

    pub fn single(gamma: f64, beta: f64) -> Self {
        QaoaParams {
            gammas: vec![gamma],
            betas: vec![beta],
        }
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }
}

/// Ising cost function sum_e J_e Z_i Z_j over a k = 2 graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemHamiltonian {
    graph: GeneralizedGraph,
    couplings: Vec<f64>,
}

impl ProblemHamiltonian {
    /// Plain MaxCut: every coupling +1.
    pub fn maxcut(graph: GeneralizedGraph) -> Result<Self> {
        let couplings = vec![1.0; graph.n_edges()];
        Self::with_couplings(graph, couplings)
    }

    pub fn with_couplings(graph: GeneralizedGraph, couplings: Vec<f64>) -> Result<Self> {
        if graph.k() != 2 {
            return Err(Error::InvalidArgument(format!(
                "problem Hamiltonian needs a k=2 graph, got k={}",
                graph.k()
            )));
        }
        if couplings.len() != graph.n_edges() {
            return Err(Error::LengthMismatch {
                expected: graph.n_edges(),
                got: couplings.len(),
            });
        }
        Ok(ProblemHamiltonian { graph, couplings })
    }

    pub fn graph(&self) -> &GeneralizedGraph {
        &self.graph
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_nodes()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: HamiltonianDoc = serde_json::from_str(s)?;
        let graph = build_graph(doc.n, 2, &doc.edges)?;
        let couplings = match doc.couplings {
            Some(c) => c,
            None => vec![1.0; graph.n_edges()],
        };
        Self::with_couplings(graph, couplings)
    }

    pub fn to_json_string(&self) -> String {
        let doc = HamiltonianDoc {
            n: self.graph.n_nodes(),
            edges: self.graph.edges().to_vec(),
            couplings: Some(self.couplings.clone()),
        };
        serde_json::to_string_pretty(&doc).expect("hamiltonian serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Cost value c(x) for every basis state x.
    fn cost_table(&self) -> Vec<f64> {
        let dim = 1usize << self.graph.n_nodes();
        let edges: Vec<(usize, usize, f64)> = self
            .graph
            .edges()
            .iter()
            .zip(&self.couplings)
            .map(|(e, &j)| (e[0], e[1], j))
            .collect();
        let fill = |x: usize| -> f64 {
            let mut c = 0.0;
            for &(u, v, j) in &edges {
                let parity = ((x >> u) ^ (x >> v)) & 1;
                c += j * (1.0 - 2.0 * parity as f64);
            }
            c
        };
        if dim >= PAR_THRESHOLD {
            (0..dim).into_par_iter().map(fill).collect()
        } else {
            (0..dim).map(fill).collect()
        }
    }
}

/// JSON form: {"n", "edges", "couplings"?} (couplings default to all +1).
#[derive(Serialize, Deserialize)]
struct HamiltonianDoc {
    n: usize,
    edges: Vec<Vec<usize>>,
    #[serde(default)]
    couplings: Option<Vec<f64>>,
}

/// Per-qubit Bloch angles for a product state
/// ⊗_j (cos(θ_j/2)|0> + e^{iφ_j} sin(θ_j/2)|1>).
#[derive(Clone, Debug, PartialEq)]
pub struct ProductStateParams {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
}

impl ProductStateParams {
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || thetas.len() != phis.len() {
            return Err(Error::InvalidArgument(format!(
                "need one (theta, phi) pair per qubit, got {} and {}",
                thetas.len(),
                phis.len()
            )));
        }
        Ok(ProductStateParams { thetas, phis })
    }

    pub fn n_qubits(&self) -> usize {
        self.thetas.len()
    }
}

/// Trigonometric parametrization of a dense pure state on n qubits:
/// probabilities p_i = sin^2(θ_{i-1}) prod_{j>=i} cos^2(θ_j) with θ_0 = π/2
/// fixed, plus one relative phase per amplitude beyond the first.
/// Both vectors have length 2^n − 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DensePureParams {
    pub thetas: Vec<f64>,
    pub phases: Vec<f64>,
}

impl DensePureParams {
    pub fn new(thetas: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        if thetas.len() != phases.len() {
            return Err(Error::LengthMismatch {
                expected: thetas.len(),
                got: phases.len(),
            });
        }
        if thetas.is_empty() || (thetas.len() + 1).count_ones() != 1 {
            return Err(Error::InvalidArgument(format!(
                "parameter count must be 2^n - 1, got {}",
                thetas.len()
            )));
        }
        Ok(DensePureParams { thetas, phases })
    }

    pub fn n_qubits(&self) -> usize {
        (self.thetas.len() + 1).trailing_zeros() as usize
    }

    /// Uniformly random parameters for an n-qubit block.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        let len = (1usize << n) - 1;
        let thetas = (0..len)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let phases = (0..len)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        DensePureParams { thetas, phases }
    }
}

/// Applies the p-layer QAOA circuit for `h` to |+>^N.
pub fn qaoa_state(h: &ProblemHamiltonian, params: &QaoaParams) -> Result<StateVector> {
    let n = h.n_qubits();
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    if params.gammas.is_empty() || params.gammas.len() != params.betas.len() {
        return Err(Error::InvalidArgument(
            "QAOA parameters need p >= 1 with equal angle counts".into(),
        ));
    }
    let cost = h.cost_table();
    let mut state = StateVector::uniform_plus(n)?;
    for (&gamma, &beta) in params.gammas.iter().zip(&params.betas) {
        apply_cost_phase(&mut state.amps, &cost, gamma);
        apply_mixer(&mut state.amps, n, beta);
    }
    Ok(state)
}

fn apply_cost_phase(amps: &mut [Complex64], cost: &[f64], gamma: f64) {
    let apply = |(a, &c): (&mut Complex64, &f64)| {
        *a *= Complex64::from_polar(1.0, -gamma * c);
    };
    if amps.len() >= PAR_THRESHOLD {
        amps.par_iter_mut().zip(cost.par_iter()).for_each(apply);
    } else {
        amps.iter_mut().zip(cost.iter()).for_each(apply);
    }
}

/// e^{-iβ X} on every qubit: the 2x2 butterfly [[cos β, -i sin β], [-i sin β, cos β]].
fn apply_mixer(amps: &mut [Complex64], n: usize, beta: f64) {
    let c = Complex64::new(beta.cos(), 0.0);
    let s = Complex64::new(0.0, -beta.sin());
    for q in 0..n {
        let step = 1usize << q;
        let block = step << 1;
        let butterfly = |chunk: &mut [Complex64]| {
            for off in 0..step {
                let a = chunk[off];
                let b = chunk[off + step];
                chunk[off] = c * a + s * b;
                chunk[off + step] = s * a + c * b;
            }
        };
        if amps.len() >= PAR_THRESHOLD {
            amps.par_chunks_mut(block).for_each(butterfly);
        } else {
            amps.chunks_mut(block).for_each(butterfly);
        }
    }
}

/// GHZ-family state (X_flips)(|0…0> + sign·|1…1>)/√2.
pub fn ghz_state(n: usize, flips: &[usize], relative_sign: i8) -> Result<StateVector> {
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    if relative_sign != 1 && relative_sign != -1 {
        return Err(Error::InvalidArgument(format!(
            "relative sign must be +1 or -1, got {relative_sign}"
        )));
    }
    let mut a = 0usize;
    for &q in flips {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, n });
        }
        a ^= 1 << q;
    }
    let b = a ^ ((1usize << n) - 1);
    let mut amps = vec![Complex64::ZERO; 1 << n];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    amps[a] = Complex64::new(r, 0.0);
    amps[b] += Complex64::new(relative_sign as f64 * r, 0.0);
    StateVector::from_amplitudes(n, amps)
}

/// Product state from per-qubit Bloch angles.
pub fn product_state(params: &ProductStateParams) -> Result<StateVector> {
    let n = params.n_qubits();
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for q in 0..n {
        let half = params.thetas[q] / 2.0;
        let a0 = Complex64::new(half.cos(), 0.0);
        let a1 = Complex64::from_polar(half.sin(), params.phis[q]);
        let mut next = vec![Complex64::ZERO; amps.len() * 2];
        for (x, &amp) in amps.iter().enumerate() {
            next[x] = amp * a0;
            next[x + amps.len()] = amp * a1;
        }
        amps = next;
    }
    StateVector::from_amplitudes(n, amps)
}

/// Dense pure state from the trigonometric probability parametrization with
/// per-amplitude phases (first amplitude fixed real).
pub fn dense_pure_state(params: &DensePureParams) -> Result<StateVector> {
    let n = params.n_qubits();
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    let dim = 1usize << n;
    // suffix[i] = prod_{j >= i, j <= dim-1} cos^2(θ_j) over the free angles
    // θ_1..θ_{dim-1}; θ_0 = π/2 contributes sin^2 = 1 to p_0.
    let mut suffix = vec![1.0f64; dim + 1];
    for j in (1..dim).rev() {
        let c = params.thetas[j - 1].cos();
        suffix[j] = suffix[j + 1] * c * c;
    }
    let mut amps = Vec::with_capacity(dim);
    for i in 0..dim {
        let sin2 = if i == 0 {
            1.0
        } else {
            let s = params.thetas[i - 1].sin();
            s * s
        };
        let p = sin2 * suffix[i + 1];
        let phase = if i == 0 { 0.0 } else { params.phases[i - 1] };
        amps.push(Complex64::from_polar(p.max(0.0).sqrt(), phase));
    }
    StateVector::from_amplitudes(n, amps)
}

/// Tensor product of independent dense-pure blocks placed on the given
/// qubit partition; blocks must be disjoint and cover [0, N).
pub fn ksep_state(partition: &[Vec<usize>], block_params: &[DensePureParams]) -> Result<StateVector> {
    let n = validate_partition(partition)?;
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    if block_params.len() != partition.len() {
        return Err(Error::InvalidPartition(format!(
            "{} blocks but {} parameter sets",
            partition.len(),
            block_params.len()
        )));
    }
    let mut blocks = Vec::with_capacity(partition.len());
    for (qubits, params) in partition.iter().zip(block_params) {
        if params.n_qubits() != qubits.len() {
            return Err(Error::InvalidPartition(format!(
                "block {:?} has {} qubits but parameters describe {}",
                qubits,
                qubits.len(),
                params.n_qubits()
            )));
        }
        blocks.push(dense_pure_state(params)?);
    }
    let dim = 1usize << n;
    let mut amps = Vec::with_capacity(dim);
    for x in 0..dim {
        let mut a = Complex64::new(1.0, 0.0);
        for (qubits, block) in partition.iter().zip(&blocks) {
            let mut local = 0usize;
            for (t, &q) in qubits.iter().enumerate() {
                local |= ((x >> q) & 1) << t;
            }
            a *= block.amps[local];
        }
        amps.push(a);
    }
    StateVector::from_amplitudes(n, amps)
}

/// Checks blocks are nonempty, disjoint, and cover [0, N); returns N.
pub fn validate_partition(partition: &[Vec<usize>]) -> Result<usize> {
    if partition.is_empty() {
        return Err(Error::InvalidPartition("no blocks".into()));
    }
    let n: usize = partition.iter().map(|b| b.len()).sum();
    let mut seen = vec![false; n];
    for block in partition {
        if block.is_empty() {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        for &q in block {
            if q >= n {
                return Err(Error::InvalidPartition(format!(
                    "qubit {q} out of range for {n} qubits"
                )));
            }
            if seen[q] {
                return Err(Error::InvalidPartition(format!("qubit {q} repeated")));
            }
            seen[q] = true;
        }
    }
    Ok(n)
}

/// Haar-random pure state via a normalized complex Gaussian vector.
pub fn haar_random(n: usize, rng_seed: u64) -> Result<StateVector> {
    haar_random_with_rng(n, &mut substream(rng_seed, 0))
}

/// Haar sampling from a caller-owned RNG (for substream-parallel loops).
pub fn haar_random_with_rng(n: usize, rng: &mut impl Rng) -> Result<StateVector> {
    check_cap(n, DEFAULT_QUBIT_CAP)?;
    let dim = 1usize << n;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::from_amplitudes(n, amps)
}

/// <ψ|P|ψ> for one Pauli string, as a complex number (sanity residue kept).
fn pauli_expectation(string_masks: (usize, usize, u32), amps: &[Complex64]) -> Complex64 {
    let (flip, phase, n_y) = string_masks;
    let i_pow = match n_y % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let body = |x: usize| -> Complex64 {
        let sign = if ((x & phase).count_ones() & 1) == 1 {
            -1.0
        } else {
            1.0
        };
        amps[x ^ flip].conj() * amps[x] * sign
    };
    let sum: Complex64 = if amps.len() >= PAR_THRESHOLD {
        (0..amps.len()).into_par_iter().map(body).sum()
    } else {
        (0..amps.len()).map(body).sum()
    };
    i_pow * sum
}

/// Real expectation value <ψ|W|ψ>.
pub fn expectation(obs: &Observable, state: &StateVector) -> Result<f64> {
    if obs.n_qubits() != state.n_qubits {
        return Err(Error::DimensionMismatch {
            observable: obs.n_qubits(),
            state: state.n_qubits,
        });
    }
    let mut total = Complex64::ZERO;
    for (coeff, string) in obs.terms() {
        total += coeff * pauli_expectation(string.masks(), &state.amps);
    }
    assert!(
        total.im.abs() < 1e-10,
        "imaginary residue {} on a Hermitian observable",
        total.im
    );
    Ok(total.re)
}

/// Expectation under global depolarizing noise:
/// (1-p)<W> + p Tr(W)/2^N.
pub fn depolarized_expectation(obs: &Observable, state: &StateVector, p_noise: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_noise) {
        return Err(Error::InvalidArgument(format!(
            "p_noise must lie in [0, 1], got {p_noise}"
        )));
    }
    let pure = expectation(obs, state)?;
    let dim = (1u64 << obs.n_qubits()) as f64;
    Ok((1.0 - p_noise) * pure + p_noise * obs.trace() / dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{bell_observable, w_pq, w_xyz, Pauli, PauliString};
    use approx::assert_abs_diff_eq;

    fn ring_h(n: usize) -> ProblemHamiltonian {
        ProblemHamiltonian::maxcut(GeneralizedGraph::ring(n).unwrap()).unwrap()
    }

    #[test]
    fn zero_angles_give_uniform_superposition() {
        let s = qaoa_state(&ring_h(4), &QaoaParams::single(0.0, 0.0)).unwrap();
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, 0.25, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ring_maximum_matches_closed_form() {
        let s = qaoa_state(
            &ring_h(4),
            &QaoaParams::single(std::f64::consts::PI / 16.0, std::f64::consts::PI / 8.0),
        )
        .unwrap();
        let w = w_pq(&GeneralizedGraph::ring(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let per_edge = expectation(&w, &s).unwrap() / 4.0;
        assert_abs_diff_eq!(per_edge, (1.0 + std::f64::consts::SQRT_2) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn plus_state_saturates_separable_value() {
        let s = StateVector::uniform_plus(5).unwrap();
        let g = GeneralizedGraph::line(5).unwrap();
        let w = w_pq(&g, Pauli::X, Pauli::Z).unwrap();
        assert_abs_diff_eq!(expectation(&w, &s).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_state_reaches_two() {
        let bell = ghz_state(2, &[], 1).unwrap();
        let mut xx_zz = Observable::new(2);
        xx_zz
            .push_term(1.0, PauliString::new(vec![Pauli::X, Pauli::X]))
            .unwrap();
        xx_zz
            .push_term(1.0, PauliString::new(vec![Pauli::Z, Pauli::Z]))
            .unwrap();
        assert_abs_diff_eq!(expectation(&xx_zz, &bell).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            expectation(&bell_observable(), &bell).unwrap(),
            2.0 * std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ghz_xyz_values() {
        let g4 = GeneralizedGraph::full_tuple(4).unwrap();
        let w4 = w_xyz(&g4).unwrap();
        let ghz4 = ghz_state(4, &[], 1).unwrap();
        assert_abs_diff_eq!(expectation(&w4, &ghz4).unwrap(), 3.0, epsilon = 1e-12);

        let g6 = GeneralizedGraph::full_tuple(6).unwrap();
        let w6 = w_xyz(&g6).unwrap();
        let flipped = ghz_state(6, &[5], -1).unwrap();
        assert_abs_diff_eq!(expectation(&w6, &flipped).unwrap(), -3.0, epsilon = 1e-12);
    }

    #[test]
    fn qaoa_z2_symmetry() {
        let s = qaoa_state(&ring_h(5), &QaoaParams::single(0.37, 1.1)).unwrap();
        let dim = s.dim();
        for x in 0..dim {
            let d = s.amplitudes()[x] - s.amplitudes()[dim - 1 - x];
            assert!(d.norm() < 1e-12);
        }
    }

    #[test]
    fn product_state_plus() {
        let n = 3;
        let params = ProductStateParams::new(
            vec![std::f64::consts::FRAC_PI_2; n],
            vec![0.0; n],
        )
        .unwrap();
        let s = product_state(&params).unwrap();
        for a in s.amplitudes() {
            assert_abs_diff_eq!(a.re, 1.0 / (8.0f64).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn dense_pure_zero_angles_is_ground_state() {
        let params = DensePureParams::new(vec![0.0; 7], vec![0.0; 7]).unwrap();
        let s = dense_pure_state(&params).unwrap();
        assert_abs_diff_eq!(s.probability(0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dense_pure_probabilities_sum_to_one() {
        let mut rng = substream(11, 0);
        let params = DensePureParams::random(3, &mut rng);
        let s = dense_pure_state(&params).unwrap();
        let total: f64 = (0..s.dim()).map(|x| s.probability(x)).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ksep_state_is_block_product() {
        let mut rng = substream(3, 0);
        let pa = DensePureParams::random(2, &mut rng);
        let pb = DensePureParams::random(1, &mut rng);
        // Non-contiguous block layout exercises the bit gathering.
        let s = ksep_state(&[vec![0, 2], vec![1]], &[pa.clone(), pb.clone()]).unwrap();
        let a = dense_pure_state(&pa).unwrap();
        let b = dense_pure_state(&pb).unwrap();
        for x in 0..8usize {
            let local_a = (x & 1) | ((x >> 1) & 2);
            let local_b = (x >> 1) & 1;
            let expected = a.amplitudes()[local_a] * b.amplitudes()[local_b];
            assert!((s.amplitudes()[x] - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn partition_validation() {
        assert!(validate_partition(&[vec![0, 1], vec![2]]).is_ok());
        assert!(validate_partition(&[vec![0, 0]]).is_err());
        assert!(validate_partition(&[vec![0], vec![2]]).is_err());
        assert!(validate_partition(&[]).is_err());
    }

    #[test]
    fn haar_random_is_seeded_and_normalized() {
        let a = haar_random(4, 9).unwrap();
        let b = haar_random(4, 9).unwrap();
        let c = haar_random(4, 10).unwrap();
        let norm: f64 = a.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert_ne!(a.amplitudes(), c.amplitudes());
    }

    #[test]
    fn depolarizing_scales_traceless_witness() {
        let s = qaoa_state(
            &ring_h(4),
            &QaoaParams::single(std::f64::consts::PI / 16.0, std::f64::consts::PI / 8.0),
        )
        .unwrap();
        let w = w_pq(&GeneralizedGraph::ring(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let clean = expectation(&w, &s).unwrap();
        let half = depolarized_expectation(&w, &s, 0.5).unwrap();
        assert_abs_diff_eq!(half, clean / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            depolarized_expectation(&w, &s, 1.0).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(half / 4.0, (1.0 + std::f64::consts::SQRT_2) / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_observable_expectation_is_one() {
        let mut id = Observable::new(3);
        id.push_term(1.0, PauliString::identity(3)).unwrap();
        let s = haar_random(3, 42).unwrap();
        assert_abs_diff_eq!(expectation(&id, &s).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn qubit_cap_enforced() {
        let g = GeneralizedGraph::line(2).unwrap();
        let h = ProblemHamiltonian::maxcut(g).unwrap();
        assert!(qaoa_state(&h, &QaoaParams::single(0.1, 0.2)).is_ok());
        assert!(matches!(
            StateVector::uniform_plus(25),
            Err(Error::QubitCapExceeded { .. })
        ));
    }

    #[test]
    fn hamiltonian_json_round_trip() {
        let h = ring_h(4);
        let s = h.to_json_string();
        let back = ProblemHamiltonian::from_json_str(&s).unwrap();
        assert_eq!(h, back);
        let defaulted =
            ProblemHamiltonian::from_json_str(r#"{"n": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
        assert_eq!(defaulted.couplings(), &[1.0, 1.0]);
    }
}
