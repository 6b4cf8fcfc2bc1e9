//! Three-basis measurement datasets: simulation, single-qubit state
//! reconstruction, witness estimation from counts, and depolarizing-noise
//! fitting.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    coherence, fidelity_qaoa, max_classical_fidelity, sqrdm_qaoa, BlochVector, DensityMatrix2,
    CHAIN_INTERCEPT_REF, CHAIN_SLOPE_REF,
};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, WitnessSpec};
use crate::rng::substream;
use crate::state::StateVector;

const BASES: [&str; 3] = ["X", "Y", "Z"];

/// Counted measurement outcomes in the X, Y, and Z product bases.
///
/// Bitstring character `i` is the outcome of qubit `i`; `'0'` is the +1
/// eigenvalue of the basis operator.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementDataset {
    n_qubits: usize,
    bases: BTreeMap<String, BTreeMap<String, u64>>,
    meta: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct DatasetDoc {
    n_qubits: usize,
    bases: BTreeMap<String, BTreeMap<String, u64>>,
    #[serde(default)]
    meta: serde_json::Value,
}

impl MeasurementDataset {
    pub fn new(
        n_qubits: usize,
        bases: BTreeMap<String, BTreeMap<String, u64>>,
        meta: serde_json::Value,
    ) -> Result<Self> {
        let ds = MeasurementDataset {
            n_qubits,
            bases,
            meta,
        };
        ds.validate()?;
        Ok(ds)
    }

    fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::EmptyInput { what: "qubits" });
        }
        for basis in BASES {
            let counts = self
                .bases
                .get(basis)
                .ok_or(Error::MissingBasis { basis })?;
            let mut total = 0u64;
            for (bitstring, &count) in counts {
                if bitstring.len() != self.n_qubits
                    || !bitstring.bytes().all(|b| b == b'0' || b == b'1')
                {
                    return Err(Error::MalformedBitstring {
                        bitstring: bitstring.clone(),
                        n: self.n_qubits,
                    });
                }
                total += count;
            }
            if total == 0 {
                return Err(Error::ZeroShots { basis });
            }
        }
        for key in self.bases.keys() {
            if !BASES.contains(&key.as_str()) {
                return Err(Error::UnknownBasis { label: key.clone() });
            }
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn meta(&self) -> &serde_json::Value {
        &self.meta
    }

    pub fn basis_counts(&self, basis: &str) -> Result<&BTreeMap<String, u64>> {
        self.bases.get(basis).ok_or(Error::UnknownBasis {
            label: basis.to_string(),
        })
    }

    pub fn total_shots(&self, basis: &str) -> Result<u64> {
        Ok(self.basis_counts(basis)?.values().sum())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: DatasetDoc = serde_json::from_str(text)?;
        MeasurementDataset::new(doc.n_qubits, doc.bases, doc.meta)
    }

    pub fn to_json_string(&self) -> Result<String> {
        let doc = DatasetDoc {
            n_qubits: self.n_qubits,
            bases: self.bases.clone(),
            meta: self.meta.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        MeasurementDataset::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_json_string()?)?)
    }
}

/// Load a shots file (see `MeasurementDataset` for the layout).
pub fn load_shots(path: &Path) -> Result<MeasurementDataset> {
    MeasurementDataset::load(path)
}

/// Save a shots file.
pub fn save_shots(ds: &MeasurementDataset, path: &Path) -> Result<()> {
    ds.save(path)
}

/// Unnormalized in-place Walsh-Hadamard butterfly, then 2^{-n/2} scaling:
/// the amplitude map of H on every qubit.
fn hadamard_all(amps: &mut [Complex64]) {
    let dim = amps.len();
    let mut h = 1;
    while h < dim {
        for chunk in amps.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for i in 0..h {
                let a = lo[i];
                let b = hi[i];
                lo[i] = a + b;
                hi[i] = a - b;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / (dim as f64).sqrt();
    for a in amps.iter_mut() {
        *a *= scale;
    }
}

fn neg_i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

fn basis_probabilities(state: &StateVector, basis: &str) -> Vec<f64> {
    let mut amps: Vec<Complex64> = state.amplitudes().to_vec();
    match basis {
        "Z" => {}
        "X" => hadamard_all(&mut amps),
        "Y" => {
            // Rotate |+i> -> |0> on every qubit: S-dagger then H.
            for (x, a) in amps.iter_mut().enumerate() {
                *a *= neg_i_pow(x.count_ones());
            }
            hadamard_all(&mut amps);
        }
        _ => unreachable!("internal basis labels"),
    }
    amps.iter().map(|a| a.norm_sqr()).collect()
}

fn bitstring(x: usize, n: usize) -> String {
    (0..n)
        .map(|i| if (x >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Sample `shots_per_basis` outcomes in each of the three product bases.
/// Global depolarizing noise of strength `p_noise` replaces a shot with a
/// uniform bitstring with probability `p_noise`. Deterministic in the seed:
/// each basis consumes its own stream.
pub fn simulate_shots(
    state: &StateVector,
    shots_per_basis: u64,
    p_noise: f64,
    rng_seed: u64,
) -> Result<MeasurementDataset> {
    if shots_per_basis == 0 {
        return Err(Error::EmptyInput { what: "shots" });
    }
    if !(0.0..=1.0).contains(&p_noise) {
        return Err(Error::InvalidArgument(format!(
            "noise probability must lie in [0, 1], got {p_noise}"
        )));
    }
    let n = state.n_qubits();
    let dim = state.dim();
    let mut bases = BTreeMap::new();
    for (b, basis) in BASES.iter().enumerate() {
        let probs = basis_probabilities(state, basis);
        let mut cumulative = Vec::with_capacity(dim);
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        let mut rng = substream(rng_seed, b as u64);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..shots_per_basis {
            let x = if rng.random::<f64>() < p_noise {
                rng.random_range(0..dim)
            } else {
                let u = rng.random::<f64>() * acc;
                cumulative.partition_point(|&c| c <= u).min(dim - 1)
            };
            *counts.entry(bitstring(x, n)).or_insert(0) += 1;
        }
        bases.insert(basis.to_string(), counts);
    }
    MeasurementDataset::new(
        n,
        bases,
        serde_json::json!({
            "shots_per_basis": shots_per_basis,
            "p_noise": p_noise,
            "seed": rng_seed,
        }),
    )
}

/// Raw Bloch vector of one qubit: the empirical means of X, Y, Z outcomes.
pub fn estimate_bloch(ds: &MeasurementDataset, qubit: usize) -> Result<BlochVector> {
    let n = ds.n_qubits();
    if qubit >= n {
        return Err(Error::IndexOutOfRange { index: qubit, n });
    }
    let mut components = [0.0f64; 3];
    for (b, basis) in BASES.iter().enumerate() {
        let counts = ds.basis_counts(basis)?;
        let mut total = 0u64;
        let mut sum = 0i64;
        for (bits, &count) in counts {
            total += count;
            if bits.as_bytes()[qubit] == b'0' {
                sum += count as i64;
            } else {
                sum -= count as i64;
            }
        }
        components[b] = sum as f64 / total as f64;
    }
    Ok(BlochVector {
        x: components[0],
        y: components[1],
        z: components[2],
    })
}

/// Nearest physical single-qubit state to a raw Bloch estimate: vectors
/// outside the Bloch ball are radially rescaled onto its surface, which is
/// the maximum-likelihood projection for Gaussian component errors.
pub fn mle_project(raw: &BlochVector) -> DensityMatrix2 {
    let r = raw.norm();
    if r <= 1.0 {
        DensityMatrix2::from_bloch(raw.x, raw.y, raw.z)
    } else {
        DensityMatrix2::from_bloch(raw.x / r, raw.y / r, raw.z / r)
    }
}

/// Reconstruction summary of one qubit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QubitReport {
    pub qubit: usize,
    pub degree: usize,
    pub raw_bloch: BlochVector,
    pub raw_norm: f64,
    pub rho: DensityMatrix2,
    pub coherence: f64,
    pub ideal_coherence: f64,
    pub fidelity: f64,
    pub max_classical_fidelity: f64,
    pub quantum_margin: f64,
}

/// Per-qubit reconstruction against the ideal depth-1 reduced states.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub n_qubits: usize,
    pub gamma: f64,
    pub qubits: Vec<QubitReport>,
    pub max_coherence: f64,
    pub max_coherence_qubit: usize,
}

/// Reconstructs every qubit from three-basis counts and compares with the
/// ideal depth-1 reduced state of a qubit of the given degree at angle
/// `gamma`. `degrees[q]` is the graph degree of qubit q.
pub fn coherence_report(
    ds: &MeasurementDataset,
    degrees: &[usize],
    gamma: f64,
) -> Result<CoherenceReport> {
    let n = ds.n_qubits();
    if degrees.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: degrees.len(),
        });
    }
    let mut qubits = Vec::with_capacity(n);
    for q in 0..n {
        let raw = estimate_bloch(ds, q)?;
        let rho = mle_project(&raw);
        let projected = BlochVector {
            x: 2.0 * rho.rho21.re,
            y: 2.0 * rho.rho21.im,
            z: (rho.rho11 - rho.rho22).re,
        };
        let d = degrees[q];
        let fidelity = fidelity_qaoa(d, gamma, &projected)?;
        let classical = max_classical_fidelity(d, gamma);
        qubits.push(QubitReport {
            qubit: q,
            degree: d,
            raw_norm: raw.norm(),
            raw_bloch: raw,
            coherence: coherence(&rho),
            ideal_coherence: coherence(&sqrdm_qaoa(d, gamma)),
            fidelity,
            max_classical_fidelity: classical,
            quantum_margin: fidelity - classical,
            rho,
        });
    }
    let mut best = 0usize;
    for q in 1..n {
        if qubits[q].coherence > qubits[best].coherence {
            best = q;
        }
    }
    Ok(CoherenceReport {
        n_qubits: n,
        gamma,
        max_coherence: qubits[best].coherence,
        max_coherence_qubit: best,
        qubits,
    })
}

/// Witness estimate (value, standard error) from basis counts. Every active
/// term must be measurable in one product basis, i.e. use a single letter.
/// Standard errors of the per-term per-edge parities are propagated as
/// independent.
pub fn witness_expectation_from_shots(
    ds: &MeasurementDataset,
    spec: &WitnessSpec,
) -> Result<(f64, f64)> {
    if spec.graph.n_nodes() != ds.n_qubits() {
        return Err(Error::LengthMismatch {
            expected: spec.graph.n_nodes(),
            got: ds.n_qubits(),
        });
    }
    let mut value = 0.0;
    let mut variance = 0.0;
    for (t, term) in spec.terms.iter().enumerate() {
        if term.alpha == 0 {
            continue;
        }
        let letter = term.letters[0];
        if term.letters.iter().any(|&l| l != letter) {
            return Err(Error::MixedBasisTerm { term: t });
        }
        let basis = match letter {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
            Pauli::I => return Err(Error::MixedBasisTerm { term: t }),
        };
        let counts = ds.basis_counts(basis)?;
        let total: u64 = counts.values().sum();
        for edge in spec.graph.edges() {
            let mut sum = 0i64;
            for (bits, &count) in counts {
                let ones = edge
                    .iter()
                    .filter(|&&q| bits.as_bytes()[q] == b'1')
                    .count();
                if ones % 2 == 0 {
                    sum += count as i64;
                } else {
                    sum -= count as i64;
                }
            }
            let v = sum as f64 / total as f64;
            value += v;
            variance += (1.0 - v * v).max(0.0) / total as f64;
        }
    }
    Ok((value, variance.sqrt()))
}

/// Result of fitting a global depolarizing strength to observed
/// expectations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoiseFit {
    pub p_noise: f64,
    pub residual_rms: f64,
    pub n_points: usize,
    pub critical_threshold: f64,
}

/// Depolarizing strength above which a chain witness of n qubits can no
/// longer violate its separable bound: 1 - bound / lambda_max, with the
/// reference linear scaling of the chain maximum for n >= 3.
pub fn critical_threshold(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::FamilyMinimum {
            family: "line",
            min: 2,
            n,
        });
    }
    if n == 2 {
        return Ok(0.5);
    }
    Ok(1.0 - (n as f64 - 1.0) / (CHAIN_SLOPE_REF * n as f64 + CHAIN_INTERCEPT_REF))
}

/// Least-squares depolarizing strength from observed versus ideal
/// expectations of traceless observables: observed = (1 - p) ideal, fit
/// through the origin, p clamped to [0, 1].
pub fn fit_depolarizing(observed: &[f64], ideal: &[f64], n_qubits: usize) -> Result<NoiseFit> {
    if observed.len() != ideal.len() {
        return Err(Error::LengthMismatch {
            expected: ideal.len(),
            got: observed.len(),
        });
    }
    if observed.len() < 2 {
        return Err(Error::TooFewPoints {
            min: 2,
            got: observed.len(),
        });
    }
    let denom: f64 = ideal.iter().map(|m| m * m).sum();
    if denom < 1e-12 {
        return Err(Error::DegenerateFit);
    }
    let scale: f64 = observed.iter().zip(ideal).map(|(o, m)| o * m).sum::<f64>() / denom;
    let p = (1.0 - scale).clamp(0.0, 1.0);
    let kept = 1.0 - p;
    let residual_rms = (observed
        .iter()
        .zip(ideal)
        .map(|(o, m)| (o - kept * m) * (o - kept * m))
        .sum::<f64>()
        / observed.len() as f64)
        .sqrt();
    Ok(NoiseFit {
        p_noise: p,
        residual_rms,
        n_points: observed.len(),
        critical_threshold: critical_threshold(n_qubits)?,
    })
}
