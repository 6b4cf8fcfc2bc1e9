//! Separable bounds, eigenvalue bounds, k-separability optimization, and
//! witness verdicts.

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{build_witness, Observable, Pauli, PauliString, WitnessSpec};
use crate::rng::{derive_seed, substream};
use crate::state::validate_partition;

/// Largest qubit count handled by the dense eigensolver.
pub const DENSE_EIG_MAX_QUBITS: usize = 12;

/// Relative convergence target of the iterative eigensolver.
pub const ITER_EIG_REL_TOL: f64 = 1e-8;

/// Default tolerance for analytic verdicts; ties at the bound are never
/// violations.
pub const DEFAULT_VERDICT_TOL: f64 = 1e-6;

/// How an extremal eigenvalue was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigMethod {
    Exact,
    Iterative,
}

/// Bounds attached to one witness spec.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport {
    pub separable_bound: f64,
    pub weyl_upper: f64,
    pub moment_lower: Option<f64>,
    pub lambda_max: Option<f64>,
    pub method: Option<EigMethod>,
}

/// Outcome of the heuristic k-separable maximization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub k: usize,
    pub partition: Vec<Vec<usize>>,
    pub max_expectation: f64,
    pub optimizer_restarts: usize,
    pub converged: bool,
}

/// Violation flags for one measured/computed expectation value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub expectation: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub upper_violated: bool,
    pub lower_violated: bool,
    pub margin: f64,
}

/// Separable-state bound: |<W>| <= |E_k| for every fully separable state.
pub fn separable_bound(spec: &WitnessSpec) -> f64 {
    spec.graph.n_edges() as f64
}

/// Spectral upper bound M |E_k| from the term structure.
pub fn weyl_upper(spec: &WitnessSpec) -> f64 {
    (spec.n_active_terms() * spec.graph.n_edges()) as f64
}

/// Decides whether `expectation` violates the separable bounds of `spec`.
pub fn verdict(spec: &WitnessSpec, expectation: f64, tolerance: f64) -> Verdict {
    let bound = separable_bound(spec);
    Verdict {
        expectation,
        bound,
        tolerance,
        upper_violated: expectation > bound + tolerance,
        lower_violated: expectation < -bound - tolerance,
        margin: expectation - bound,
    }
}

/// Lower bound on the largest eigenvalue of a two-term uniform-letter
/// witness, from the first three moments in the uniform-superposition basis.
/// Always strictly above the separable bound (by 2^{-N}).
pub fn moment_lower_bound(spec: &WitnessSpec) -> Result<f64> {
    let active: Vec<_> = spec.active_terms().collect();
    let uniform = |letters: &[Pauli]| letters.windows(2).all(|w| w[0] == w[1]);
    if active.len() != 2
        || !uniform(&active[0].letters)
        || !uniform(&active[1].letters)
        || active[0].letters[0] == active[1].letters[0]
    {
        return Err(Error::NotWpqForm);
    }
    let e = spec.graph.n_edges() as f64;
    let n = spec.graph.n_nodes() as i32;
    // Moments per basis state of the shifted trial ensemble: N_1/m = |E|,
    // N_2/m = |E|^2 + |E|, N_3/m = |E|^3 + 3|E|^2, with lambda_0 = |E| 2^{N/2}.
    let n1 = e;
    let n2 = e * e + e;
    let n3 = e * e * e + 3.0 * e * e;
    let lambda0_sq = e * e * 2f64.powi(n);
    Ok(e + 2.0 * (n3 / 2.0 - n1 * n2 + n1 * n1 * n1 / 2.0) / lambda0_sq)
}

fn to_c64(z: Complex64) -> c64 {
    c64::new(z.re, z.im)
}

fn i_pow(n_y: u32) -> Complex64 {
    match n_y % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Dense matrix of an observable, column-major.
fn dense_matrix(obs: &Observable) -> Vec<Complex64> {
    let dim = 1usize << obs.n_qubits();
    let mut m = vec![Complex64::ZERO; dim * dim];
    for (coeff, string) in obs.terms() {
        let (flip, phase, n_y) = string.masks();
        let scale = coeff * i_pow(n_y);
        for x in 0..dim {
            let sign = if ((x & phase).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            let row = x ^ flip;
            m[x * dim + row] += scale * sign;
        }
    }
    m
}

/// Largest eigenvalue of a dense Hermitian matrix given column-major.
fn dense_max_eigenvalue(m: &[Complex64], dim: usize) -> f64 {
    let mat = Mat::<c64>::from_fn(dim, dim, |i, j| to_c64(m[j * dim + i]));
    let evd = mat.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s().column_vector();
    let mut best = f64::NEG_INFINITY;
    for i in 0..dim {
        best = best.max(s[i].re);
    }
    best
}

/// Top eigenpair (value, eigenvector) of a dense Hermitian matrix.
fn dense_top_eigenpair(m: &[Complex64], dim: usize) -> (f64, Vec<Complex64>) {
    let mat = Mat::<c64>::from_fn(dim, dim, |i, j| to_c64(m[j * dim + i]));
    let evd = mat.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s().column_vector();
    let mut best = 0usize;
    for i in 1..dim {
        if s[i].re > s[best].re {
            best = i;
        }
    }
    let u = evd.u();
    let vec = (0..dim)
        .map(|i| {
            let z = u[(i, best)];
            Complex64::new(z.re, z.im)
        })
        .collect();
    (s[best].re, vec)
}

/// out = (W + shift) v, matrix-free.
fn apply_shifted(
    terms: &[(Complex64, usize, usize)],
    shift: f64,
    v: &[Complex64],
    out: &mut [Complex64],
) {
    let dim = v.len();
    let body = |y: usize| -> Complex64 {
        let mut acc = Complex64::new(shift, 0.0) * v[y];
        for &(scale, flip, phase) in terms {
            let x = y ^ flip;
            let sign = if ((x & phase).count_ones() & 1) == 1 {
                -1.0
            } else {
                1.0
            };
            acc += scale * sign * v[x];
        }
        acc
    };
    if dim >= 1 << 14 {
        out.par_iter_mut()
            .enumerate()
            .for_each(|(y, o)| *o = body(y));
    } else {
        for (y, o) in out.iter_mut().enumerate() {
            *o = body(y);
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Matrix-free block subspace iteration on W + shift, residual-certified.
fn iterative_max_eigenvalue(obs: &Observable) -> Result<f64> {
    let n = obs.n_qubits();
    let dim = 1usize << n;
    let terms: Vec<(Complex64, usize, usize)> = obs
        .terms()
        .iter()
        .map(|(c, s)| {
            let (flip, phase, n_y) = s.masks();
            (c * i_pow(n_y), flip, phase)
        })
        .collect();
    // Spectrum of W lies in [-coeff_norm, +coeff_norm]; the shift makes the
    // operator PSD with its top eigenvalue the dominant one in magnitude.
    let shift = obs.coeff_norm() + 1.0;

    const BLOCK: usize = 4;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(BLOCK);
    // Uniform superposition already attains the separable value; noise
    // columns break symmetry deterministically.
    basis.push(vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim]);
    let mut rng = substream(0x51ee_d5ee_d5ee_d5ee, 0);
    for _ in 1..BLOCK {
        let col: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        basis.push(col);
    }
    orthonormalize(&mut basis, &mut rng);

    let mut best = f64::NEG_INFINITY;
    let mut residual = f64::INFINITY;
    let max_iters = 5000;
    let mut images: Vec<Vec<Complex64>> = vec![vec![Complex64::ZERO; dim]; BLOCK];
    for _ in 0..max_iters {
        for (col, img) in basis.iter().zip(images.iter_mut()) {
            apply_shifted(&terms, shift, col, img);
        }
        // Rayleigh-Ritz on the block.
        let mut h = vec![Complex64::ZERO; BLOCK * BLOCK];
        for i in 0..BLOCK {
            for j in 0..BLOCK {
                h[j * BLOCK + i] = dot(&basis[i], &images[j]);
            }
        }
        // Symmetrize against floating-point drift.
        for i in 0..BLOCK {
            for j in 0..i {
                let avg = 0.5 * (h[j * BLOCK + i] + h[i * BLOCK + j].conj());
                h[j * BLOCK + i] = avg;
                h[i * BLOCK + j] = avg.conj();
            }
        }
        let (theta, u) = dense_top_eigenpair(&h, BLOCK);

        // Ritz vector v = basis·u and its image A v = images·u.
        let mut v = vec![Complex64::ZERO; dim];
        let mut av = vec![Complex64::ZERO; dim];
        for (b, (col, img)) in basis.iter().zip(&images).enumerate() {
            let w = u[b];
            for y in 0..dim {
                v[y] += w * col[y];
                av[y] += w * img[y];
            }
        }
        let mut r2 = 0.0;
        for y in 0..dim {
            let d = av[y] - theta * v[y];
            r2 += d.norm_sqr();
        }
        residual = r2.sqrt();
        best = theta - shift;
        if residual <= ITER_EIG_REL_TOL * theta.abs().max(1.0) {
            return Ok(best);
        }
        std::mem::swap(&mut basis, &mut images);
        orthonormalize(&mut basis, &mut rng);
    }
    Err(Error::NonConvergence { best, residual })
}

/// Modified Gram-Schmidt; replaces degenerate columns with fresh noise.
fn orthonormalize(cols: &mut [Vec<Complex64>], rng: &mut impl Rng) {
    for i in 0..cols.len() {
        loop {
            for j in 0..i {
                let proj = dot(&cols[j], &cols[i]);
                let (head, tail) = cols.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[j]) {
                    *a -= proj * b;
                }
            }
            let nrm = norm(&cols[i]);
            if nrm > 1e-12 {
                let inv = 1.0 / nrm;
                for a in &mut cols[i] {
                    *a *= inv;
                }
                break;
            }
            for a in &mut cols[i] {
                *a = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
    }
}

/// Largest eigenvalue: exact dense solve up to 12 qubits, matrix-free
/// subspace iteration beyond (relative tolerance 1e-8, residual-checked).
pub fn max_eigenvalue(obs: &Observable) -> Result<(f64, EigMethod)> {
    let n = obs.n_qubits();
    if n == 0 {
        return Err(Error::EmptyInput { what: "observable" });
    }
    if n <= DENSE_EIG_MAX_QUBITS {
        let dim = 1usize << n;
        let m = dense_matrix(obs);
        Ok((dense_max_eigenvalue(&m, dim), EigMethod::Exact))
    } else {
        Ok((iterative_max_eigenvalue(obs)?, EigMethod::Iterative))
    }
}

/// Full bound report for a spec; the eigenvalue is skipped when
/// `compute_eigenvalue` is false (or fails to converge).
pub fn bound_report(spec: &WitnessSpec, compute_eigenvalue: bool) -> Result<BoundReport> {
    let moment = moment_lower_bound(spec).ok();
    let (lambda_max, method) = if compute_eigenvalue {
        let obs = build_witness(spec)?;
        let (v, m) = max_eigenvalue(&obs)?;
        (Some(v), Some(m))
    } else {
        (None, None)
    };
    Ok(BoundReport {
        separable_bound: separable_bound(spec),
        weyl_upper: weyl_upper(spec),
        moment_lower: moment,
        lambda_max,
        method,
    })
}

/// Structural bound on |<W>| for states separable across `partition`:
/// within-block edges count M, crossing edges count 1.
pub fn bisep_structural_bound(spec: &WitnessSpec, partition: &[Vec<usize>]) -> Result<f64> {
    if spec.graph.k() != 2 {
        return Err(Error::InvalidArgument(format!(
            "structural bound needs a k=2 spec, got k={}",
            spec.graph.k()
        )));
    }
    let n = validate_partition(partition)?;
    if n != spec.graph.n_nodes() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {n} qubits, spec has {}",
            spec.graph.n_nodes()
        )));
    }
    if partition.len() < 2 {
        return Err(Error::InvalidPartition(
            "need at least two blocks".into(),
        ));
    }
    let mut block_of = vec![0usize; n];
    for (b, block) in partition.iter().enumerate() {
        for &q in block {
            block_of[q] = b;
        }
    }
    let m = spec.n_active_terms() as f64;
    let mut bound = 0.0;
    for edge in spec.graph.edges() {
        if block_of[edge[0]] == block_of[edge[1]] {
            bound += m;
        } else {
            bound += 1.0;
        }
    }
    Ok(bound)
}

/// All partitions of {0..n} into exactly k nonempty blocks (canonical order).
fn partitions_into_k(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn recurse(
        element: usize,
        n: usize,
        k: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let remaining = n - element;
        let missing = k.saturating_sub(blocks.len());
        if remaining < missing {
            return;
        }
        if element == n {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(element);
            recurse(element + 1, n, k, blocks, out);
            blocks[b].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![element]);
            recurse(element + 1, n, k, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    recurse(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Candidate partitions when exhaustive enumeration is too large: contiguous
/// splits plus seeded random assignments.
fn heuristic_partitions(n: usize, k: usize, seed: u64, count: usize) -> Vec<Vec<Vec<usize>>> {
    let mut parts = Vec::new();
    // Balanced contiguous split.
    let mut contiguous: Vec<Vec<usize>> = vec![Vec::new(); k];
    for q in 0..n {
        contiguous[q * k / n].push(q);
    }
    parts.push(contiguous);
    let mut rng = substream(seed, u64::MAX);
    while parts.len() < count {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        // Guarantee nonempty blocks, then scatter the rest.
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            order.swap(i, j);
        }
        for (b, &q) in order.iter().take(k).enumerate() {
            blocks[b].push(q);
        }
        for &q in order.iter().skip(k) {
            blocks[rng.random_range(0..k)].push(q);
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        if !parts.contains(&blocks) {
            parts.push(blocks);
        }
    }
    parts
}

/// Restriction of a Pauli string to a qubit block, as local masks.
struct LocalTerm {
    scale: Complex64,
    flip: usize,
    phase: usize,
}

fn restrict(string: &PauliString, block: &[usize]) -> LocalTerm {
    let mut flip = 0usize;
    let mut phase = 0usize;
    let mut n_y = 0u32;
    for (t, &q) in block.iter().enumerate() {
        match string.letters()[q] {
            Pauli::I => {}
            Pauli::X => flip |= 1 << t,
            Pauli::Y => {
                flip |= 1 << t;
                phase |= 1 << t;
                n_y += 1;
            }
            Pauli::Z => phase |= 1 << t,
        }
    }
    LocalTerm {
        scale: i_pow(n_y),
        flip,
        phase,
    }
}

/// <v|P|v> for a local Pauli restriction on a small dense vector.
fn local_expectation(term: &LocalTerm, v: &[Complex64]) -> f64 {
    let mut acc = Complex64::ZERO;
    for x in 0..v.len() {
        let sign = if ((x & term.phase).count_ones() & 1) == 1 {
            -1.0
        } else {
            1.0
        };
        acc += v[x ^ term.flip].conj() * v[x] * sign;
    }
    (term.scale * acc).re
}

/// One alternating-ascent run over a fixed partition; returns (value, converged).
fn ascend_partition(
    obs: &Observable,
    partition: &[Vec<usize>],
    rng: &mut impl Rng,
) -> (f64, bool) {
    let n_blocks = partition.len();
    // Random normalized start per block.
    let mut states: Vec<Vec<Complex64>> = partition
        .iter()
        .map(|block| {
            let d = 1usize << block.len();
            let mut v: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let inv = 1.0 / norm(&v);
            for a in &mut v {
                *a *= inv;
            }
            v
        })
        .collect();

    // Per-term local restrictions, precomputed per block.
    let locals: Vec<Vec<LocalTerm>> = partition
        .iter()
        .map(|block| {
            obs.terms()
                .iter()
                .map(|(_, s)| restrict(s, block))
                .collect()
        })
        .collect();

    let mut value = f64::NEG_INFINITY;
    let mut converged = false;
    for _sweep in 0..500 {
        let mut sweep_value = value;
        for b in 0..n_blocks {
            let d = 1usize << partition[b].len();
            let mut eff = vec![Complex64::ZERO; d * d];
            for (t, (coeff, _)) in obs.terms().iter().enumerate() {
                let mut weight = *coeff;
                for other in 0..n_blocks {
                    if other != b {
                        weight *= local_expectation(&locals[other][t], &states[other]);
                    }
                }
                if weight == 0.0 {
                    continue;
                }
                let lt = &locals[b][t];
                let scale = lt.scale * weight;
                for x in 0..d {
                    let sign = if ((x & lt.phase).count_ones() & 1) == 1 {
                        -1.0
                    } else {
                        1.0
                    };
                    eff[x * d + (x ^ lt.flip)] += scale * sign;
                }
            }
            let (top, vec) = dense_top_eigenpair(&eff, d);
            states[b] = vec;
            sweep_value = top;
        }
        if (sweep_value - value).abs() <= 1e-12 * sweep_value.abs().max(1.0) {
            value = sweep_value;
            converged = true;
            break;
        }
        value = sweep_value;
    }
    (value, converged)
}

/// Best expectation over k-block product pure states, maximizing both the
/// continuous block states (alternating eigenvector ascent) and the discrete
/// partition (exhaustive for N <= 6, heuristic candidates beyond). The
/// result is a certified lower bound on the true k-separable maximum.
pub fn ksep_max(
    obs: &Observable,
    k: usize,
    restarts: usize,
    rng_seed: u64,
) -> Result<SeparabilityReport> {
    let n = obs.n_qubits();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    if k == 1 {
        let (value, _) = max_eigenvalue(obs)?;
        return Ok(SeparabilityReport {
            k,
            partition: vec![(0..n).collect()],
            max_expectation: value,
            optimizer_restarts: restarts,
            converged: true,
        });
    }
    let restarts = restarts.max(1);
    let partitions = if k == n {
        vec![(0..n).map(|q| vec![q]).collect::<Vec<_>>()]
    } else if n <= 6 {
        partitions_into_k(n, k)
    } else {
        heuristic_partitions(n, k, rng_seed, 24)
    };
    for p in &partitions {
        for block in p {
            if block.len() > DENSE_EIG_MAX_QUBITS {
                return Err(Error::QubitCapExceeded {
                    n: block.len(),
                    cap: DENSE_EIG_MAX_QUBITS,
                });
            }
        }
    }

    let runs: Vec<(usize, usize)> = (0..partitions.len())
        .flat_map(|p| (0..restarts).map(move |r| (p, r)))
        .collect();
    let results: Vec<(usize, f64, bool)> = runs
        .par_iter()
        .map(|&(p, r)| {
            let stream = (p * restarts + r) as u64;
            let mut rng = substream(derive_seed(rng_seed, 0xb10c), stream);
            let (value, converged) = ascend_partition(obs, &partitions[p], &mut rng);
            (p, value, converged)
        })
        .collect();

    let mut best = None::<(usize, f64, bool)>;
    for &(p, v, c) in &results {
        if best.as_ref().map_or(true, |&(_, bv, _)| v > bv) {
            best = Some((p, v, c));
        }
    }
    let (p, value, converged) = best.expect("at least one run");
    Ok(SeparabilityReport {
        k,
        partition: partitions[p].clone(),
        max_expectation: value,
        optimizer_restarts: restarts,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{w_pq, w_xyz, GeneralizedGraph};
    use approx::assert_abs_diff_eq;

    #[test]
    fn separable_bound_is_edge_count() {
        let line5 = WitnessSpec::w_pq(GeneralizedGraph::line(5).unwrap(), Pauli::X, Pauli::Z).unwrap();
        assert_abs_diff_eq!(separable_bound(&line5), 4.0);
        let tuple4 = WitnessSpec::w_xyz(GeneralizedGraph::full_tuple(4).unwrap()).unwrap();
        assert_abs_diff_eq!(separable_bound(&tuple4), 1.0);
        assert_abs_diff_eq!(weyl_upper(&tuple4), 3.0);
    }

    #[test]
    fn ghz_witness_eigenvalues() {
        let w4 = w_xyz(&GeneralizedGraph::full_tuple(4).unwrap()).unwrap();
        let (v, m) = max_eigenvalue(&w4).unwrap();
        assert_eq!(m, EigMethod::Exact);
        assert_abs_diff_eq!(v, 3.0, epsilon = 1e-9);

        let w3 = w_xyz(&GeneralizedGraph::full_tuple(3).unwrap()).unwrap();
        let (v, _) = max_eigenvalue(&w3).unwrap();
        assert_abs_diff_eq!(v, 3f64.sqrt(), epsilon = 1e-9);

        let w2 = w_pq(&GeneralizedGraph::line(2).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let (v, _) = max_eigenvalue(&w2).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn moment_bound_formula_and_form_check() {
        let ring4 = WitnessSpec::w_pq(GeneralizedGraph::ring(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let bound = moment_lower_bound(&ring4).unwrap();
        assert_abs_diff_eq!(bound, 4.0 + 2f64.powi(-4), epsilon = 1e-12);
        let obs = build_witness(&ring4).unwrap();
        let (lambda, _) = max_eigenvalue(&obs).unwrap();
        assert!(bound <= lambda + 1e-9);
        assert!(lambda <= weyl_upper(&ring4) + 1e-9);

        let xyz = WitnessSpec::w_xyz(GeneralizedGraph::ring(4).unwrap()).unwrap();
        assert!(matches!(moment_lower_bound(&xyz), Err(Error::NotWpqForm)));
    }

    #[test]
    fn moment_bound_invariant_under_letter_relabeling() {
        let g = GeneralizedGraph::ring(5).unwrap();
        let xz = moment_lower_bound(
            &WitnessSpec::w_pq(g.clone(), Pauli::X, Pauli::Z).unwrap(),
        )
        .unwrap();
        let xy = moment_lower_bound(
            &WitnessSpec::w_pq(g.clone(), Pauli::X, Pauli::Y).unwrap(),
        )
        .unwrap();
        let yz = moment_lower_bound(&WitnessSpec::w_pq(g, Pauli::Y, Pauli::Z).unwrap()).unwrap();
        assert_abs_diff_eq!(xz, xy, epsilon = 1e-15);
        assert_abs_diff_eq!(xz, yz, epsilon = 1e-15);
    }

    #[test]
    fn iterative_matches_dense_on_small_case() {
        let obs = w_pq(&GeneralizedGraph::ring(6).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let dim = 1usize << 6;
        let m = dense_matrix(&obs);
        let exact = dense_max_eigenvalue(&m, dim);
        let iter = iterative_max_eigenvalue(&obs).unwrap();
        assert_abs_diff_eq!(iter, exact, epsilon = 1e-6);
    }

    #[test]
    fn structural_bound_examples() {
        let pairs = build_witness_spec_pairs();
        assert_abs_diff_eq!(
            bisep_structural_bound(&pairs, &[vec![0, 1], vec![2, 3]]).unwrap(),
            4.0
        );
        let ring4 = WitnessSpec::w_pq(GeneralizedGraph::ring(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        assert_abs_diff_eq!(
            bisep_structural_bound(&ring4, &[vec![0, 1], vec![2, 3]]).unwrap(),
            6.0
        );
        let line5 = WitnessSpec::w_pq(GeneralizedGraph::line(5).unwrap(), Pauli::X, Pauli::Z).unwrap();
        assert_abs_diff_eq!(
            bisep_structural_bound(&line5, &[vec![0, 1], vec![2, 3, 4]]).unwrap(),
            7.0
        );
    }

    fn build_witness_spec_pairs() -> WitnessSpec {
        let g = crate::pauli::build_graph(4, 2, &[vec![0, 1], vec![2, 3]]).unwrap();
        WitnessSpec::w_pq(g, Pauli::X, Pauli::Z).unwrap()
    }

    #[test]
    fn verdict_rules() {
        let ring4 = WitnessSpec::w_pq(GeneralizedGraph::ring(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let v = verdict(&ring4, 4.8284, DEFAULT_VERDICT_TOL);
        assert!(v.upper_violated && !v.lower_violated);
        assert_abs_diff_eq!(v.margin, 0.8284, epsilon = 1e-12);
        // Exactly at the bound: inconclusive.
        let v = verdict(&ring4, 4.0, DEFAULT_VERDICT_TOL);
        assert!(!v.upper_violated && !v.lower_violated);
        let v = verdict(&ring4, -4.5, DEFAULT_VERDICT_TOL);
        assert!(v.lower_violated);
    }

    #[test]
    fn partitions_count_matches_stirling() {
        assert_eq!(partitions_into_k(4, 2).len(), 7);
        assert_eq!(partitions_into_k(5, 2).len(), 15);
        assert_eq!(partitions_into_k(5, 3).len(), 25);
        assert_eq!(partitions_into_k(5, 4).len(), 10);
        assert_eq!(partitions_into_k(5, 5).len(), 1);
    }

    #[test]
    fn fully_separable_max_saturates_bound() {
        let obs = w_pq(&GeneralizedGraph::line(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let report = ksep_max(&obs, 4, 4, 7).unwrap();
        assert!(report.converged);
        assert_abs_diff_eq!(report.max_expectation, 3.0, epsilon = 1e-6);
    }

    #[test]
    fn ksep_k1_equals_lambda_max() {
        let obs = w_pq(&GeneralizedGraph::line(3).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let report = ksep_max(&obs, 1, 1, 7).unwrap();
        let (lambda, _) = max_eigenvalue(&obs).unwrap();
        assert_abs_diff_eq!(report.max_expectation, lambda, epsilon = 1e-9);
    }

    #[test]
    fn bound_report_serializes() {
        let ring4 = WitnessSpec::w_pq(GeneralizedGraph::ring(4).unwrap(), Pauli::X, Pauli::Z).unwrap();
        let rep = bound_report(&ring4, true).unwrap();
        assert!(rep.lambda_max.unwrap() > rep.moment_lower.unwrap());
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"method\":\"exact\""));
    }
}
