//! Pauli-string algebra, generalized graphs, and witness-observable
//! construction.
//!
//! Qubit ordering is little-endian throughout: qubit `q` is bit `q` of a
//! computational-basis index, and tensor factor 0 acts on qubit 0.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Tensor product of Pauli letters over a fixed qubit count.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    /// Identity string on `n` qubits.
    pub fn identity(n: usize) -> Self {
        PauliString {
            letters: vec![Pauli::I; n],
        }
    }

    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString { letters }
    }

    /// String with `letters[i]` placed on qubit `qubits[i]`, identity elsewhere.
    pub fn with_placements(n: usize, qubits: &[usize], letters: &[Pauli]) -> Result<Self> {
        if qubits.len() != letters.len() {
            return Err(Error::LengthMismatch {
                expected: qubits.len(),
                got: letters.len(),
            });
        }
        let mut s = PauliString::identity(n);
        for (&q, &l) in qubits.iter().zip(letters) {
            if q >= n {
                return Err(Error::IndexOutOfRange { index: q, n });
            }
            s.letters[q] = l;
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != Pauli::I).count()
    }

    /// Bit masks driving state-vector application: `(flip, phase_flip, n_y)`.
    ///
    /// For P = ⊗_q σ_q and basis state |x⟩: P|x⟩ = i^{n_y} (−1)^{popcount(x & phase_flip)} |x ⊕ flip⟩,
    /// where `flip` collects X and Y positions and `phase_flip` collects Y and Z positions.
    pub fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut n_y = 0u32;
        for (q, &l) in self.letters.iter().enumerate() {
            match l {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    phase |= 1 << q;
                    n_y += 1;
                }
                Pauli::Z => phase |= 1 << q,
            }
        }
        (flip, phase, n_y)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Set of k-tuples ("generalized edges") of node indices; always simple:
/// tuples are sorted ascending and deduplicated on construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedGraph {
    n_nodes: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

/// Canonicalizes and validates a generalized edge set.
pub fn build_graph(n: usize, k: usize, tuples: &[Vec<usize>]) -> Result<GeneralizedGraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "arity k={k} must satisfy 1 <= k <= n={n}"
        )));
    }
    let mut edges = Vec::with_capacity(tuples.len());
    for t in tuples {
        if t.len() != k {
            return Err(Error::ArityMismatch {
                expected: k,
                got: t.len(),
            });
        }
        let mut s = t.clone();
        s.sort_unstable();
        for w in s.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex { tuple: t.clone() });
            }
        }
        if let Some(&max) = s.last() {
            if max >= n {
                return Err(Error::IndexOutOfRange { index: max, n });
            }
        }
        edges.push(s);
    }
    edges.sort();
    edges.dedup();
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(GeneralizedGraph { n_nodes: n, k, edges })
}

impl GeneralizedGraph {
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Canonical edge list (each tuple sorted ascending, list sorted).
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// |E_k|.
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Ring (cycle) graph on n >= 3 nodes, k = 2.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::FamilyMinimum {
                family: "ring",
                min: 3,
                n,
            });
        }
        let tuples: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        build_graph(n, 2, &tuples)
    }

    /// Linear chain on n >= 2 nodes, k = 2.
    pub fn line(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::FamilyMinimum {
                family: "line",
                min: 2,
                n,
            });
        }
        let tuples: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        build_graph(n, 2, &tuples)
    }

    /// Complete graph on n >= 2 nodes, k = 2.
    pub fn complete(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::FamilyMinimum {
                family: "complete",
                min: 2,
                n,
            });
        }
        let mut tuples = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                tuples.push(vec![i, j]);
            }
        }
        build_graph(n, 2, &tuples)
    }

    /// Single k = n tuple covering every node (the W^(N,N) graph).
    pub fn full_tuple(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyInput { what: "graph nodes" });
        }
        build_graph(n, n, &[(0..n).collect()])
    }

    /// Degree of `node` (k = 2 graphs).
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.contains(&node))
            .count()
    }

    /// True if `(u, v)` (any order) is an edge of a k = 2 graph.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let t = if u < v { vec![u, v] } else { vec![v, u] };
        self.edges.binary_search(&t).is_ok()
    }
}

/// One witness term: an on/off coefficient and a letter per tuple position.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub alpha: u8,
    pub letters: Vec<Pauli>,
}

/// Generalized-graph witness description: up to three terms, each assigning
/// one Pauli letter to every position of a k-tuple. Active terms must use
/// pairwise distinct letters at every position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessSpec {
    pub graph: GeneralizedGraph,
    pub terms: Vec<WitnessTerm>,
}

impl WitnessSpec {
    pub fn new(graph: GeneralizedGraph, terms: Vec<WitnessTerm>) -> Result<Self> {
        let spec = WitnessSpec { graph, terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.graph.k();
        if self.terms.is_empty() || self.terms.len() > 3 {
            return Err(Error::BadTermCount {
                got: self.terms.len(),
            });
        }
        for (m, t) in self.terms.iter().enumerate() {
            if t.alpha > 1 {
                return Err(Error::BadAlpha { got: t.alpha });
            }
            if t.letters.len() != k {
                return Err(Error::TermLengthMismatch {
                    term: m,
                    expected: k,
                    got: t.letters.len(),
                });
            }
            for (j, &l) in t.letters.iter().enumerate() {
                if l == Pauli::I {
                    return Err(Error::IdentityLetter { term: m, position: j });
                }
            }
        }
        let active: Vec<&WitnessTerm> = self.terms.iter().filter(|t| t.alpha == 1).collect();
        if active.is_empty() {
            return Err(Error::NoActiveTerms);
        }
        for j in 0..k {
            for a in 0..active.len() {
                for b in a + 1..active.len() {
                    if active[a].letters[j] == active[b].letters[j] {
                        return Err(Error::RepeatedLetter {
                            position: j,
                            letter: active[a].letters[j].as_char(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of active terms (the M of the witness family).
    pub fn n_active_terms(&self) -> usize {
        self.terms.iter().filter(|t| t.alpha == 1).count()
    }

    /// Active terms in declaration order.
    pub fn active_terms(&self) -> impl Iterator<Item = &WitnessTerm> {
        self.terms.iter().filter(|t| t.alpha == 1)
    }

    /// Uniform-letter two-term spec (the W_PQ family) on `graph`.
    pub fn w_pq(graph: GeneralizedGraph, p: Pauli, q: Pauli) -> Result<Self> {
        if p == q {
            return Err(Error::SameLetters);
        }
        if p == Pauli::I || q == Pauli::I {
            return Err(Error::IdentityLetter { term: 0, position: 0 });
        }
        let k = graph.k();
        WitnessSpec::new(
            graph,
            vec![
                WitnessTerm {
                    alpha: 1,
                    letters: vec![p; k],
                },
                WitnessTerm {
                    alpha: 1,
                    letters: vec![q; k],
                },
            ],
        )
    }

    /// Uniform-letter three-term spec (the W_XYZ family) on `graph`.
    pub fn w_xyz(graph: GeneralizedGraph) -> Result<Self> {
        let k = graph.k();
        WitnessSpec::new(
            graph,
            vec![
                WitnessTerm {
                    alpha: 1,
                    letters: vec![Pauli::X; k],
                },
                WitnessTerm {
                    alpha: 1,
                    letters: vec![Pauli::Y; k],
                },
                WitnessTerm {
                    alpha: 1,
                    letters: vec![Pauli::Z; k],
                },
            ],
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: WitnessSpecDoc = serde_json::from_str(s)?;
        doc.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&WitnessSpecDoc::from(self)).expect("spec serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string())?;
        Ok(())
    }
}

/// Flat JSON form: {"n", "k", "edges", "terms"}.
#[derive(Serialize, Deserialize)]
struct WitnessSpecDoc {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    terms: Vec<WitnessTerm>,
}

impl From<&WitnessSpec> for WitnessSpecDoc {
    fn from(spec: &WitnessSpec) -> Self {
        WitnessSpecDoc {
            n: spec.graph.n_nodes(),
            k: spec.graph.k(),
            edges: spec.graph.edges().to_vec(),
            terms: spec.terms.clone(),
        }
    }
}

impl TryFrom<WitnessSpecDoc> for WitnessSpec {
    type Error = Error;

    fn try_from(doc: WitnessSpecDoc) -> Result<Self> {
        let graph = build_graph(doc.n, doc.k, &doc.edges)?;
        WitnessSpec::new(graph, doc.terms)
    }
}

/// Real-weighted sum of Pauli strings; Hermitian by construction.
#[derive(Clone, PartialEq, Debug)]
pub struct Observable {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl Observable {
    pub fn new(n_qubits: usize) -> Self {
        Observable {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn push_term(&mut self, coeff: f64, string: PauliString) -> Result<()> {
        if string.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                observable: self.n_qubits,
                state: string.n_qubits(),
            });
        }
        self.terms.push((coeff, string));
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Trace; only identity strings contribute 2^N.
    pub fn trace(&self) -> f64 {
        let dim = (1u64 << self.n_qubits) as f64;
        self.terms
            .iter()
            .filter(|(_, s)| s.weight() == 0)
            .map(|(c, _)| c * dim)
            .sum()
    }

    /// Sum of |coefficients|; an upper bound on the spectral radius.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }
}

/// Expands a witness spec into its observable: one unit-coefficient string
/// per (edge, active term), identity letters outside the tuple.
pub fn build_witness(spec: &WitnessSpec) -> Result<Observable> {
    spec.validate()?;
    let n = spec.graph.n_nodes();
    let mut obs = Observable::new(n);
    for edge in spec.graph.edges() {
        for term in spec.active_terms() {
            let s = PauliString::with_placements(n, edge, &term.letters)?;
            obs.push_term(1.0, s)?;
        }
    }
    Ok(obs)
}

/// Observable for the two-uniform-letter family on `graph`.
pub fn w_pq(graph: &GeneralizedGraph, p: Pauli, q: Pauli) -> Result<Observable> {
    build_witness(&WitnessSpec::w_pq(graph.clone(), p, q)?)
}

/// Observable for the three-uniform-letter family on `graph`.
pub fn w_xyz(graph: &GeneralizedGraph) -> Result<Observable> {
    build_witness(&WitnessSpec::w_xyz(graph.clone())?)
}

/// Two-qubit Bell witness sqrt(2)(X⊗X + Z⊗Z).
pub fn bell_observable() -> Observable {
    let mut obs = Observable::new(2);
    let r2 = std::f64::consts::SQRT_2;
    obs.push_term(r2, PauliString::new(vec![Pauli::X, Pauli::X]))
        .expect("2 qubits");
    obs.push_term(r2, PauliString::new(vec![Pauli::Z, Pauli::Z]))
        .expect("2 qubits");
    obs
}

/// Both sides of the generalized Cauchy-Schwarz inequality for a family of
/// equal-length real vectors: lhs = |sum of the elementwise product|,
/// rhs = product of Euclidean norms. Contract: lhs <= rhs.
pub fn gcs_check(vectors: &[Vec<f64>]) -> Result<(f64, f64)> {
    let first = vectors.first().ok_or(Error::EmptyInput {
        what: "vector family",
    })?;
    let len = first.len();
    for v in vectors {
        if v.len() != len {
            return Err(Error::LengthMismatch {
                expected: len,
                got: v.len(),
            });
        }
    }
    let mut lhs = 0.0;
    for i in 0..len {
        lhs += vectors.iter().map(|v| v[i]).product::<f64>();
    }
    let rhs = vectors
        .iter()
        .map(|v| v.iter().map(|x| x * x).sum::<f64>().sqrt())
        .product();
    Ok((lhs.abs(), rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn build_graph_canonicalizes() {
        let g = build_graph(5, 2, &[vec![3, 2], vec![0, 1], vec![1, 0], vec![2, 3]]).unwrap();
        assert_eq!(g.edges(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn build_graph_chain_and_tuple_examples() {
        let g = build_graph(5, 2, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
        assert_eq!(g.n_edges(), 4);
        let t = build_graph(4, 4, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(t.n_edges(), 1);
    }

    #[test]
    fn build_graph_rejects_bad_tuples() {
        assert!(matches!(
            build_graph(3, 2, &[vec![0, 0]]),
            Err(Error::DuplicateIndex { .. })
        ));
        assert!(matches!(
            build_graph(3, 2, &[vec![0, 3]]),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            build_graph(3, 2, &[]),
            Err(Error::EmptyEdgeSet)
        ));
        assert!(matches!(
            build_graph(3, 2, &[vec![0, 1, 2]]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn witness_terms_per_edge() {
        let ring3 = GeneralizedGraph::ring(3).unwrap();
        let obs = w_pq(&ring3, Pauli::X, Pauli::Z).unwrap();
        assert_eq!(obs.terms().len(), 6);
        let obs3 = w_xyz(&ring3).unwrap();
        assert_eq!(obs3.terms().len(), 9);
    }

    #[test]
    fn witness_two_qubit_chain_is_xx_zz() {
        let line2 = GeneralizedGraph::line(2).unwrap();
        let obs = w_pq(&line2, Pauli::X, Pauli::Z).unwrap();
        let strings: Vec<String> = obs.terms().iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(strings, vec!["XX", "ZZ"]);
    }

    #[test]
    fn witness_full_tuple_xyz() {
        let g = GeneralizedGraph::full_tuple(4).unwrap();
        let obs = w_xyz(&g).unwrap();
        let strings: Vec<String> = obs.terms().iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(strings, vec!["XXXX", "YYYY", "ZZZZ"]);
    }

    #[test]
    fn mixed_assignment_six_local() {
        let g = build_graph(6, 6, &[vec![0, 1, 2, 3, 4, 5]]).unwrap();
        let letters_a: Vec<Pauli> = "XYZZYX".chars().map(|c| Pauli::from_char(c).unwrap()).collect();
        let letters_b: Vec<Pauli> = "ZXYXZY".chars().map(|c| Pauli::from_char(c).unwrap()).collect();
        let spec = WitnessSpec::new(
            g,
            vec![
                WitnessTerm { alpha: 1, letters: letters_a },
                WitnessTerm { alpha: 1, letters: letters_b },
            ],
        )
        .unwrap();
        let obs = build_witness(&spec).unwrap();
        let strings: Vec<String> = obs.terms().iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(strings, vec!["XYZZYX", "ZXYXZY"]);
    }

    #[test]
    fn distinct_letter_condition_enforced() {
        let g = GeneralizedGraph::line(2).unwrap();
        let bad = WitnessSpec::new(
            g,
            vec![
                WitnessTerm { alpha: 1, letters: vec![Pauli::X, Pauli::X] },
                WitnessTerm { alpha: 1, letters: vec![Pauli::X, Pauli::Z] },
            ],
        );
        assert!(matches!(bad, Err(Error::RepeatedLetter { position: 0, .. })));
    }

    #[test]
    fn inactive_terms_do_not_collide() {
        let g = GeneralizedGraph::line(2).unwrap();
        let spec = WitnessSpec::new(
            g,
            vec![
                WitnessTerm { alpha: 1, letters: vec![Pauli::X, Pauli::X] },
                WitnessTerm { alpha: 0, letters: vec![Pauli::X, Pauli::X] },
            ],
        )
        .unwrap();
        assert_eq!(spec.n_active_terms(), 1);
        assert_eq!(build_witness(&spec).unwrap().terms().len(), 1);
    }

    #[test]
    fn w_pq_rejects_equal_letters() {
        let g = GeneralizedGraph::line(2).unwrap();
        assert!(matches!(
            WitnessSpec::w_pq(g, Pauli::X, Pauli::X),
            Err(Error::SameLetters)
        ));
    }

    #[test]
    fn bell_coefficients() {
        let obs = bell_observable();
        for (c, _) in obs.terms() {
            assert_abs_diff_eq!(*c, std::f64::consts::SQRT_2, epsilon = 1e-15);
        }
    }

    #[test]
    fn json_round_trip() {
        let ring = GeneralizedGraph::ring(4).unwrap();
        let spec = WitnessSpec::w_pq(ring, Pauli::X, Pauli::Z).unwrap();
        let s = spec.to_json_string();
        let back = WitnessSpec::from_json_str(&s).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn json_matches_schema() {
        let doc = r#"{
            "n": 2, "k": 2,
            "edges": [[0, 1]],
            "terms": [
                {"alpha": 1, "letters": ["X", "X"]},
                {"alpha": 1, "letters": ["Z", "Z"]}
            ]
        }"#;
        let spec = WitnessSpec::from_json_str(doc).unwrap();
        assert_eq!(spec.n_active_terms(), 2);
        assert_eq!(spec.graph.n_edges(), 1);
    }

    #[test]
    fn gcs_examples() {
        let (lhs, rhs) = gcs_check(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_abs_diff_eq!(lhs, 1.0);
        assert_abs_diff_eq!(rhs, 1.0);
        let (lhs, rhs) = gcs_check(&[vec![1.0, 2.0], vec![3.0, -1.0]]).unwrap();
        assert_abs_diff_eq!(lhs, 1.0);
        assert_abs_diff_eq!(rhs, (5.0f64).sqrt() * (10.0f64).sqrt());
        assert!(lhs <= rhs);
    }

    #[test]
    fn gcs_rejects_bad_input() {
        assert!(matches!(gcs_check(&[]), Err(Error::EmptyInput { .. })));
        assert!(matches!(
            gcs_check(&[vec![1.0], vec![1.0, 2.0]]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn masks_encode_letters() {
        let s = PauliString::new(vec![Pauli::X, Pauli::Y, Pauli::Z, Pauli::I]);
        let (flip, phase, n_y) = s.masks();
        assert_eq!(flip, 0b0011);
        assert_eq!(phase, 0b0110);
        assert_eq!(n_y, 1);
    }
}
