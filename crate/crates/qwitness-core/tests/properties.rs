//! Property tests for the structural and numerical invariants of the
//! witness algebra, the circuit simulator, and the reconstruction helpers.

use proptest::prelude::*;
use std::f64::consts::TAU;

use qwitness_core::analytic::{
    complete_edge, linear_chain_total, regular_tf_edge, ring_edge, BlochVector,
};
use qwitness_core::pauli::{
    build_graph, build_witness, gcs_check, GeneralizedGraph, Observable, Pauli, PauliString,
    WitnessSpec, WitnessTerm,
};
use qwitness_core::state::{
    depolarized_expectation, expectation, ghz_state, qaoa_state, ProblemHamiltonian, QaoaParams,
    StateVector,
};
use qwitness_core::tomography::{mle_project, MeasurementDataset};

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

/// Distinct letters for one tuple position across up to three terms.
fn position_letters(m: usize) -> impl Strategy<Value = Vec<Pauli>> {
    Just([Pauli::X, Pauli::Y, Pauli::Z]).prop_shuffle().prop_map(move |p| p[..m].to_vec())
}

/// A random witness spec: n nodes, arity k, distinct random tuples, and m
/// terms whose letters are position-wise distinct.
fn witness_spec(max_n: usize) -> impl Strategy<Value = WitnessSpec> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 2..=n.min(4)))
        .prop_flat_map(|(n, k)| {
            let tuple = prop::sample::subsequence((0..n).collect::<Vec<_>>(), k);
            (
                Just(n),
                Just(k),
                prop::collection::vec(tuple, 1..=4),
                1usize..=3,
            )
        })
        .prop_flat_map(|(n, k, tuples, m)| {
            (
                Just(n),
                Just(k),
                Just(tuples),
                prop::collection::vec(position_letters(m), k),
            )
        })
        .prop_map(|(n, k, tuples, letters_by_pos)| {
            let graph = build_graph(n, k, &tuples).expect("valid tuples");
            let m = letters_by_pos[0].len();
            let terms = (0..m)
                .map(|t| WitnessTerm {
                    alpha: 1,
                    letters: (0..k).map(|j| letters_by_pos[j][t]).collect(),
                })
                .collect();
            WitnessSpec::new(graph, terms).expect("valid spec")
        })
}

fn ring_hamiltonian(n: usize) -> ProblemHamiltonian {
    ProblemHamiltonian::maxcut(GeneralizedGraph::ring(n).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Elementwise-product inequality: the bound side never falls below the
    /// contracted side.
    #[test]
    fn gcs_inequality_holds(
        vectors in prop::collection::vec(
            prop::collection::vec(-2.0f64..2.0, 1..=8),
            2..=4,
        )
    ) {
        let dim = vectors[0].len();
        let trimmed: Vec<Vec<f64>> =
            vectors.iter().map(|v| v.iter().cloned().cycle().take(dim).collect()).collect();
        let (lhs, rhs) = gcs_check(&trimmed).unwrap();
        prop_assert!(lhs <= rhs + 1e-12, "lhs={lhs} rhs={rhs}");
    }

    /// Tuple order and within-tuple order never change the built graph.
    #[test]
    fn graph_canonicalization_is_order_free(spec in witness_spec(6)) {
        let graph = &spec.graph;
        let mut scrambled: Vec<Vec<usize>> = graph
            .edges()
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.reverse();
                t
            })
            .collect();
        scrambled.reverse();
        let rebuilt = build_graph(graph.n_nodes(), graph.k(), &scrambled).unwrap();
        prop_assert_eq!(rebuilt.edges(), graph.edges());
    }

    /// Every expanded witness term acts on exactly k qubits with unit
    /// coefficient, and the term count is m * |E|.
    #[test]
    fn witness_terms_have_arity_weight(spec in witness_spec(6)) {
        let obs = build_witness(&spec).unwrap();
        prop_assert_eq!(
            obs.terms().len(),
            spec.n_active_terms() * spec.graph.n_edges()
        );
        for (coeff, string) in obs.terms() {
            prop_assert_eq!(*coeff, 1.0);
            prop_assert_eq!(string.weight(), spec.graph.k());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Depth-1 amplitudes are invariant under the global bit flip.
    #[test]
    fn qaoa_amplitudes_have_flip_symmetry(
        n in 2usize..=6,
        gamma in angle(),
        beta in angle(),
    ) {
        let state = qaoa_state(&ring_hamiltonian(n.max(3)), &QaoaParams::single(gamma, beta)).unwrap();
        let dim = state.dim();
        let amps = state.amplitudes();
        for x in 0..dim {
            let flipped = !x & (dim - 1);
            let d = (amps[x] - amps[flipped]).norm();
            prop_assert!(d < 1e-12, "x={x} delta={d}");
        }
    }

    /// The all-X parity is conserved at 1; the all-Z parity of an odd ring
    /// vanishes by the flip symmetry.
    #[test]
    fn qaoa_global_parities(
        gamma in angle(),
        beta in angle(),
        layers in 1usize..=2,
    ) {
        let n = 5usize;
        let params = QaoaParams::new(vec![gamma; layers], vec![beta; layers]).unwrap();
        let state = qaoa_state(&ring_hamiltonian(n), &params).unwrap();
        let mut all_x = Observable::new(n);
        all_x.push_term(1.0, PauliString::new(vec![Pauli::X; n])).unwrap();
        prop_assert!((expectation(&all_x, &state).unwrap() - 1.0).abs() < 1e-10);
        let mut all_z = Observable::new(n);
        all_z.push_term(1.0, PauliString::new(vec![Pauli::Z; n])).unwrap();
        prop_assert!(expectation(&all_z, &state).unwrap().abs() < 1e-10);
    }

    /// Expectation is linear in the observable.
    #[test]
    fn expectation_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        gamma in angle(),
        beta in angle(),
    ) {
        let n = 4usize;
        let state = qaoa_state(&ring_hamiltonian(n), &QaoaParams::single(gamma, beta)).unwrap();
        let p = PauliString::new(vec![Pauli::X, Pauli::X, Pauli::I, Pauli::I]);
        let q = PauliString::new(vec![Pauli::I, Pauli::Z, Pauli::Z, Pauli::I]);
        let mut only_p = Observable::new(n);
        only_p.push_term(1.0, p.clone()).unwrap();
        let mut only_q = Observable::new(n);
        only_q.push_term(1.0, q.clone()).unwrap();
        let mut combined = Observable::new(n);
        combined.push_term(a, p).unwrap();
        combined.push_term(b, q).unwrap();
        let lhs = expectation(&combined, &state).unwrap();
        let rhs = a * expectation(&only_p, &state).unwrap()
            + b * expectation(&only_q, &state).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9, "lhs={lhs} rhs={rhs}");
    }

    /// Physicality and idempotence of the Bloch-ball projection.
    #[test]
    fn mle_projection_idempotent(
        x in -2.0f64..2.0,
        y in -2.0f64..2.0,
        z in -2.0f64..2.0,
    ) {
        let raw = BlochVector { x, y, z };
        let rho = mle_project(&raw);
        prop_assert!(rho.is_physical(1e-9));
        let again = mle_project(&BlochVector {
            x: 2.0 * rho.rho21.re,
            y: 2.0 * rho.rho21.im,
            z: (rho.rho11 - rho.rho22).re,
        });
        prop_assert!((rho.rho12 - again.rho12).norm() < 1e-12);
        prop_assert!((rho.rho11 - again.rho11).norm() < 1e-12);
    }

    /// Dataset JSON round trip is lossless.
    #[test]
    fn dataset_round_trip(
        n in 1usize..=3,
        raw in prop::collection::vec((0usize..8, 1u64..1000), 1..=8),
    ) {
        let mut bases = std::collections::BTreeMap::new();
        for basis in ["X", "Y", "Z"] {
            let mut counts = std::collections::BTreeMap::new();
            for &(x, c) in &raw {
                let x = x & ((1 << n) - 1);
                let bits: String =
                    (0..n).map(|i| if (x >> i) & 1 == 1 { '1' } else { '0' }).collect();
                *counts.entry(bits).or_insert(0) += c;
            }
            bases.insert(basis.to_string(), counts);
        }
        let ds = MeasurementDataset::new(n, bases, serde_json::Value::Null).unwrap();
        let back = MeasurementDataset::from_json_str(&ds.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(ds, back);
    }

    /// Depolarizing endpoints: p=0 is the raw expectation, p=1 kills every
    /// traceless observable.
    #[test]
    fn depolarized_expectation_endpoints(
        n in 3usize..=5,
        gamma in angle(),
        beta in angle(),
        p in 0.0f64..=1.0,
    ) {
        let graph = GeneralizedGraph::ring(n).unwrap();
        let spec = WitnessSpec::w_pq(graph.clone(), Pauli::X, Pauli::Z).unwrap();
        let obs = build_witness(&spec).unwrap();
        let state = qaoa_state(
            &ProblemHamiltonian::maxcut(graph).unwrap(),
            &QaoaParams::single(gamma, beta),
        )
        .unwrap();
        let raw = expectation(&obs, &state).unwrap();
        prop_assert!((depolarized_expectation(&obs, &state, 0.0).unwrap() - raw).abs() < 1e-12);
        prop_assert!(depolarized_expectation(&obs, &state, 1.0).unwrap().abs() < 1e-12);
        let mid = depolarized_expectation(&obs, &state, p).unwrap();
        prop_assert!((mid - (1.0 - p) * raw).abs() < 1e-12);
    }

    /// All four closed forms are 2pi-periodic in both angles.
    #[test]
    fn closed_forms_periodic(gamma in angle(), beta in angle()) {
        let near = |a: f64, b: f64| (a - b).abs() < 1e-9;
        prop_assert!(near(ring_edge(gamma + TAU, beta), ring_edge(gamma, beta)));
        prop_assert!(near(ring_edge(gamma, beta + TAU), ring_edge(gamma, beta)));
        prop_assert!(near(regular_tf_edge(3, gamma + TAU, beta), regular_tf_edge(3, gamma, beta)));
        prop_assert!(near(
            linear_chain_total(6, gamma, beta + TAU).unwrap(),
            linear_chain_total(6, gamma, beta).unwrap()
        ));
        prop_assert!(near(
            complete_edge(5, gamma + TAU, beta).unwrap(),
            complete_edge(5, gamma, beta).unwrap()
        ));
    }

    /// GHZ-type states are normalized with the expected Z parity.
    #[test]
    fn ghz_state_parity(
        n in 2usize..=6,
        flip_mask in 0usize..16,
        sign in prop::sample::select(vec![1i8, -1]),
    ) {
        let flips: Vec<usize> = (0..n).filter(|q| (flip_mask >> q) & 1 == 1).collect();
        let state = ghz_state(n, &flips, sign).unwrap();
        let norm: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let mut all_z = Observable::new(n);
        all_z.push_term(1.0, PauliString::new(vec![Pauli::Z; n])).unwrap();
        let z = expectation(&all_z, &state).unwrap();
        if n % 2 == 0 {
            let parity = if flips.len() % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((z - parity).abs() < 1e-12, "z={z}");
        } else {
            prop_assert!(z.abs() < 1e-12, "z={z}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Closed forms agree with the statevector simulator on rings and
    /// chains (rings of at least 4 nodes: a 3-ring is a triangle, outside
    /// the triangle-free ring form).
    #[test]
    fn closed_forms_match_simulator(
        n in 4usize..=7,
        gamma in angle(),
        beta in angle(),
    ) {
        let params = QaoaParams::single(gamma, beta);

        let ring_graph = GeneralizedGraph::ring(n).unwrap();
        let obs = build_witness(
            &WitnessSpec::w_pq(ring_graph.clone(), Pauli::X, Pauli::Z).unwrap(),
        )
        .unwrap();
        let state = qaoa_state(&ProblemHamiltonian::maxcut(ring_graph).unwrap(), &params).unwrap();
        let simulated = expectation(&obs, &state).unwrap();
        let closed = n as f64 * ring_edge(gamma, beta);
        prop_assert!((simulated - closed).abs() < 1e-10, "ring sim={simulated} closed={closed}");

        let line_graph = GeneralizedGraph::line(n).unwrap();
        let obs = build_witness(
            &WitnessSpec::w_pq(line_graph.clone(), Pauli::X, Pauli::Z).unwrap(),
        )
        .unwrap();
        let state = qaoa_state(&ProblemHamiltonian::maxcut(line_graph).unwrap(), &params).unwrap();
        let simulated = expectation(&obs, &state).unwrap();
        let closed = linear_chain_total(n, gamma, beta).unwrap();
        prop_assert!((simulated - closed).abs() < 1e-10, "chain sim={simulated} closed={closed}");
    }

    /// Uniform-superposition sanity: every witness evaluates to exactly
    /// |E_k| on |+...+> when it contains an all-X term, and the full
    /// expectation never exceeds the structural maximum M|E_k|.
    #[test]
    fn plus_state_witness_value(spec in witness_spec(5)) {
        let obs = build_witness(&spec).unwrap();
        let state = StateVector::uniform_plus(spec.graph.n_nodes()).unwrap();
        let value = expectation(&obs, &state).unwrap();
        let e = spec.graph.n_edges() as f64;
        let m = spec.n_active_terms() as f64;
        prop_assert!(value.abs() <= m * e + 1e-9);
        let has_all_x = spec
            .active_terms()
            .any(|t| t.letters.iter().all(|&l| l == Pauli::X));
        if has_all_x {
            let rest = value - e;
            prop_assert!(rest.abs() <= (m - 1.0) * e + 1e-9);
        }
    }
}
