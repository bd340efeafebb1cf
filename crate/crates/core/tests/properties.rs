use ddspin::chain::{site_rotation, staggered_assignment, ChainSpec, FieldAssignment, FieldPair};
use ddspin::effective::{average_hamiltonian_numeric, h_rotated, two_qubit_effective};
use ddspin::metrics::{concurrence, purity};
use ddspin::quantum::{
    c, embed_pair_op, embed_site_op, evolve_exact, hermitian_eigen, max_abs, partial_trace_to_pair, trace, Operator, Pauli,
    StateVector, C64,
};
use ddspin::scheme::{block_unitaries, run_tree, Schedule};
use nalgebra::DVector;
use proptest::prelude::*;

fn hermitian(dim: usize) -> impl Strategy<Value = Operator> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| {
        let a = Operator::from_fn(dim, dim, |r, s| c(v[2 * (r * dim + s)], v[2 * (r * dim + s) + 1]));
        (&a + a.adjoint()).scale(0.5)
    })
}

fn pure_state(n: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1 << n;
    prop::collection::vec(-1.0f64..1.0, 2 * dim)
        .prop_filter("non-zero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(move |v| {
            let amps = DVector::from_fn(dim, |i, _| c(v[2 * i], v[2 * i + 1]));
            let norm = amps.norm();
            StateVector::from_amplitudes(n, amps.unscale(norm)).unwrap()
        })
}

fn unitary2() -> impl Strategy<Value = Operator> {
    (hermitian(2), 0.0f64..6.0).prop_map(|(h, t)| hermitian_eigen(&h).unwrap().propagator(t))
}

fn zeta() -> impl Strategy<Value = [f64; 3]> {
    [-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evolution_preserves_norm(h in hermitian(8), t in -10.0f64..10.0, psi in pure_state(3)) {
        let out = evolve_exact(&h, t, &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_composes(h in hermitian(4), t1 in -5.0f64..5.0, t2 in -5.0f64..5.0, psi in pure_state(2)) {
        let two = evolve_exact(&h, t2, &evolve_exact(&h, t1, &psi).unwrap()).unwrap();
        let one = evolve_exact(&h, t1 + t2, &psi).unwrap();
        prop_assert!((two.amplitudes() - one.amplitudes()).norm() < 1e-10);
    }

    #[test]
    fn distinct_site_operators_commute(a in hermitian(2), b in hermitian(2), i in 1usize..=4, j in 1usize..=4) {
        prop_assume!(i != j);
        let ea = embed_site_op(&a, i, 4).unwrap();
        let eb = embed_site_op(&b, j, 4).unwrap();
        prop_assert!(max_abs(&(&ea * &eb - &eb * &ea)) < 1e-12);
    }

    #[test]
    fn reduced_states_are_valid_and_agree(psi in pure_state(4), a in 1usize..=4, b in 1usize..=4) {
        prop_assume!(a != b);
        let fast = psi.reduced_pair((a, b)).unwrap();
        let dense = partial_trace_to_pair(&psi.density_matrix(), (a, b)).unwrap();
        prop_assert!(max_abs(&(&fast - &dense)) < 1e-12);
        prop_assert!((trace(&fast) - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(hermitian_eigen(&fast).unwrap().values.min() > -1e-12);
        let p = purity(&fast).unwrap();
        prop_assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&p));
    }

    #[test]
    fn concurrence_bounded_and_local_invariant(psi in pure_state(3), u in unitary2(), v in unitary2()) {
        let rho = psi.reduced_pair((1, 3)).unwrap();
        let cval = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&cval));
        let uv = u.kronecker(&v);
        let rotated = &uv * &rho * uv.adjoint();
        prop_assert!((concurrence(&rotated).unwrap() - cval).abs() < 1e-7);
    }

    #[test]
    fn pure_two_qubit_concurrence_formula(psi in pure_state(2)) {
        let a: Vec<C64> = psi.amplitudes().iter().copied().collect();
        let expected = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        prop_assert!((concurrence(&psi.density_matrix()).unwrap() - expected).abs() < 1e-7);
    }

    #[test]
    fn rotated_paulis_are_unit_and_match_conjugation(fx in 1i64..4, dy in 1i64..4, t in 0.0f64..1.0, k in 1usize..=3) {
        let pair = FieldPair::new(fx, fx + dy);
        let omega = 2.0 * std::f64::consts::PI;
        let r = h_rotated(k, pair, omega, t).unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-12);
        let u = site_rotation(pair, omega, t);
        let direct = u.adjoint() * Pauli::from_index(k).unwrap().matrix() * u;
        prop_assert!(max_abs(&(direct - r.to_operator())) < 1e-12);
    }

    #[test]
    fn effective_interaction_is_linear(z in zeta(), s in -3.0f64..3.0) {
        let scaled = two_qubit_effective([s * z[0], s * z[1], s * z[2]]).matrix;
        prop_assert!(max_abs(&(scaled - two_qubit_effective(z).matrix.scale(s))) < 1e-12);
    }

    #[test]
    fn block_unitaries_are_unitary(z in zeta(), tau in 0.0f64..30.0) {
        let b = block_unitaries(&two_qubit_effective(z), tau).unwrap();
        prop_assert!(b.unitarity_defect() < 1e-12);
    }

    #[test]
    fn tree_matches_dense(n in 2usize..=6, seed in prop::collection::vec((zeta(), 0.0f64..15.0), 5)) {
        let couplings: Vec<[f64; 3]> = seed.iter().take(n - 1).map(|(z, _)| *z).collect();
        let spec = ChainSpec::new(n, couplings).unwrap();
        let taus: Vec<f64> = seed.iter().take(n - 1).map(|(_, t)| *t).collect();
        let schedule = Schedule::with_durations((1, n), &taus).unwrap();
        let tree = run_tree(&spec, &schedule).unwrap();
        prop_assert!((tree.norm_sqr() - 1.0).abs() < 1e-10);
        let mut dense = StateVector::all_zeros(n).unwrap();
        for step in &schedule.steps {
            let h = embed_pair_op(&two_qubit_effective(spec.bond(step.pair.0).unwrap()).matrix, step.pair.0, n).unwrap();
            dense = evolve_exact(&h, step.tau, &dense).unwrap();
        }
        prop_assert!((tree.to_state_vector().amplitudes() - dense.amplitudes()).norm() < 1e-9);
    }

    #[test]
    fn schedule_json_round_trips(taus in prop::collection::vec(0.0f64..50.0, 1..6), start in 1usize..4) {
        let s = Schedule::with_durations((start, start + taus.len()), &taus).unwrap();
        prop_assert_eq!(Schedule::from_json(&s.to_json().unwrap()).unwrap(), s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The period average is a property of the waveform shape, not of `t_c`.
    #[test]
    fn average_independent_of_period(z in zeta(), t_c in 0.01f64..2.0) {
        let spec = ChainSpec::uniform(2, z).unwrap();
        let a = average_hamiltonian_numeric(&spec, &FieldAssignment::constant(2, FieldPair::doubled(1), t_c).unwrap(), 512).unwrap();
        let b = two_qubit_effective(z).matrix;
        prop_assert!(max_abs(&(a - b)) < 1e-9);
    }

    #[test]
    fn staggered_average_vanishes(z in prop::collection::vec(zeta(), 4), n in 2usize..=5) {
        let spec = ChainSpec::new(n, z.into_iter().take(n - 1).collect()).unwrap();
        let avg = average_hamiltonian_numeric(&spec, &staggered_assignment(n, 1, 2, 0.05).unwrap(), 512).unwrap();
        prop_assert!(max_abs(&avg) < 1e-12);
    }
}
