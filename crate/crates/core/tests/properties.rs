use cliffact::io::{export_module_json, import_module_json};
use cliffact::linalg::{expm, kron, solve_antilinear_commutant};
use cliffact::spectral::{adjoint_gauge_action, build_pati_salam, RealStructureVariant};
use cliffact::{CliffordModule, ComplexMatrix, SignTriple, Signature, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), dim * dim).prop_map(move |v| {
        ComplexMatrix::from_fn(dim, |i, j| {
            let (re, im) = v[i * dim + j];
            C64::new(re, im)
        })
    })
}

fn signature(max_n: usize) -> impl Strategy<Value = Signature> {
    (0..=max_n).prop_flat_map(|n| (0..=n).prop_map(move |p| Signature::new(p, n - p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.dist(&right) < 1e-12);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(3), c in matrix(2), d in matrix(3)) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.dist(&rhs) < 1e-10);
    }

    #[test]
    fn expm_respects_adjoint_and_inverse(a in matrix(3)) {
        let e = expm(&a).unwrap();
        prop_assert!(expm(&a.adjoint()).unwrap().dist(&e.adjoint()) < 1e-9 * e.max_abs().max(1.0));
        let prod = &e * &expm(&-&a).unwrap();
        prop_assert!(prod.dist(&ComplexMatrix::identity(3)) < 1e-8 * e.max_abs().max(1.0));
    }

    #[test]
    fn anti_hermitian_exponentials_are_unitary(a in matrix(4)) {
        let x = (&a - &a.adjoint()).scale_re(0.5);
        prop_assert!(expm(&x).unwrap().unitarity_residual() < 1e-12);
    }

    #[test]
    fn commutant_solution_satisfies_relations(sig in signature(6), branch in prop::sample::select(vec![1i8, -1])) {
        let m = CliffordModule::build_irrep(sig, branch);
        let eps_prime = SignTriple::for_s(sig.s()).eps_prime;
        let signs = vec![eps_prime; m.n()];
        let sol = solve_antilinear_commutant(m.dim(), &m.gammas, &signs).unwrap();
        prop_assert!(sol.op.unitarity_residual() < 1e-12);
        for g in &m.gammas {
            prop_assert!(sol.op.relation_residual(g, f64::from(eps_prime)) < 1e-12);
        }
        let id = ComplexMatrix::identity(m.dim());
        prop_assert!(sol.op.square().dist(&id.scale_re(f64::from(sol.square_sign))) < 1e-12);
        // first nonzero entry is positive real
        let k = sol.op.matrix();
        let first = (0..m.dim() * m.dim())
            .map(|idx| k.get(idx / m.dim(), idx % m.dim()))
            .find(|z| z.norm() > 1e-9)
            .unwrap();
        prop_assert!(first.im.abs() < 1e-12 && first.re > 0.0);
    }

    #[test]
    fn module_signs_follow_table(sig in signature(7), branch in prop::sample::select(vec![1i8, -1])) {
        let m = CliffordModule::build_irrep(sig, branch);
        prop_assert_eq!(m.measure_signs(1e-6), SignTriple::for_s(sig.s()));
        prop_assert!(m.clifford_residual() < 1e-12);
    }

    #[test]
    fn json_round_trip(sig in signature(7), branch in prop::sample::select(vec![1i8, -1])) {
        let m = CliffordModule::build_irrep(sig, branch);
        let text = export_module_json(&m);
        let back = import_module_json(&text).unwrap();
        prop_assert_eq!(&back.gammas, &m.gammas);
        prop_assert_eq!(back.j.matrix(), m.j.matrix());
        prop_assert_eq!(export_module_json(&back), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gauge_action_factorizes(seed in any::<u64>(), scale in 0.1..3.0f64) {
        let t = build_pati_salam(RealStructureVariant::default());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = t.sample_gauge_element(&mut rng, scale);
        prop_assert!(t.gauge_membership_residual(&u) < 1e-10);
        let g = adjoint_gauge_action(&t, &u);
        prop_assert!(g.factorization_residual < 1e-10);
        prop_assert!(g.det_defect < 1e-8);
    }
}

#[test]
fn table_rows_round_trip() {
    for s in 0..8u8 {
        assert_eq!(SignTriple::for_s(s).matching_s(), Some(s));
    }
}
