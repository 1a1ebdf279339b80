use algebroid::algebroid::{ConnectionModel, LieAlgebroidModel};
use algebroid::exact_algebra::rational::{q, qf};
use algebroid::exact_algebra::{Elem, MultiPoly, Rational};
use algebroid::fixtures;
use algebroid::jets_enh::build_enh;
use algebroid::ruth::SamplePolicy;
use algebroid::symplectic::{
    area_form, certify_closed, check_roytenberg, killing_form, killing_matrix, lie_derivative_cartan,
    lie_derivative_direct, lift_roytenberg, nondegenerate, pairing_form, push_to_enh, transfer_to_enh,
    ClosedTwoForm, SymplecticError, TwoForm,
};
use algebroid::weil::WeilAlgebra;
use proptest::prelude::*;

fn flat(l: &LieAlgebroidModel) -> ConnectionModel {
    ConnectionModel::flat(l.bundle())
}

fn policy() -> SamplePolicy {
    SamplePolicy::default()
}

/// Killing form of sl2 from the trace form of the defining representation: `4 tr(XY)`.
fn sl2_killing_oracle() -> Vec<Vec<Rational>> {
    // e, f, h as 2x2 matrices
    let mats: [[[i64; 2]; 2]; 3] = [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]]];
    let tr = |a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]| -> i64 {
        (0..2).map(|i| (0..2).map(|k| a[i][k] * b[k][i]).sum::<i64>()).sum()
    };
    (0..3).map(|a| (0..3).map(|b| q(4 * tr(&mats[a], &mats[b]))).collect()).collect()
}

fn degenerate_sl2() -> TwoForm {
    let z = q(0);
    let g = vec![vec![z.clone(), q(4), z.clone()], vec![q(4), z.clone(), z.clone()], vec![z.clone(), z.clone(), z]];
    pairing_form(&fixtures::sl2(), &g).unwrap()
}

fn names(report: &algebroid::verdict::CheckReport) -> Vec<(String, bool)> {
    report.verdicts.iter().map(|v| (v.name.clone(), v.pass)).collect()
}

#[test]
fn killing_matrix_matches_trace_form() {
    assert_eq!(killing_matrix(&fixtures::sl2()), sl2_killing_oracle());
    let det = algebroid::exact_algebra::Matrix::from_rows(sl2_killing_oracle()).determinant();
    assert_eq!(det, q(-128));
}

#[test]
fn killing_form_is_a_2_shifted_roytenberg_structure() {
    let omega = killing_form(&fixtures::sl2()).unwrap();
    assert_eq!(omega.degree(), 2);
    let w = omega.weil();
    let expected = w
        .alg()
        .mul(&w.zeta(0), &w.zeta(1))
        .scale(&q(4))
        .add(&w.alg().mul(&w.zeta(2), &w.zeta(2)).scale(&q(4)));
    assert_eq!(omega.value(), &expected);
    let report = check_roytenberg(&omega, &policy());
    assert!(report.all_pass(), "{:?}", report);
    assert_eq!(
        names(&report).into_iter().map(|(n, _)| n).collect::<Vec<_>>(),
        ["axioms", "closed", "q_invariant", "lq_methods_agree", "nondegenerate"]
    );
    let nd = nondegenerate(&omega, &policy()).unwrap();
    assert!(nd.holds && nd.strict);
}

#[test]
fn area_form_on_the_tangent_algebroid_is_not_q_invariant() {
    // L_Q dx = -dxi^x, so L_Q (dx dy) = -dxi^x dy + dx dxi^y
    let l = fixtures::tangent(2);
    let omega = area_form(&l).unwrap();
    assert_eq!(omega.degree(), 0);
    let report = check_roytenberg(&omega, &policy());
    assert_eq!(
        names(&report),
        [
            ("axioms".to_string(), true),
            ("closed".to_string(), true),
            ("q_invariant".to_string(), false),
            ("lq_methods_agree".to_string(), true),
            ("nondegenerate".to_string(), false),
        ]
    );
    let witness = report.get("nondegenerate").unwrap().witness.clone().unwrap();
    assert!(witness.contains("not a cochain map"), "{witness}");
    let w = omega.weil();
    let expected = w
        .alg()
        .mul(&w.zeta(0), &w.dx(1))
        .neg()
        .add(&w.alg().mul(&w.dx(0), &w.zeta(1)));
    assert_eq!(lie_derivative_cartan(w, omega.value()), expected);
    // the xi directions are in the kernel of the pairing
    let nd = nondegenerate(&omega, &policy()).unwrap();
    assert!(!nd.strict && !nd.holds);
    assert_eq!(nd.evidence.len(), 3);
}

#[test]
fn area_form_on_the_plane_itself_passes_at_degree_zero() {
    let l = fixtures::zero(2);
    let omega = area_form(&l).unwrap();
    let report = check_roytenberg(&omega, &policy());
    assert!(report.all_pass(), "{:?}", report);
    assert!(nondegenerate(&omega, &policy()).unwrap().strict);
    let lifted = lift_roytenberg(&omega, &policy()).unwrap();
    assert!(certify_closed(&lifted).all_pass());
}

#[test]
fn degenerate_pairing_fails_with_a_kernel_witness() {
    let omega = degenerate_sl2();
    let nd = nondegenerate(&omega, &policy()).unwrap();
    assert!(!nd.holds && !nd.strict);
    let (point, v) = nd.kernel.clone().unwrap();
    assert!(point.is_empty());
    assert_eq!(v, vec![q(0), q(0), q(1)]);
    let report = check_roytenberg(&omega, &policy());
    let verdict = report.get("nondegenerate").unwrap();
    assert!(!verdict.pass);
    assert!(verdict.witness.as_ref().unwrap().contains("kernel vector (0, 0, 1)"));
}

#[test]
fn nondegeneracy_examples() {
    let ab = fixtures::abelian(3);
    let id: Vec<Vec<Rational>> = (0..3).map(|a| (0..3).map(|b| q(i64::from(a == b))).collect()).collect();
    let omega = pairing_form(&ab, &id).unwrap();
    assert!(nondegenerate(&omega, &policy()).unwrap().holds);
    assert!(check_roytenberg(&omega, &policy()).all_pass());

    let zero = TwoForm::new(&fixtures::sl2(), &flat(&fixtures::sl2()), 2, Elem::zero()).unwrap();
    let nd = nondegenerate(&zero, &policy()).unwrap();
    assert!(!nd.holds);
    assert!(nd.kernel.is_some());

    // both complexes are acyclic for the tangent algebroid, so even zero is a quasi-isomorphism
    let t = fixtures::tangent(2);
    let zero = TwoForm::new(&t, &flat(&t), 0, Elem::zero()).unwrap();
    let nd = nondegenerate(&zero, &policy()).unwrap();
    assert!(nd.holds && !nd.strict);
}

#[test]
fn cartan_and_direct_lie_derivatives_agree() {
    let t = fixtures::tangent(2);
    let nabla = fixtures::tangent2_curved_connection(&t);
    let w = WeilAlgebra::new(&t, &nabla).unwrap();
    let x = MultiPoly::var(0);
    let samples = vec![
        w.alg().mul(&w.dx(0), &w.zeta(1)).scale_poly(&x),
        w.alg().mul(&w.zeta(0), &w.zeta(1)),
        w.alg().mul_all(&[w.xi(0), w.dx(1), w.dx(0)]),
    ];
    for s in samples {
        let c = lie_derivative_cartan(&w, &s);
        assert_eq!(c, lie_derivative_direct(&w, &s));
    }
    // L_Q x = xi^x on the tangent algebroid
    let sl = fixtures::sl2();
    let w = WeilAlgebra::new(&sl, &flat(&sl)).unwrap();
    let non_inv = w.alg().mul(&w.zeta(0), &w.zeta(0));
    assert!(!lie_derivative_cartan(&w, &non_inv).is_zero());
}

#[test]
fn lift_and_certify() {
    let omega = killing_form(&fixtures::sl2()).unwrap();
    let lifted = lift_roytenberg(&omega, &policy()).unwrap();
    assert_eq!(lifted.comps().len(), 1);
    assert!(certify_closed(&lifted).all_pass());

    let area = area_form(&fixtures::zero(2)).unwrap();
    let lifted = lift_roytenberg(&area, &policy()).unwrap();
    assert!(certify_closed(&lifted).all_pass());
    let area = area_form(&fixtures::tangent(2)).unwrap();
    let err = lift_roytenberg(&area, &policy()).unwrap_err();
    assert!(matches!(err, SymplecticError::NotRoytenberg(ref s) if s.starts_with("q_invariant")));

    // x dy dz on R^3 is not closed
    let t3 = fixtures::tangent(3);
    let w = WeilAlgebra::new(&t3, &flat(&t3)).unwrap();
    let eta = w.alg().mul(&w.dx(1), &w.dx(2)).scale_poly(&MultiPoly::var(0));
    let eta = TwoForm::new(&t3, &flat(&t3), 0, eta).unwrap();
    let err = lift_roytenberg(&eta, &policy()).unwrap_err();
    assert!(matches!(err, SymplecticError::NotRoytenberg(ref s) if s.starts_with("closed")));

    let degenerate = degenerate_sl2();
    assert!(matches!(
        lift_roytenberg(&degenerate, &policy()),
        Err(SymplecticError::NotRoytenberg(_))
    ));
}

#[test]
fn certify_closed_examples() {
    let t3 = fixtures::tangent(3);
    let nabla = flat(&t3);
    let empty = ClosedTwoForm::new(&t3, &nabla, 1, vec![]).unwrap();
    assert!(certify_closed(&empty).all_pass());
    let zeros = ClosedTwoForm::new(&t3, &nabla, 1, vec![Elem::zero(), Elem::zero()]).unwrap();
    assert!(certify_closed(&zeros).all_pass());

    let w = WeilAlgebra::new(&t3, &nabla).unwrap();
    let perturbed = w.alg().mul_all(&[w.dx(0), w.dx(1), w.dx(2)]).scale_poly(&MultiPoly::var(0));
    let seq = ClosedTwoForm::new(&t3, &nabla, 1, vec![Elem::zero(), perturbed]).unwrap();
    let report = certify_closed(&seq);
    let v = report.get("closed").unwrap();
    assert!(!v.pass);
    assert!(v.witness.as_ref().unwrap().starts_with("rung i = 0"));
}

#[test]
fn closed_form_shape_errors() {
    let sl = fixtures::sl2();
    let nabla = flat(&sl);
    let w = WeilAlgebra::new(&sl, &nabla).unwrap();
    let too_long = vec![Elem::zero(); 5];
    assert!(matches!(
        ClosedTwoForm::new(&sl, &nabla, 2, too_long),
        Err(SymplecticError::SequenceTooLong { len: 5, cap: 4 })
    ));
    let wrong = w.alg().mul(&w.zeta(0), &w.zeta(1));
    assert!(matches!(
        TwoForm::new(&sl, &nabla, 1, wrong.clone()),
        Err(SymplecticError::Degree { index: 0, .. })
    ));
    assert!(matches!(
        ClosedTwoForm::new(&sl, &nabla, 2, vec![Elem::zero(), wrong]),
        Err(SymplecticError::Degree { index: 1, .. })
    ));
    assert!(matches!(area_form(&sl), Err(SymplecticError::Mismatch(_))));
    assert!(matches!(
        pairing_form(&fixtures::tangent(1), &[vec![q(1)]]),
        Err(SymplecticError::Mismatch(_))
    ));
}

#[test]
fn killing_transfers_to_enh_sl2() {
    let sl = fixtures::sl2();
    let omega = lift_roytenberg(&killing_form(&sl).unwrap(), &policy()).unwrap();
    for k in 1..=2 {
        let e = build_enh(&sl, &flat(&sl), k).unwrap();
        let report = transfer_to_enh(&omega, &e, &policy()).unwrap();
        assert!(report.all_pass(), "{:?}", report);
        let forms = push_to_enh(&omega, &e).unwrap();
        let a = &forms.alg;
        // over a point j_inf(xi) = eta, so the image is the same pairing on deta
        let deta = |i: usize| a.gen(3 + i);
        let expected = a
            .mul(&deta(0), &deta(1))
            .scale(&q(4))
            .add(&a.mul(&deta(2), &deta(2)).scale(&q(4)));
        assert_eq!(forms.images[0], expected);
    }
}

#[test]
fn area_form_transfers_to_the_grothendieck_model() {
    let x = fixtures::zero(2);
    let omega = lift_roytenberg(&area_form(&x).unwrap(), &policy()).unwrap();
    for k in 1..=2 {
        let e = build_enh(&x, &flat(&x), k).unwrap();
        let report = transfer_to_enh(&omega, &e, &policy()).unwrap();
        assert!(report.all_pass(), "K={k}: {:?}", report);
        let forms = push_to_enh(&omega, &e).unwrap();
        let a = &forms.alg;
        // rank 0: generators are dx, dy then dy_x, dy_y
        assert_eq!(forms.images[0], a.mul(&a.gen(2), &a.gen(3)));
    }
}

#[test]
fn tangent_area_form_pushes_forward_but_is_not_closed() {
    let t = fixtures::tangent(2);
    let w = WeilAlgebra::new(&t, &flat(&t)).unwrap();
    let seq = ClosedTwoForm::new(&t, &flat(&t), 0, vec![w.alg().mul(&w.dx(0), &w.dx(1))]).unwrap();
    for nabla in [flat(&t), fixtures::tangent2_curved_connection(&t)] {
        let e = build_enh(&t, &nabla, 2).unwrap();
        let forms = push_to_enh(&seq, &e).unwrap();
        let a = &forms.alg;
        let (r, n) = (2, 2);
        assert_eq!(forms.images[0], a.mul(&a.gen(r + n), &a.gen(r + n + 1)));
        let report = transfer_to_enh(&seq, &e, &policy()).unwrap();
        assert!(!report.get("source_closed").unwrap().pass);
        assert!(!report.get("enh_closed").unwrap().pass);
        assert!(!report.get("enh_nondegenerate").unwrap().pass);
    }
}

#[test]
fn degenerate_fails_at_graded_level() {
    let sl = fixtures::sl2();
    let omega = degenerate_sl2();
    let seq = ClosedTwoForm::new(&sl, &flat(&sl), 2, vec![omega.value().clone()]).unwrap();
    let e = build_enh(&sl, &flat(&sl), 1).unwrap();
    let report = transfer_to_enh(&seq, &e, &policy()).unwrap();
    let v = report.get("enh_nondegenerate").unwrap();
    assert!(!v.pass);
    assert!(v.witness.as_ref().unwrap().contains("kernel vector"));
}

#[test]
fn transfer_rejects_a_different_algebroid() {
    let omega = lift_roytenberg(&killing_form(&fixtures::sl2()).unwrap(), &policy()).unwrap();
    let ab = fixtures::abelian(3);
    let e = build_enh(&ab, &flat(&ab), 1).unwrap();
    assert!(matches!(
        transfer_to_enh(&omega, &e, &policy()),
        Err(SymplecticError::Mismatch(_))
    ));
}

#[test]
fn transfer_preserves_closedness_on_all_fixtures() {
    // forms of constant coefficients in every degree-two slot pair that certify on the source
    let sl = fixtures::sl2();
    let t = fixtures::tangent(2);
    let cases: Vec<(LieAlgebroidModel, ClosedTwoForm)> = vec![
        (sl.clone(), lift_roytenberg(&killing_form(&sl).unwrap(), &policy()).unwrap()),
        (fixtures::zero(2), lift_roytenberg(&area_form(&fixtures::zero(2)).unwrap(), &policy()).unwrap()),
        (t.clone(), ClosedTwoForm::new(&t, &flat(&t), 0, vec![]).unwrap()),
    ];
    for (l, omega) in cases {
        for k in 1..=3 {
            let e = build_enh(&l, &flat(&l), k).unwrap();
            let report = transfer_to_enh(&omega, &e, &policy()).unwrap();
            assert!(report.get("enh_closed").unwrap().pass, "{:?}", report);
        }
    }
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..20, 1i64..7, any::<bool>()).prop_map(|(n, d, neg)| qf(if neg { -n } else { n }, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nondegeneracy_is_invariant_under_rescaling(c in nonzero_rational()) {
        let cases = [killing_form(&fixtures::sl2()).unwrap(), degenerate_sl2(), area_form(&fixtures::tangent(2)).unwrap()];
        for omega in cases {
            let a = nondegenerate(&omega, &policy()).unwrap();
            let b = nondegenerate(&omega.scale(&c), &policy()).unwrap();
            prop_assert_eq!(a.holds, b.holds);
            prop_assert_eq!(a.strict, b.strict);
        }
    }

    #[test]
    fn lifts_of_roytenberg_forms_certify(c in nonzero_rational()) {
        for omega in [killing_form(&fixtures::sl2()).unwrap().scale(&c), area_form(&fixtures::zero(2)).unwrap().scale(&c)] {
            prop_assert!(check_roytenberg(&omega, &policy()).all_pass());
            let lifted = lift_roytenberg(&omega, &policy()).unwrap();
            prop_assert!(certify_closed(&lifted).all_pass());
        }
    }

    #[test]
    fn lie_derivative_methods_agree_on_random_forms(coeffs in proptest::collection::vec(-3i64..4, 6), seed in 0u64..1000) {
        let t = fixtures::tangent(2);
        let nabla = fixtures::tangent2_curved_connection(&t);
        let w = WeilAlgebra::new(&t, &nabla).unwrap();
        let a = w.alg();
        let slots = [w.dx(0), w.dx(1), w.zeta(0), w.zeta(1)];
        let mut value = Elem::zero();
        let mut idx = 0;
        for i in 0..4 {
            for j in i..4 {
                if idx < coeffs.len() {
                    let f = MultiPoly::var((seed as usize + idx) % 2).scale(&q(coeffs[idx])).add(&MultiPoly::constant(q(1)));
                    value.add_assign(&a.mul(&slots[i], &slots[j]).scale_poly(&f));
                }
                idx += 1;
            }
        }
        prop_assert_eq!(lie_derivative_cartan(&w, &value), lie_derivative_direct(&w, &value));
    }
}
