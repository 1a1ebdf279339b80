use std::collections::BTreeMap;

use algebroid::exact_algebra::complex::coordinate_monomials;
use algebroid::exact_algebra::rational::{q, qf};
use algebroid::exact_algebra::{ComplexSlice, ExactError, Matrix, MultiPoly, PolyForm};
use proptest::prelude::*;

fn x() -> MultiPoly {
    MultiPoly::var(0)
}

fn y() -> MultiPoly {
    MultiPoly::var(1)
}

#[test]
fn differentiate_examples() {
    let names = vec!["x".to_string(), "y".to_string()];
    let p = x().pow(2).mul(&y());
    assert_eq!(p.differentiate_named(&names, "x").unwrap(), x().mul(&y()).scale(&q(2)));
    assert!(x().pow(2).differentiate_named(&names, "y").unwrap().is_zero());
    let c = x().pow(3).scale(&qf(3, 2));
    assert_eq!(c.differentiate(0), x().pow(2).scale(&qf(9, 2)));
    assert_eq!(
        p.differentiate_named(&names, "z").unwrap_err(),
        ExactError::UnknownVariable("z".into())
    );
}

#[test]
fn wedge_examples() {
    let dx = PolyForm::dx(2, 0);
    let dy = PolyForm::dx(2, 1);
    let dxdy = dx.wedge(&dy).unwrap();
    assert_eq!(dxdy.component(&[0, 1]), MultiPoly::one());
    assert_eq!(dy.wedge(&dx).unwrap(), dxdy.scale(&q(-1)));
    assert!(dx.wedge(&dx).unwrap().is_zero());
    let a = PolyForm::function(2, x()).wedge(&dy).unwrap();
    let b = PolyForm::function(2, y()).wedge(&dx).unwrap();
    let ab = a.wedge(&b).unwrap();
    assert_eq!(ab.component(&[0, 1]), x().mul(&y()).scale(&q(-1)));
    assert_eq!(dx.wedge(&PolyForm::dx(3, 0)).unwrap_err(), ExactError::PatchMismatch(2, 3));
}

#[test]
fn de_rham_examples() {
    assert_eq!(PolyForm::function(2, x()).de_rham(), PolyForm::dx(2, 0));
    let xdy = PolyForm::function(2, x()).wedge(&PolyForm::dx(2, 1)).unwrap();
    assert_eq!(xdy.de_rham(), PolyForm::dx(2, 0).wedge(&PolyForm::dx(2, 1)).unwrap());
}

fn complex(spaces: &[(i32, usize)], maps: Vec<(i32, Matrix)>) -> ComplexSlice {
    let spaces: BTreeMap<i32, Vec<String>> = spaces
        .iter()
        .map(|(k, n)| (*k, (0..*n).map(|i| format!("b{}_{}", k, i)).collect()))
        .collect();
    ComplexSlice::new(spaces, maps.into_iter().collect()).unwrap()
}

#[test]
fn two_term_complexes() {
    let zero = complex(&[(0, 1), (1, 1)], vec![(0, Matrix::from_rows(vec![vec![q(0)]]))]);
    let h = zero.cohomology().unwrap();
    assert_eq!((h.dim(0), h.dim(1)), (1, 1));
    let id = complex(&[(0, 1), (1, 1)], vec![(0, Matrix::identity(1))]);
    let h = id.cohomology().unwrap();
    assert_eq!((h.dim(0), h.dim(1)), (0, 0));
}

/// Truncated polynomial de Rham complex on one variable: `x^k -> k x^{k-1} dx`
/// for `k <= w`, with 1-forms `x^k dx` for `k < w`.
fn truncated_de_rham(w: u32) -> ComplexSlice {
    let mut m = Matrix::zeros(w as usize, w as usize + 1);
    for k in 0..=w {
        let img = PolyForm::function(1, x().pow(k)).de_rham();
        for (e, c) in img.component(&[0]).terms() {
            let j = e.first().copied().unwrap_or(0) as usize;
            m.set(j, k as usize, c.clone());
        }
    }
    complex(&[(0, w as usize + 1), (1, w as usize)], vec![(0, m)])
}

#[test]
fn truncated_de_rham_has_poincare_lemma() {
    let h = truncated_de_rham(3).cohomology().unwrap();
    // oracle: the matrix is diag(1, 2, 3) shifted one column, so rank 3
    assert_eq!((h.dim(0), h.dim(1)), (1, 0));
    assert_eq!(h.representatives[&0].len(), 1);
}

#[test]
fn complex_violation_has_witness() {
    let c = complex(
        &[(0, 1), (1, 1), (2, 1)],
        vec![(0, Matrix::identity(1)), (1, Matrix::identity(1))],
    );
    match c.cohomology() {
        Err(ExactError::ComplexViolation { degree, witness, .. }) => {
            assert_eq!(degree, 0);
            assert_eq!(witness.len(), 1);
        }
        other => panic!("expected violation, got {:?}", other),
    }
}

fn poly_strategy(nvars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    let monos: Vec<Vec<u32>> = (0..=max_deg).flat_map(|d| coordinate_monomials(nvars, d)).collect();
    let n = monos.len();
    prop::collection::vec(-4i64..=4, n).prop_map(move |cs| {
        let mut p = MultiPoly::zero();
        for (e, c) in monos.iter().zip(cs) {
            p.add_term(e.clone(), q(c));
        }
        p
    })
}

fn form_strategy(dim: usize, degree: usize) -> impl Strategy<Value = PolyForm> {
    let subsets: Vec<Vec<usize>> = (0..1usize << dim)
        .map(|m| (0..dim).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| s.len() == degree)
        .collect();
    let n = subsets.len();
    prop::collection::vec(poly_strategy(dim, 2), n).prop_map(move |ps| {
        let mut f = PolyForm::zero(dim);
        for (s, p) in subsets.iter().zip(ps) {
            f.add_component(s.clone(), p);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn de_rham_squares_to_zero(a in form_strategy(3, 0), b in form_strategy(3, 1), c in form_strategy(3, 2)) {
        for f in [a, b, c] {
            prop_assert!(f.de_rham().de_rham().is_zero());
        }
    }

    #[test]
    fn wedge_is_graded_commutative(a in form_strategy(3, 1), b in form_strategy(3, 2), c in form_strategy(3, 1)) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().scale(&q(-1)));
    }

    #[test]
    fn de_rham_is_a_derivation(a in form_strategy(2, 1), b in form_strategy(2, 0)) {
        let lhs = a.wedge(&b).unwrap().de_rham();
        let rhs = a.de_rham().wedge(&b).unwrap().add(&a.wedge(&b.de_rham()).unwrap().scale(&q(-1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_characteristic_identity(entries in prop::collection::vec(-2i64..=2, 6), n0 in 1usize..3) {
        // C^0 -> C^1 -> C^2 with d1 d0 = 0 forced by choosing d1 from the cokernel of d0
        let d0 = Matrix::from_rows((0..3).map(|i| (0..n0).map(|j| q(entries[(i * n0 + j) % 6])).collect()).collect());
        let left_kernel = d0.transpose().kernel();
        let d1 = if left_kernel.is_empty() {
            Matrix::zeros(1, 3)
        } else {
            Matrix::from_rows(left_kernel)
        };
        let c = complex(&[(0, n0), (1, 3), (2, d1.rows())], vec![(0, d0), (1, d1)]);
        let h = c.cohomology().unwrap();
        prop_assert_eq!(c.euler_characteristic(), h.euler());
    }

    #[test]
    fn arithmetic_is_exact(a in poly_strategy(2, 2), b in poly_strategy(2, 2)) {
        let s = a.add(&b).sub(&b);
        prop_assert_eq!(s, a.clone());
        let p = a.mul(&b);
        let pt = [qf(1, 3), qf(-2, 7)];
        prop_assert_eq!(p.eval(&pt), a.eval(&pt) * b.eval(&pt));
    }
}
