//! Small reference algebroids used by tests, benchmarks and the CLI.

use crate::algebroid::{BundleModel, ConnectionModel, LieAlgebroidModel, Patch};
use crate::exact_algebra::rational::q;
use crate::exact_algebra::MultiPoly;

fn c(n: i64) -> MultiPoly {
    MultiPoly::constant(q(n))
}

fn bundle(patch: Patch, frame: &[(&str, i32)]) -> BundleModel {
    BundleModel::new(patch, frame.iter().map(|(n, d)| (n.to_string(), *d)).collect()).expect("fixture frame")
}

/// `sl2` over a point: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2() -> LieAlgebroidModel {
    let mut l = LieAlgebroidModel::zero(bundle(Patch::point(), &[("e", 0), ("f", 0), ("h", 0)]));
    l.set_bracket(0, 1, 2, c(1)).unwrap();
    l.set_bracket(2, 0, 0, c(2)).unwrap();
    l.set_bracket(2, 1, 1, c(-2)).unwrap();
    l
}

/// Tangent algebroid of an `n`-dimensional patch in the coordinate frame `e_<x>`.
pub fn tangent(n: usize) -> LieAlgebroidModel {
    let patch = Patch::with_dim(n);
    let frame: Vec<(String, i32)> = patch.names().iter().map(|x| (format!("e_{}", x), 0)).collect();
    let mut l = LieAlgebroidModel::zero(BundleModel::new(patch, frame).unwrap());
    for i in 0..n {
        l.set_anchor(i, i, MultiPoly::one()).unwrap();
    }
    l
}

/// Rank-1 action algebroid of `d/dx` on the line.
pub fn action_dx() -> LieAlgebroidModel {
    let mut l = LieAlgebroidModel::zero(bundle(Patch::with_dim(1), &[("e", 0)]));
    l.set_anchor(0, 0, MultiPoly::one()).unwrap();
    l
}

/// The zero algebroid (rank 0) on an `n`-dimensional patch.
pub fn zero(n: usize) -> LieAlgebroidModel {
    LieAlgebroidModel::zero(BundleModel::new(Patch::with_dim(n), Vec::new()).unwrap())
}

/// Abelian rank-1 Lie algebra over a point.
pub fn abelian_rank1() -> LieAlgebroidModel {
    LieAlgebroidModel::zero(bundle(Patch::point(), &[("e", 0)]))
}

/// Abelian Lie algebra `Q^n` over a point.
pub fn abelian(n: usize) -> LieAlgebroidModel {
    let frame: Vec<(String, i32)> = (1..=n).map(|i| (format!("e{}", i), 0)).collect();
    LieAlgebroidModel::zero(BundleModel::new(Patch::point(), frame).unwrap())
}

/// Cone of the identity of `sl2`: `u_a` in degree -1, `a` in degree 0, `d u_a = a`.
pub fn sl2_cone() -> LieAlgebroidModel {
    let mut l = LieAlgebroidModel::zero(bundle(
        Patch::point(),
        &[("u_e", -1), ("u_f", -1), ("u_h", -1), ("e", 0), ("f", 0), ("h", 0)],
    ));
    let base = sl2();
    for a in 0..3 {
        for b in 0..3 {
            for k in 0..3 {
                let s = base.bracket(a, b, k).clone();
                if s.is_zero() {
                    continue;
                }
                l.set_bracket(a + 3, b + 3, k + 3, s.clone()).unwrap();
                l.set_bracket(a + 3, b, k, s).unwrap();
            }
        }
        l.set_internal_diff(a, a + 3, MultiPoly::one()).unwrap();
    }
    l
}

/// Tangent algebroid of the line plus an acyclic pair `u -> v` (`|u| = -1`, `|v| = 0`).
pub fn tangent_plus_acyclic() -> LieAlgebroidModel {
    let mut l = LieAlgebroidModel::zero(bundle(Patch::with_dim(1), &[("e_x", 0), ("u", -1), ("v", 0)]));
    l.set_anchor(0, 0, MultiPoly::one()).unwrap();
    l.set_internal_diff(1, 2, MultiPoly::one()).unwrap();
    l
}

/// Line with anchors `d/dx`, `x d/dx` and zero bracket: the anchor is not a morphism.
pub fn anchor_not_morphism() -> LieAlgebroidModel {
    let mut l = LieAlgebroidModel::zero(bundle(Patch::with_dim(1), &[("a", 0), ("b", 0)]));
    l.set_anchor(0, 0, MultiPoly::one()).unwrap();
    l.set_anchor(1, 0, MultiPoly::var(0)).unwrap();
    l
}

/// Rank-3 brackets over a point with entries in `{-1, 0, 1}` violating Jacobi.
///
/// The search enumerates the nine independent constants `c^k_{ab}` (`a < b`) in a
/// fixed order and returns the first `count` violators.
pub fn jacobi_violators(count: usize) -> Vec<LieAlgebroidModel> {
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut out = Vec::new();
    for code in 1..3usize.pow(9) {
        let mut l = LieAlgebroidModel::zero(bundle(Patch::point(), &[("a", 0), ("b", 0), ("c", 0)]));
        let mut rest = code;
        for &(a, b) in &pairs {
            for k in 0..3 {
                let v = (rest % 3) as i64 - 1;
                rest /= 3;
                if v != 0 {
                    l.set_bracket(a, b, k, c(v)).unwrap();
                }
            }
        }
        if !crate::algebroid::check_axioms(&l).all_pass() {
            out.push(l);
            if out.len() == count {
                break;
            }
        }
    }
    out
}

/// A connection on the tangent bundle of the line with `nabla_x e_x = x e_x`.
pub fn tangent1_curvy_connection(l: &LieAlgebroidModel) -> ConnectionModel {
    ConnectionModel::new(l.bundle(), vec![vec![vec![MultiPoly::var(0)]]]).unwrap()
}

/// Non-flat connection on the tangent bundle of the plane: `nabla_y e_x = x e_y`.
pub fn tangent2_curved_connection(l: &LieAlgebroidModel) -> ConnectionModel {
    let z = MultiPoly::zero();
    ConnectionModel::new(
        l.bundle(),
        vec![
            vec![vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), MultiPoly::var(0)], vec![z.clone(), z]],
        ],
    )
    .unwrap()
}

/// Named valid fixtures.
pub fn valid() -> Vec<(&'static str, LieAlgebroidModel)> {
    vec![
        ("sl2", sl2()),
        ("tangent2", tangent(2)),
        ("action_dx", action_dx()),
        ("tangent1", tangent(1)),
        ("zero1", zero(1)),
        ("abelian1", abelian_rank1()),
        ("sl2_cone", sl2_cone()),
        ("tangent_plus_acyclic", tangent_plus_acyclic()),
    ]
}

/// Named invalid fixtures.
pub fn invalid() -> Vec<(&'static str, LieAlgebroidModel)> {
    let mut v = jacobi_violators(2);
    let b = v.pop().unwrap();
    let a = v.pop().unwrap();
    vec![("jacobi_violator_1", a), ("jacobi_violator_2", b), ("anchor_not_morphism", anchor_not_morphism())]
}
