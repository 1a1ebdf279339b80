//! The adjoint representation, realized on derivations of `C(L)^#` split by a connection.

use crate::algebroid::{BundleModel, CeAlgebra, ConnectionModel, LieAlgebroidModel};
use crate::exact_algebra::{Derivation, Elem};

use super::{RepMap, RepUH, RuthError};

/// Frames of the adjoint fiber: tangent directions first, then the frame of `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointFrame {
    Tangent(usize),
    Fiber(usize),
}

impl AdjointFrame {
    pub fn all(l: &LieAlgebroidModel) -> Vec<AdjointFrame> {
        (0..l.dim())
            .map(AdjointFrame::Tangent)
            .chain((0..l.rank()).map(AdjointFrame::Fiber))
            .collect()
    }

    pub fn index(self, l: &LieAlgebroidModel) -> usize {
        match self {
            AdjointFrame::Tangent(i) => i,
            AdjointFrame::Fiber(a) => l.dim() + a,
        }
    }
}

fn check_connection(l: &LieAlgebroidModel, nabla: &ConnectionModel) -> Result<(), RuthError> {
    if nabla.bundle() != l.bundle() {
        return Err(RuthError::Shape("connection is not on the bundle of the algebroid".into()));
    }
    Ok(())
}

/// `H_i(xi^k) = -sum_a gamma(i, a, k) xi^a`.
fn horizontal_on_xi(ce: &CeAlgebra, nabla: &ConnectionModel, i: usize, k: usize) -> Elem {
    let mut out = Elem::zero();
    for a in 0..ce.model().rank() {
        let g = nabla.gamma(i, a, k);
        if !g.is_zero() {
            out.add_assign(&ce.xi(a).scale_poly(&g.neg()));
        }
    }
    out
}

/// Basis derivation of `C(L)^#`: the horizontal lift `H_i` or `d/d xi^k`.
pub fn basis_derivation(ce: &CeAlgebra, nabla: &ConnectionModel, f: AdjointFrame) -> Derivation {
    let l = ce.model();
    let alg = ce.alg();
    match f {
        AdjointFrame::Tangent(i) => {
            let mut d = Derivation::zero(alg, 0);
            d.on_vars[i] = Elem::one();
            for k in 0..l.rank() {
                d.on_gens[k] = horizontal_on_xi(ce, nabla, i, k);
            }
            d
        }
        AdjointFrame::Fiber(k) => {
            let mut d = Derivation::zero(alg, l.degree(k) - 1);
            d.on_gens[k] = Elem::one();
            d
        }
    }
}

/// Coefficients of a derivation of `C(L)^#` in the basis `H_i, d/d xi^k`.
pub fn decompose(ce: &CeAlgebra, nabla: &ConnectionModel, y: &Derivation) -> Vec<Elem> {
    let l = ce.model();
    let alg = ce.alg();
    let mut out: Vec<Elem> = (0..l.dim()).map(|i| y.on_vars[i].clone()).collect();
    for k in 0..l.rank() {
        let mut c = y.on_gens[k].clone();
        for i in 0..l.dim() {
            if y.on_vars[i].is_zero() {
                continue;
            }
            c = c.sub(&alg.mul(&y.on_vars[i], &horizontal_on_xi(ce, nabla, i, k)));
        }
        out.push(alg.truncate(&c));
    }
    out
}

/// `sum_j c_j B_j` for coefficients in the adjoint frame.
pub fn recompose(ce: &CeAlgebra, nabla: &ConnectionModel, coeffs: &[Elem]) -> Derivation {
    let alg = ce.alg();
    let l = ce.model();
    let mut out: Option<Derivation> = None;
    for (f, c) in AdjointFrame::all(l).into_iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let b = basis_derivation(ce, nabla, f);
        let deg = match alg.degree(c) {
            Some(Some(d)) => d,
            _ => 0,
        };
        let term = b.left_mul(alg, c, deg);
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    out.unwrap_or_else(|| Derivation::zero(alg, 0))
}

/// Adjoint representation for the connection `nabla`: `D(eps_B)` is the decomposition of `[d_L, B]`.
pub fn adjoint(l: &LieAlgebroidModel, nabla: &ConnectionModel) -> Result<RepUH, RuthError> {
    check_connection(l, nabla)?;
    let ce = CeAlgebra::new(l);
    let names = l.patch().names();
    let mut frame: Vec<(String, i32)> = names.iter().map(|x| (format!("T_{}", x), 1)).collect();
    frame.extend(l.bundle().frame().iter().map(|(n, d)| (format!("L_{}", n), *d)));
    let fiber = BundleModel::new(l.patch().clone(), frame)?;
    let dl = ce.differential();
    let ops = AdjointFrame::all(l)
        .into_iter()
        .map(|f| {
            let b = basis_derivation(&ce, nabla, f);
            decompose(&ce, nabla, &ce.alg().commutator(dl, &b))
        })
        .collect();
    RepUH::new(l, fiber, ops)
}

/// Dual of the adjoint representation.
pub fn coadjoint(l: &LieAlgebroidModel, nabla: &ConnectionModel) -> Result<RepUH, RuthError> {
    adjoint(l, nabla)?.dual()
}

/// Isomorphism `ad_{nabla1} -> ad_{nabla2}` induced by the identity on derivations.
pub fn adjoint_change_of_connection(
    l: &LieAlgebroidModel,
    nabla1: &ConnectionModel,
    nabla2: &ConnectionModel,
) -> Result<RepMap, RuthError> {
    let src = adjoint(l, nabla1)?;
    let tgt = adjoint(l, nabla2)?;
    let ce = src.ce();
    let comps = AdjointFrame::all(l)
        .into_iter()
        .map(|f| decompose(ce, nabla2, &basis_derivation(ce, nabla1, f)))
        .collect();
    RepMap::new(&src, &tgt, comps)
}
