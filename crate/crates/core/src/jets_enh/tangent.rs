use crate::algebroid::{ConnectionModel, LieAlgebroidModel};
use crate::exact_algebra::{Derivation, Elem};
use crate::ruth::adjoint::{basis_derivation, decompose};
use crate::ruth::map::poly_determinant;
use crate::ruth::{adjoint, AdjointFrame};
use crate::verdict::{CheckReport, Verdict};

use super::enh::{build_enh, EnhSpace};
use super::module::enh_mod;
use super::EnhError;

/// Prolongs a derivation of `C(L)` to an `Ω`-linear derivation of `Ĉ(enh L)`.
pub(crate) fn prolong_derivation(e: &EnhSpace, b: &Derivation) -> Derivation {
    let n = e.dim();
    let mut j = Derivation::zero(e.alg(), b.degree);
    for i in 0..n {
        j.on_vars[n + i] = e.lift_naive(&b.on_vars[i]);
    }
    for a in 0..e.rank() {
        j.on_gens[a] = e.lift_naive(&b.on_gens[a]);
    }
    e.conjugate(&j)
}

fn combine(e: &EnhSpace, coeffs: &[Elem], psi: &[Derivation], degree: i32) -> Derivation {
    let alg = e.alg();
    let mut out = Derivation::zero(alg, degree);
    for (c, p) in coeffs.iter().zip(psi) {
        if c.is_zero() {
            continue;
        }
        let cd = alg.degree(c).flatten().unwrap_or(0);
        let mut term = p.left_mul(alg, c, cd);
        term.degree = degree;
        out = out.add(&term);
    }
    out
}

fn differ(e: &EnhSpace, a: &Derivation, b: &Derivation) -> Option<String> {
    let alg = e.alg();
    let names: Vec<String> = alg
        .var_names()
        .iter()
        .cloned()
        .chain(alg.gens().iter().map(|g| g.name.clone()))
        .collect();
    let lhs = a.on_vars.iter().chain(&a.on_gens);
    let rhs = b.on_vars.iter().chain(&b.on_gens);
    for ((x, y), name) in lhs.zip(rhs).zip(names) {
        let (x, y) = (e.reduce(x), e.reduce(y));
        if x != y {
            return Some(format!("on {}: {} vs {}", name, e.display(&x), e.display(&y)));
        }
    }
    None
}

/// Compares `enh_mod(ad L [1])` with the tangent complex of `enh L`, realized as `Ω`-linear
/// derivations of `Ĉ(enh L)`. The shift is taken without a sign twist.
pub fn tangent_compare(l: &LieAlgebroidModel, nabla: &ConnectionModel, order: u32) -> Result<CheckReport, EnhError> {
    let e = build_enh(l, nabla, order)?;
    let ad = adjoint(l, nabla)?;
    let modl = enh_mod(&e, &ad, &ConnectionModel::flat(ad.fiber()))?;
    let ce = e.ce();
    let frames = AdjointFrame::all(l);
    let basis: Vec<Derivation> = frames.iter().map(|f| basis_derivation(ce, nabla, *f)).collect();
    let psi: Vec<Derivation> = basis.iter().map(|b| prolong_derivation(&e, b)).collect();
    let mut report = CheckReport::new();

    // frame degrees shifted by one agree with derivation degrees, and the Sym^0 parts on
    // generators form an invertible matrix
    let gens = e.v_generators();
    let mut generator = None;
    for (k, p) in psi.iter().enumerate() {
        if p.degree != ad.fiber().degree(k) - 1 {
            generator = Some(format!("degree of {} does not match", ad.fiber().name(k)));
        }
    }
    let n = e.dim();
    let value = |p: &Derivation, idx: usize| -> Elem {
        if idx < n {
            p.on_vars[n + idx].clone()
        } else {
            p.on_gens[idx - n].clone()
        }
    };
    let matrix: Vec<Vec<_>> = psi
        .iter()
        .map(|p| (0..gens.len()).map(|g| e.sym_component(&value(p, g), 0).coeff(&[])).collect())
        .collect();
    if generator.is_none() && !poly_determinant(&matrix).as_constant().is_some_and(|c| c != num_traits::Zero::zero()) {
        generator = Some("generator matrix is not invertible".into());
    }
    report.push(Verdict::from_witness("generator_module", generator));

    let d = e.derivation();
    let mut diff = None;
    for (k, p) in psi.iter().enumerate() {
        let lhs = e.alg().commutator(d, p);
        let rhs = combine(&e, &modl.ops()[k], &psi, p.degree + 1);
        if let Some(w) = differ(&e, &lhs, &rhs) {
            diff = Some(format!("frame {}: {}", ad.fiber().name(k), w));
            break;
        }
    }
    let note = if n == 0 {
        "exact: no jet variables over a point".to_string()
    } else {
        format!("mod F^{}", order + 1)
    };
    report.push(Verdict::from_witness("differential_intertwining", diff).with_note(note.clone()));

    let mut bracket = None;
    'pairs: for i in 0..psi.len() {
        for j in i..psi.len() {
            let lhs = e.alg().commutator(&psi[i], &psi[j]);
            let b = ce.alg().commutator(&basis[i], &basis[j]);
            let coeffs: Vec<Elem> = decompose(ce, nabla, &b).iter().map(|c| e.j_infty(c)).collect();
            let rhs = combine(&e, &coeffs, &psi, lhs.degree);
            if let Some(w) = differ(&e, &lhs, &rhs) {
                bracket = Some(format!("pair ({}, {}): {}", ad.fiber().name(i), ad.fiber().name(j), w));
                break 'pairs;
            }
        }
    }
    report.push(Verdict::from_witness("bracket_intertwining", bracket).with_note(note));
    Ok(report)
}
