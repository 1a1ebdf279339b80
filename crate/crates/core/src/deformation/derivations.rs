//! Multiderivations as derivations of `C(L)^#` via derived brackets with contractions.
//!
//! For a derivation `B` of `Sym(L^∨[-1])`, the multiderivation is
//! `D(s e_{a_0}, .., s e_{a_n}) = [[..[B, i_{a_0}], ..], i_{a_n}]` read on the
//! generators `xi^k` at `xi = 0`, where `i_a = d/d xi^a`. The symbol is the
//! `n`-fold bracket read on coordinates. Both directions carry the degree sign
//! `(-1)^{t(t-1)/2}`, which turns the Gerstenhaber bracket into the graded commutator.

use std::collections::BTreeMap;

use crate::algebroid::{BundleModel, CeAlgebra, LieAlgebroidModel};
use crate::exact_algebra::{Derivation, Elem, GcAlgebra, Mono, MultiPoly, Rational};

use super::bracket::DerSum;
use super::multider::{multisets, Multiderivation};
use super::DeformationError;

/// The graded algebra `C(L)^# = Sym(L^∨[-1])` of a bundle (no differential).
pub fn sharp_algebra(bundle: &BundleModel) -> GcAlgebra {
    CeAlgebra::new(&LieAlgebroidModel::zero(bundle.clone())).alg().clone()
}

/// Contraction `d/d xi^a`.
pub fn contraction(alg: &GcAlgebra, a: usize) -> Derivation {
    let mut d = Derivation::zero(alg, -alg.gens()[a].degree);
    d.on_gens[a] = Elem::one();
    d
}

fn iterated(alg: &GcAlgebra, b: &Derivation, tuple: &[usize]) -> Derivation {
    let mut x = b.clone();
    for &a in tuple {
        x = alg.commutator(&x, &contraction(alg, a));
    }
    x
}

/// `(-1)^{t(t-1)/2}`.
pub fn degree_twist(t: i32) -> Rational {
    let t = t as i64;
    crate::exact_algebra::rational::sign(t * (t - 1) / 2)
}

fn constant_part(e: &Elem) -> MultiPoly {
    e.coeff(&[])
}

fn xi_degree(m: &[u16]) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Largest arity present in a derivation.
fn max_arity(b: &Derivation) -> i32 {
    let g = b
        .on_gens
        .iter()
        .flat_map(|e| e.terms().map(|(m, _)| xi_degree(m) as i32 - 1))
        .max()
        .unwrap_or(-1);
    let v = b
        .on_vars
        .iter()
        .flat_map(|e| e.terms().map(|(m, _)| xi_degree(m) as i32))
        .max()
        .unwrap_or(-1);
    g.max(v)
}

/// Multiderivation components of a derivation of `C(L)^#`.
pub fn derivation_to_multider(bundle: &BundleModel, b: &Derivation) -> Result<DerSum, DeformationError> {
    let alg = sharp_algebra(bundle);
    let b = &b.scale(&degree_twist(b.degree));
    let mut out = DerSum::zero(bundle, b.degree);
    for arity in -1..=max_arity(b) {
        let mut d = Multiderivation::zero(bundle, arity, b.degree);
        let m = (arity + 1) as usize;
        for tuple in multisets(bundle, m) {
            let x = iterated(&alg, b, &tuple);
            let v: Vec<MultiPoly> = x.on_gens.iter().map(constant_part).collect();
            d.set_frame(&tuple, v)?;
        }
        if arity >= 0 && bundle.patch().dim() > 0 {
            for tuple in multisets(bundle, m - 1) {
                let x = iterated(&alg, b, &tuple);
                let v: Vec<MultiPoly> = x.on_vars.iter().map(constant_part).collect();
                if v.iter().all(MultiPoly::is_zero) {
                    continue;
                }
                d.set_symbol(&tuple, v)?;
            }
        }
        out.add_part(d)?;
    }
    Ok(out)
}

/// Builds a derivation from an operator and rejects it unless the Leibniz rule holds
/// on all products of two coordinates or generators.
pub fn derivation_to_multider_checked(
    bundle: &BundleModel,
    degree: i32,
    op: &dyn Fn(&Elem) -> Elem,
) -> Result<DerSum, DeformationError> {
    let alg = sharp_algebra(bundle);
    let mut b = Derivation::zero(&alg, degree);
    for i in 0..alg.nvars() {
        b.on_vars[i] = op(&alg.var(i));
    }
    for j in 0..alg.ngens() {
        b.on_gens[j] = op(&alg.gen(j));
    }
    if !op(&Elem::one()).is_zero() {
        return Err(DeformationError::NotDerivation("operator does not kill 1".into()));
    }
    let atoms: Vec<Elem> = (0..alg.nvars())
        .map(|i| alg.var(i))
        .chain((0..alg.ngens()).map(|j| alg.gen(j)))
        .collect();
    for p in &atoms {
        for q in &atoms {
            let prod = alg.mul(p, q);
            if prod.is_zero() {
                continue;
            }
            let lhs = alg.truncate(&op(&prod));
            let rhs = alg.apply(&b, &prod);
            if lhs != rhs {
                return Err(DeformationError::NotDerivation(format!(
                    "on {}: operator gives {} but the Leibniz rule gives {}",
                    alg.display(&prod),
                    alg.display(&lhs),
                    alg.display(&rhs)
                )));
            }
        }
    }
    derivation_to_multider(bundle, &b)
}

/// Normalization of the derived bracket of `xi^m d_target` on the tuple `m`.
fn calibration(alg: &GcAlgebra, m: &[usize], target: Target) -> Rational {
    let mono = to_mono(alg, m);
    let mut x = Derivation::zero(alg, 0);
    let elem = alg.mono_elem(&mono);
    let mdeg = alg.mono_degree(&mono);
    match target {
        Target::Gen(k) => {
            x.degree = mdeg - alg.gens()[k].degree;
            x.on_gens[k] = elem;
        }
        Target::Var(i) => {
            x.degree = mdeg;
            x.on_vars[i] = elem;
        }
    }
    let y = iterated(alg, &x, m);
    let v = match target {
        Target::Gen(k) => constant_part(&y.on_gens[k]),
        Target::Var(i) => constant_part(&y.on_vars[i]),
    };
    v.constant_term()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Target {
    Gen(usize),
    Var(usize),
}

fn to_mono(alg: &GcAlgebra, m: &[usize]) -> Mono {
    let mut mono = vec![0u16; alg.ngens()];
    for &a in m {
        mono[a] += 1;
    }
    while mono.last() == Some(&0) {
        mono.pop();
    }
    mono
}

/// The derivation of `C(L)^#` whose derived brackets reproduce `D`.
pub fn as_derivation(d: &Multiderivation) -> Derivation {
    let bundle = d.bundle();
    let alg = sharp_algebra(bundle);
    let mut b = Derivation::zero(&alg, d.degree());
    let mut cache: BTreeMap<(Vec<usize>, Target), Rational> = BTreeMap::new();
    let mut cal = |m: &[usize], t: Target| -> Rational {
        cache
            .entry((m.to_vec(), t))
            .or_insert_with(|| calibration(&alg, m, t))
            .clone()
    };
    for (tuple, v) in d.frames() {
        let mono = to_mono(&alg, tuple);
        for (k, f) in v.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let c = cal(tuple, Target::Gen(k));
            let term = alg.mono_elem(&mono).scale_poly(&f.scale(&(Rational::from_integer(1.into()) / c)));
            b.on_gens[k].add_assign(&term);
        }
    }
    for (tuple, v) in d.symbols() {
        let mono = to_mono(&alg, tuple);
        for (i, f) in v.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let c = cal(tuple, Target::Var(i));
            let term = alg.mono_elem(&mono).scale_poly(&f.scale(&(Rational::from_integer(1.into()) / c)));
            b.on_vars[i].add_assign(&term);
        }
    }
    b.scale(&degree_twist(d.degree()))
}

/// [`as_derivation`] extended over the components of a sum.
pub fn as_derivation_sum(s: &DerSum) -> Derivation {
    let alg = sharp_algebra(s.bundle());
    let mut b = Derivation::zero(&alg, s.degree());
    for p in s.parts() {
        b = b.add(&as_derivation(p));
    }
    b
}
