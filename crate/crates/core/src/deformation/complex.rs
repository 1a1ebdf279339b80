use std::collections::BTreeMap;

use num_traits::One;

use crate::algebroid::ce::weight_shift;
use crate::algebroid::{check_axioms, AlgebroidError, LieAlgebroidModel, SliceMode};
use crate::exact_algebra::complex::coordinate_monomials;
use crate::exact_algebra::poly::Exps;
use crate::exact_algebra::rational::sign;
use crate::exact_algebra::{Cohomology, ComplexSlice, Matrix, MultiPoly, Rational};

use super::bracket::DerSum;
use super::multider::{multisets, shifted, Multiderivation};
use super::DeformationError;

/// The Maurer–Cartan element `m_(0) + m_(1)` of degree 1 encoding `L`:
/// `m_(0)(s e_a) = -s(D e_a)`, `m_(1)(s e_a, s e_b) = (-1)^{|a|} s[e_a, e_b]`, symbol `rho`.
pub fn mc_of_algebroid(l: &LieAlgebroidModel) -> DerSum {
    let bundle = l.bundle();
    let r = l.rank();
    let mut m0 = Multiderivation::zero(bundle, 0, 1);
    let mut m1 = Multiderivation::zero(bundle, 1, 1);
    for a in 0..r {
        let v: Vec<MultiPoly> = (0..r).map(|k| l.internal_diff(a, k).neg()).collect();
        m0.set_frame(&[a], v).expect("internal differential raises degree by one");
        if l.degree(a) == 0 {
            let field: Vec<MultiPoly> = (0..l.dim()).map(|i| l.anchor(a, i).clone()).collect();
            m1.set_symbol(&[a], field).expect("anchor lives on degree-0 frames");
        }
    }
    for t in multisets(bundle, 2) {
        let (a, b) = (t[0], t[1]);
        let s = sign(l.degree(a) as i64);
        let v: Vec<MultiPoly> = (0..r).map(|k| l.bracket(a, b, k).scale(&s)).collect();
        m1.set_frame(&[a, b], v).expect("bracket has degree zero");
    }
    DerSum::from_parts(bundle, 1, vec![m0, m1]).expect("same bundle")
}

/// Inverse of [`mc_of_algebroid`].
pub fn algebroid_of_mc(m: &DerSum) -> Result<LieAlgebroidModel, DeformationError> {
    let bad: Vec<i32> = m.arities().into_iter().filter(|a| *a != 0 && *a != 1).collect();
    if !bad.is_empty() {
        return Err(DeformationError::BadMcArity(bad));
    }
    if m.degree() != 1 {
        return Err(DeformationError::Degree(format!("Maurer-Cartan element has degree {}", m.degree())));
    }
    let bundle = m.bundle();
    let r = bundle.rank();
    let mut l = LieAlgebroidModel::zero(bundle.clone());
    let m0 = m.part(0);
    let m1 = m.part(1);
    if !m0.symbols().is_empty() {
        return Err(DeformationError::Degree("m_(0) must have zero symbol".into()));
    }
    for a in 0..r {
        let v = m0.frame_value(&[a]);
        for (k, f) in v.iter().enumerate() {
            if !f.is_zero() {
                l.set_internal_diff(a, k, f.neg())?;
            }
        }
        let sigma = m1.symbol_value(&[a]);
        for (i, f) in sigma.iter().enumerate() {
            if !f.is_zero() {
                l.set_anchor(a, i, f.clone())?;
            }
        }
    }
    for t in multisets(bundle, 2) {
        let (a, b) = (t[0], t[1]);
        let s = sign(bundle.degree(a) as i64);
        let v = m1.frame_value(&[a, b]);
        for (k, f) in v.iter().enumerate() {
            if !f.is_zero() {
                l.set_bracket(a, b, k, f.scale(&s))?;
            }
        }
    }
    Ok(l)
}

/// `d D = [m_L, D]`; requires `L` to satisfy the axioms.
pub fn def_differential(l: &LieAlgebroidModel, d: &DerSum) -> Result<DerSum, DeformationError> {
    let report = check_axioms(l);
    if let Some(f) = report.first_failure() {
        return Err(AlgebroidError::AxiomFailure(f.to_string()).into());
    }
    mc_of_algebroid(l).bracket(d)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Frame(i32, Vec<usize>, usize, Exps),
    Symbol(i32, Vec<usize>, usize, Exps),
}

#[derive(Clone, Debug)]
pub struct DefSlice {
    pub slice: ComplexSlice,
    pub approximate: bool,
}

fn key_label(l: &LieAlgebroidModel, k: &Key) -> String {
    let names = l.patch().names();
    let b = l.bundle();
    let mono = |e: &Exps| MultiPoly::monomial(e.clone(), Rational::one()).display_with(names);
    match k {
        Key::Frame(_, t, out, e) => format!(
            "D({}) = {}*{}",
            t.iter().map(|&a| b.name(a)).collect::<Vec<_>>().join(","),
            mono(e),
            b.name(*out)
        ),
        Key::Symbol(_, t, i, e) => format!(
            "sigma({}) = {}*d/d{}",
            t.iter().map(|&a| b.name(a)).collect::<Vec<_>>().join(","),
            mono(e),
            names[*i]
        ),
    }
}

fn max_arity(l: &LieAlgebroidModel, t: i32, cap: i32) -> i32 {
    let b = l.bundle();
    if (0..b.rank()).any(|a| shifted(b, a) >= 0) {
        return cap;
    }
    let min_s = (0..b.rank()).map(|a| shifted(b, a)).min().unwrap_or(-1);
    (t - min_s - 1).max(t)
}

fn basis(l: &LieAlgebroidModel, t: i32, xdegs: &dyn Fn(bool) -> Vec<u32>, cap: i32) -> Vec<Key> {
    let b = l.bundle();
    let n = l.dim();
    let mut out = Vec::new();
    for arity in -1..=max_arity(l, t, cap) {
        let m = (arity + 1) as usize;
        for tuple in multisets(b, m) {
            let s_out = t + tuple.iter().map(|&a| shifted(b, a)).sum::<i32>();
            for k in 0..b.rank() {
                if shifted(b, k) != s_out {
                    continue;
                }
                for xd in xdegs(false) {
                    for e in coordinate_monomials(n, xd) {
                        out.push(Key::Frame(arity, tuple.clone(), k, e));
                    }
                }
            }
        }
        if arity >= 0 && n > 0 {
            for tuple in multisets(b, m - 1) {
                if t + tuple.iter().map(|&a| shifted(b, a)).sum::<i32>() != 0 {
                    continue;
                }
                for i in 0..n {
                    for xd in xdegs(true) {
                        for e in coordinate_monomials(n, xd) {
                            out.push(Key::Symbol(arity, tuple.clone(), i, e));
                        }
                    }
                }
            }
        }
    }
    out
}

fn element(l: &LieAlgebroidModel, t: i32, key: &Key) -> DerSum {
    let b = l.bundle();
    let mut d;
    match key {
        Key::Frame(arity, tuple, k, e) => {
            d = Multiderivation::zero(b, *arity, t);
            let mut v = vec![MultiPoly::zero(); b.rank()];
            v[*k] = MultiPoly::monomial(e.clone(), Rational::one());
            d.set_frame(tuple, v).expect("basis frame");
        }
        Key::Symbol(arity, tuple, i, e) => {
            d = Multiderivation::zero(b, *arity, t);
            let mut v = vec![MultiPoly::zero(); l.dim()];
            v[*i] = MultiPoly::monomial(e.clone(), Rational::one());
            d.set_symbol(tuple, v).expect("basis symbol");
        }
    }
    DerSum::single(d)
}

fn coordinates(s: &DerSum) -> Vec<(Key, Rational)> {
    let mut out = Vec::new();
    for p in s.parts() {
        for (t, v) in p.frames() {
            for (k, f) in v.iter().enumerate() {
                for (e, c) in f.terms() {
                    out.push((Key::Frame(p.arity(), t.clone(), k, e.clone()), c.clone()));
                }
            }
        }
        for (t, v) in p.symbols() {
            for (i, f) in v.iter().enumerate() {
                for (e, c) in f.terms() {
                    out.push((Key::Symbol(p.arity(), t.clone(), i, e.clone()), c.clone()));
                }
            }
        }
    }
    out
}

/// Finite slice of the deformation complex in degrees `lo..=hi`.
///
/// Weight of a component: coefficient degree for values, coefficient degree minus
/// one for symbols, minus `delta * t`.
pub fn def_slice(
    l: &LieAlgebroidModel,
    mode: SliceMode,
    lo: i32,
    hi: i32,
    arity_cap: i32,
) -> Result<DefSlice, DeformationError> {
    let report = check_axioms(l);
    if let Some(f) = report.first_failure() {
        return Err(AlgebroidError::AxiomFailure(f.to_string()).into());
    }
    let (strict, delta) = match mode {
        SliceMode::Weight(_) => (true, weight_shift(l)?),
        SliceMode::Truncate(_) => (false, 0),
    };
    let mc = mc_of_algebroid(l);
    let mut bases = BTreeMap::new();
    for t in lo..=hi {
        let xdegs = |symbol: bool| -> Vec<u32> {
            match mode {
                SliceMode::Weight(w) => {
                    let x = w + delta * t as i64 + i64::from(symbol);
                    if x < 0 {
                        vec![]
                    } else {
                        vec![x as u32]
                    }
                }
                SliceMode::Truncate(k) => (0..=k).collect(),
            }
        };
        bases.insert(t, basis(l, t, &xdegs, arity_cap));
    }
    let mut maps = BTreeMap::new();
    for t in lo..hi {
        let src = &bases[&t];
        let tgt = &bases[&(t + 1)];
        let index: BTreeMap<&Key, usize> = tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (j, key) in src.iter().enumerate() {
            let img = mc.bracket(&element(l, t, key))?;
            for (k2, c) in coordinates(&img) {
                match index.get(&k2) {
                    Some(&i) => m.add_at(i, j, &c),
                    None if strict => {
                        return Err(crate::exact_algebra::ExactError::SliceNotClosed(format!(
                            "d({}) has component {} outside the slice",
                            key_label(l, key),
                            key_label(l, &k2)
                        ))
                        .into())
                    }
                    None => {}
                }
            }
        }
        maps.insert(t, m);
    }
    let spaces = bases
        .iter()
        .map(|(t, b)| (*t, b.iter().map(|k| key_label(l, k)).collect()))
        .collect();
    Ok(DefSlice {
        slice: ComplexSlice::new(spaces, maps)?,
        approximate: !strict,
    })
}

/// Cohomology of the deformation complex in degrees `lo..=hi` on one slice.
pub fn def_cohomology(
    l: &LieAlgebroidModel,
    mode: SliceMode,
    lo: i32,
    hi: i32,
    arity_cap: i32,
) -> Result<Cohomology, DeformationError> {
    let s = def_slice(l, mode, lo - 1, hi + 1, arity_cap)?;
    let h = s.slice.cohomology()?;
    Ok(crate::algebroid::ce::restrict(&h, lo, hi))
}
