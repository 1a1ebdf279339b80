//! Multiderivations of a graded bundle in the décalage picture.
//!
//! A multiderivation of arity `n` and degree `t` is a graded-symmetric map
//! `E[1]^{n+1} -> E[1]` of degree `t` (shifted degree of `s e_a` is `|a| - 1`)
//! that is a derivation in each slot:
//! `D(v_0, .., v_{n-1}, f v_n) = f D(v) + sigma(v_0, .., v_{n-1})(f) v_n`.
//! It is stored by its values on sorted frame tuples and its symbol on sorted
//! frame tuples of length `n`; the split form relative to a connection is derived.

use std::collections::BTreeMap;

use num_traits::One;

use crate::algebroid::{BundleModel, ConnectionModel};
use crate::exact_algebra::{MultiPoly, Rational};

use super::DeformationError;

/// Coefficients of a section of `E[1]` in the frame `s e_a`.
pub type Section = Vec<MultiPoly>;
/// Components of a vector field in the coordinate frame.
pub type VectorField = Vec<MultiPoly>;
/// A pure input `f * s e_a`.
pub type Pure = (MultiPoly, usize);

pub(crate) fn shifted(bundle: &BundleModel, a: usize) -> i32 {
    bundle.degree(a) - 1
}

fn odd(x: i32) -> bool {
    x.rem_euclid(2) == 1
}

/// Sorts a frame tuple, returning the Koszul sign (true = negative), or `None` when
/// an odd element repeats.
pub fn sort_with_sign(bundle: &BundleModel, tuple: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = tuple.to_vec();
    let mut neg = false;
    let n = v.len();
    for i in 0..n {
        for j in 0..n - 1 - i {
            if v[j] > v[j + 1] {
                if odd(shifted(bundle, v[j])) && odd(shifted(bundle, v[j + 1])) {
                    neg = !neg;
                }
                v.swap(j, j + 1);
            }
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] && odd(shifted(bundle, w[0])) {
            return None;
        }
    }
    Some((v, neg))
}

/// Sorted frame multisets of size `m` (odd elements at most once).
pub fn multisets(bundle: &BundleModel, m: usize) -> Vec<Vec<usize>> {
    fn rec(bundle: &BundleModel, start: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for a in start..bundle.rank() {
            let next = if odd(shifted(bundle, a)) { a + 1 } else { a };
            cur.push(a);
            rec(bundle, next, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(bundle, 0, m, &mut Vec::new(), &mut out);
    out
}

fn zero_section(r: usize) -> Section {
    vec![MultiPoly::zero(); r]
}

fn add_scaled(acc: &mut [MultiPoly], v: &[MultiPoly], f: &MultiPoly, negative: bool) {
    for (a, b) in acc.iter_mut().zip(v) {
        if b.is_zero() {
            continue;
        }
        let t = b.mul(f);
        if negative {
            *a = a.sub(&t);
        } else {
            a.add_assign(&t);
        }
    }
}

fn apply_field(v: &[MultiPoly], f: &MultiPoly) -> MultiPoly {
    crate::algebroid::apply_vector_field(v, f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiderivation {
    bundle: BundleModel,
    arity: i32,
    degree: i32,
    frames: BTreeMap<Vec<usize>, Section>,
    symbol: BTreeMap<Vec<usize>, VectorField>,
}

impl Multiderivation {
    pub fn zero(bundle: &BundleModel, arity: i32, degree: i32) -> Self {
        assert!(arity >= -1, "arity must be at least -1");
        Self {
            bundle: bundle.clone(),
            arity,
            degree,
            frames: BTreeMap::new(),
            symbol: BTreeMap::new(),
        }
    }

    /// A `-1`-derivation: a section of `E[1]`, homogeneous of shifted degree `degree`.
    pub fn section(bundle: &BundleModel, s: Section) -> Result<Self, DeformationError> {
        let degree = s
            .iter()
            .enumerate()
            .find(|(_, f)| !f.is_zero())
            .map_or(-1, |(a, _)| shifted(bundle, a));
        let mut d = Self::zero(bundle, -1, degree);
        d.set_frame(&[], s)?;
        Ok(d)
    }

    pub fn bundle(&self) -> &BundleModel {
        &self.bundle
    }

    pub fn arity(&self) -> i32 {
        self.arity
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    fn inputs(&self) -> usize {
        (self.arity + 1) as usize
    }

    pub fn frames(&self) -> &BTreeMap<Vec<usize>, Section> {
        &self.frames
    }

    pub fn symbols(&self) -> &BTreeMap<Vec<usize>, VectorField> {
        &self.symbol
    }

    pub fn is_zero(&self) -> bool {
        self.frames.is_empty() && self.symbol.is_empty()
    }

    /// Shifted degree of the output on a tuple of frames.
    pub fn output_degree(&self, tuple: &[usize]) -> i32 {
        self.degree + tuple.iter().map(|&a| shifted(&self.bundle, a)).sum::<i32>()
    }

    /// Sets the value on a frame tuple (any order; the Koszul sign is applied).
    pub fn set_frame(&mut self, tuple: &[usize], value: Section) -> Result<(), DeformationError> {
        if tuple.len() != self.inputs() || value.len() != self.bundle.rank() {
            return Err(DeformationError::Arity(format!(
                "frame tuple of length {} (expected {}) or section of length {}",
                tuple.len(),
                self.inputs(),
                value.len()
            )));
        }
        let out = self.output_degree(tuple);
        for (k, f) in value.iter().enumerate() {
            if !f.is_zero() && shifted(&self.bundle, k) != out {
                return Err(DeformationError::Degree(format!(
                    "component {} has shifted degree {} but the output degree is {}",
                    self.bundle.name(k),
                    shifted(&self.bundle, k),
                    out
                )));
            }
        }
        let Some((sorted, neg)) = sort_with_sign(&self.bundle, tuple) else {
            if value.iter().all(MultiPoly::is_zero) {
                return Ok(());
            }
            return Err(DeformationError::Degree("repeated odd input must have zero value".into()));
        };
        let value: Section = if neg { value.iter().map(MultiPoly::neg).collect() } else { value };
        if value.iter().all(MultiPoly::is_zero) {
            self.frames.remove(&sorted);
        } else {
            self.frames.insert(sorted, value);
        }
        Ok(())
    }

    /// Sets the symbol on a tuple of `n` frames.
    pub fn set_symbol(&mut self, tuple: &[usize], field: VectorField) -> Result<(), DeformationError> {
        if self.arity < 0 {
            return Err(DeformationError::Arity("sections have no symbol".into()));
        }
        if tuple.len() != self.arity as usize || field.len() != self.bundle.patch().dim() {
            return Err(DeformationError::Arity(format!(
                "symbol tuple of length {} (expected {})",
                tuple.len(),
                self.arity
            )));
        }
        if field.iter().all(MultiPoly::is_zero) {
            if let Some((sorted, _)) = sort_with_sign(&self.bundle, tuple) {
                self.symbol.remove(&sorted);
            }
            return Ok(());
        }
        if self.output_degree(tuple) != 0 {
            return Err(DeformationError::Degree(format!(
                "symbol on a tuple of total degree {} must vanish",
                self.output_degree(tuple)
            )));
        }
        let Some((sorted, neg)) = sort_with_sign(&self.bundle, tuple) else {
            return Err(DeformationError::Degree("repeated odd input must have zero symbol".into()));
        };
        let field = if neg { field.iter().map(MultiPoly::neg).collect() } else { field };
        self.symbol.insert(sorted, field);
        Ok(())
    }

    /// Value on a frame tuple in any order.
    pub fn frame_value(&self, tuple: &[usize]) -> Section {
        let r = self.bundle.rank();
        match sort_with_sign(&self.bundle, tuple) {
            None => zero_section(r),
            Some((sorted, neg)) => match self.frames.get(&sorted) {
                None => zero_section(r),
                Some(v) if neg => v.iter().map(MultiPoly::neg).collect(),
                Some(v) => v.clone(),
            },
        }
    }

    /// Symbol on a frame tuple in any order.
    pub fn symbol_value(&self, tuple: &[usize]) -> VectorField {
        let n = self.bundle.patch().dim();
        match sort_with_sign(&self.bundle, tuple) {
            None => vec![MultiPoly::zero(); n],
            Some((sorted, neg)) => match self.symbol.get(&sorted) {
                None => vec![MultiPoly::zero(); n],
                Some(v) if neg => v.iter().map(MultiPoly::neg).collect(),
                Some(v) => v.clone(),
            },
        }
    }

    /// Evaluation on pure inputs `f_j s e_{a_j}`.
    pub fn eval_pure(&self, inputs: &[Pure]) -> Section {
        let r = self.bundle.rank();
        let mut out = zero_section(r);
        if inputs.len() != self.inputs() || inputs.iter().any(|(f, _)| f.is_zero()) {
            return out;
        }
        let frames: Vec<usize> = inputs.iter().map(|(_, a)| *a).collect();
        let prod = inputs.iter().fold(MultiPoly::one(), |acc, (f, _)| acc.mul(f));
        add_scaled(&mut out, &self.frame_value(&frames), &prod, false);
        if self.symbol.is_empty() {
            return out;
        }
        for j in 0..inputs.len() {
            let (fj, aj) = &inputs[j];
            if fj.as_constant().is_some() {
                continue;
            }
            // move input j to the last slot
            let sj = shifted(&self.bundle, *aj);
            let mut neg = false;
            for &(_, al) in &inputs[j + 1..] {
                if odd(sj) && odd(shifted(&self.bundle, al)) {
                    neg = !neg;
                }
            }
            let rest: Vec<usize> = frames.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, a)| *a).collect();
            let sigma = self.symbol_value(&rest);
            let vf = apply_field(&sigma, fj);
            if vf.is_zero() {
                continue;
            }
            let others = inputs
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != j)
                .fold(MultiPoly::one(), |acc, (_, (f, _))| acc.mul(f));
            let coeff = vf.mul(&others);
            if neg {
                out[*aj] = out[*aj].sub(&coeff);
            } else {
                out[*aj].add_assign(&coeff);
            }
        }
        out
    }

    /// Evaluation on arbitrary sections, extended multilinearly.
    pub fn evaluate(&self, sections: &[Section]) -> Result<Section, DeformationError> {
        if sections.len() != self.inputs() {
            return Err(DeformationError::Arity(format!(
                "expected {} arguments, got {}",
                self.inputs(),
                sections.len()
            )));
        }
        Ok(multilinear(self.bundle.rank(), sections, &|p| self.eval_pure(p)))
    }

    /// The symbol map on sections (function-linear).
    pub fn symbol(&self, sections: &[Section]) -> Result<VectorField, DeformationError> {
        if self.arity < 0 {
            return Err(DeformationError::Arity("a -1-derivation has no symbol".into()));
        }
        if sections.len() != self.arity as usize {
            return Err(DeformationError::Arity(format!(
                "symbol expects {} arguments, got {}",
                self.arity,
                sections.len()
            )));
        }
        let dim = self.bundle.patch().dim();
        let mut out = vec![MultiPoly::zero(); dim];
        for_each_pure(sections, &mut |p| {
            let frames: Vec<usize> = p.iter().map(|(_, a)| *a).collect();
            let prod = p.iter().fold(MultiPoly::one(), |acc, (f, _)| acc.mul(f));
            add_scaled(&mut out, &self.symbol_value(&frames), &prod, false);
        });
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, DeformationError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.frames {
            let cur = out.frames.remove(k).unwrap_or_else(|| zero_section(self.bundle.rank()));
            let s: Section = cur.iter().zip(v).map(|(a, b)| a.add(b)).collect();
            if s.iter().any(|f| !f.is_zero()) {
                out.frames.insert(k.clone(), s);
            }
        }
        for (k, v) in &other.symbol {
            let cur = out
                .symbol
                .remove(k)
                .unwrap_or_else(|| vec![MultiPoly::zero(); self.bundle.patch().dim()]);
            let s: VectorField = cur.iter().zip(v).map(|(a, b)| a.add(b)).collect();
            if s.iter().any(|f| !f.is_zero()) {
                out.symbol.insert(k.clone(), s);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.bundle, self.arity, self.degree);
        if c == &Rational::from_integer(0.into()) {
            return out;
        }
        out.frames = self
            .frames
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|f| f.scale(c)).collect()))
            .collect();
        out.symbol = self
            .symbol
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|f| f.scale(c)).collect()))
            .collect();
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DeformationError> {
        self.add(&other.scale(&-Rational::one()))
    }

    fn compatible(&self, other: &Self) -> Result<(), DeformationError> {
        if self.bundle != other.bundle {
            return Err(DeformationError::BundleMismatch);
        }
        if self.arity != other.arity || self.degree != other.degree {
            return Err(DeformationError::Arity(format!(
                "cannot add arity/degree ({}, {}) and ({}, {})",
                self.arity, self.degree, other.arity, other.degree
            )));
        }
        Ok(())
    }

    /// Function-multilinear part relative to `nabla`:
    /// `L(u) = D(u) - sum_j eps_j nabla_{sigma(u without j)} u_j` on frames.
    pub fn linear_part(&self, nabla: &ConnectionModel) -> BTreeMap<Vec<usize>, Section> {
        let mut out = BTreeMap::new();
        for tuple in multisets(&self.bundle, self.inputs()) {
            let mut v = self.frame_value(&tuple);
            for (j, s) in self.split_corrections(&tuple, nabla) {
                let _ = j;
                for (a, b) in v.iter_mut().zip(&s) {
                    *a = a.sub(b);
                }
            }
            if v.iter().any(|f| !f.is_zero()) {
                out.insert(tuple, v);
            }
        }
        out
    }

    fn split_corrections(&self, tuple: &[usize], nabla: &ConnectionModel) -> Vec<(usize, Section)> {
        let r = self.bundle.rank();
        let mut out = Vec::new();
        if self.arity < 0 || self.symbol.is_empty() {
            return out;
        }
        for j in 0..tuple.len() {
            let sj = shifted(&self.bundle, tuple[j]);
            let neg = tuple[j + 1..]
                .iter()
                .filter(|&&a| odd(sj) && odd(shifted(&self.bundle, a)))
                .count()
                % 2
                == 1;
            let rest: Vec<usize> = tuple.iter().enumerate().filter(|(l, _)| *l != j).map(|(_, a)| *a).collect();
            let sigma = self.symbol_value(&rest);
            let mut s = zero_section(r);
            for (i, vi) in sigma.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (k, slot) in s.iter_mut().enumerate() {
                    let g = nabla.gamma(i, tuple[j], k);
                    if !g.is_zero() {
                        slot.add_assign(&vi.mul(g));
                    }
                }
            }
            if neg {
                s = s.iter().map(MultiPoly::neg).collect();
            }
            out.push((j, s));
        }
        out
    }

    /// Rebuilds a multiderivation from its split form relative to `nabla`.
    pub fn from_split(
        bundle: &BundleModel,
        arity: i32,
        degree: i32,
        linear: &BTreeMap<Vec<usize>, Section>,
        symbol: &BTreeMap<Vec<usize>, VectorField>,
        nabla: &ConnectionModel,
    ) -> Result<Self, DeformationError> {
        let mut d = Self::zero(bundle, arity, degree);
        for (t, v) in symbol {
            d.set_symbol(t, v.clone())?;
        }
        for tuple in multisets(bundle, (arity + 1) as usize) {
            let mut v = linear.get(&tuple).cloned().unwrap_or_else(|| zero_section(bundle.rank()));
            for (_, s) in d.split_corrections(&tuple, nabla) {
                for (a, b) in v.iter_mut().zip(&s) {
                    a.add_assign(b);
                }
            }
            d.set_frame(&tuple, v)?;
        }
        Ok(d)
    }

    /// Rebuilds a multiderivation from an operator on pure inputs, checking the
    /// derivation rule on the inputs `x_i x_j s e_a` in the last slot.
    pub fn from_operator(
        bundle: &BundleModel,
        arity: i32,
        degree: i32,
        op: &dyn Fn(&[Pure]) -> Section,
    ) -> Result<Self, DeformationError> {
        let r = bundle.rank();
        let dim = bundle.patch().dim();
        let mut d = Self::zero(bundle, arity, degree);
        let m = (arity + 1) as usize;
        let unit = |t: &[usize]| -> Vec<Pure> { t.iter().map(|&a| (MultiPoly::one(), a)).collect() };
        for tuple in multisets(bundle, m) {
            let v = op(&unit(&tuple));
            d.set_frame(&tuple, v)?;
        }
        if arity >= 0 && r > 0 && dim > 0 {
            for tuple in multisets(bundle, m - 1) {
                if d.output_degree(&tuple) != 0 {
                    continue;
                }
                let w = 0;
                let mut inputs = unit(&tuple);
                inputs.push((MultiPoly::one(), w));
                let base = op(&inputs);
                let mut field = vec![MultiPoly::zero(); dim];
                for (i, slot) in field.iter_mut().enumerate() {
                    let xi = MultiPoly::var(i);
                    inputs[m - 1] = (xi.clone(), w);
                    let v = op(&inputs);
                    *slot = v[w].sub(&base[w].mul(&xi));
                }
                d.set_symbol(&tuple, field)?;
            }
        }
        // verify the derivation rule on quadratic coefficients in every slot
        for tuple in all_multisets(r, m) {
            for slot in 0..m {
                for i in 0..dim {
                    for j in i..dim {
                        let mut inputs = unit(&tuple);
                        inputs[slot].0 = MultiPoly::var(i).mul(&MultiPoly::var(j));
                        let lhs = op(&inputs);
                        let rhs = d.eval_pure(&inputs);
                        if lhs != rhs {
                            return Err(DeformationError::NotMultiderivation(format!(
                                "operator differs from its multiderivation reconstruction on frames {:?} with x{}*x{} in slot {}",
                                tuple
                                    .iter()
                                    .map(|&a| bundle.name(a).to_string())
                                    .collect::<Vec<_>>(),
                                i,
                                j,
                                slot
                            )));
                        }
                    }
                }
            }
        }
        Ok(d)
    }

    /// Human-readable listing of frame values and symbols.
    pub fn display(&self) -> String {
        let names = self.bundle.patch().names();
        let mut parts = Vec::new();
        for (t, v) in &self.frames {
            let args: Vec<&str> = t.iter().map(|&a| self.bundle.name(a)).collect();
            let val: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, f)| !f.is_zero())
                .map(|(k, f)| format!("({})*{}", f.display_with(names), self.bundle.name(k)))
                .collect();
            parts.push(format!("D({}) = {}", args.join(", "), val.join(" + ")));
        }
        for (t, v) in &self.symbol {
            let args: Vec<&str> = t.iter().map(|&a| self.bundle.name(a)).collect();
            let val: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, f)| !f.is_zero())
                .map(|(i, f)| format!("({})*d/d{}", f.display_with(names), names[i]))
                .collect();
            parts.push(format!("sigma({}) = {}", args.join(", "), val.join(" + ")));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Sorted multisets of size `m` from `0..rank`, repetitions allowed.
fn all_multisets(rank: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(rank: usize, start: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for a in start..rank {
            cur.push(a);
            rec(rank, a, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, 0, m, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` on every pure expansion of a tuple of sections.
pub fn for_each_pure(sections: &[Section], f: &mut dyn FnMut(&[Pure])) {
    fn rec(sections: &[Section], cur: &mut Vec<Pure>, f: &mut dyn FnMut(&[Pure])) {
        if cur.len() == sections.len() {
            f(cur);
            return;
        }
        let s = &sections[cur.len()];
        for (a, c) in s.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            cur.push((c.clone(), a));
            rec(sections, cur, f);
            cur.pop();
        }
    }
    rec(sections, &mut Vec::new(), f);
}

pub(crate) fn multilinear(rank: usize, sections: &[Section], op: &dyn Fn(&[Pure]) -> Section) -> Section {
    let mut out = zero_section(rank);
    for_each_pure(sections, &mut |p| {
        let v = op(p);
        for (a, b) in out.iter_mut().zip(&v) {
            a.add_assign(b);
        }
    });
    out
}

/// Shuffle composite `(outer ∘ inner)(v) = sum eps * outer(inner(v_S), v_{S^c})` on pure inputs.
pub fn composite_pure(outer: &Multiderivation, inner: &Multiderivation, inputs: &[Pure]) -> Section {
    let bundle = &outer.bundle;
    let r = bundle.rank();
    let q = inner.inputs();
    let total = inputs.len();
    let mut out = zero_section(r);
    if q > total || outer.inputs() + q != total + 1 {
        return out;
    }
    let degs: Vec<i32> = inputs.iter().map(|(_, a)| shifted(bundle, *a)).collect();
    for subset in subsets(total, q) {
        let mut neg = false;
        // sign of moving the chosen inputs to the front in order
        let mut chosen = vec![false; total];
        for &j in &subset {
            chosen[j] = true;
        }
        for &j in &subset {
            for i in 0..j {
                if !chosen[i] && odd(degs[i]) && odd(degs[j]) {
                    neg = !neg;
                }
            }
        }
        let inner_in: Vec<Pure> = subset.iter().map(|&j| inputs[j].clone()).collect();
        let rest: Vec<Pure> = (0..total).filter(|j| !chosen[*j]).map(|j| inputs[j].clone()).collect();
        let v = inner.eval_pure(&inner_in);
        for (k, g) in v.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut args = Vec::with_capacity(outer.inputs());
            args.push((g.clone(), k));
            args.extend(rest.iter().cloned());
            let w = outer.eval_pure(&args);
            add_scaled(&mut out, &w, &MultiPoly::one(), neg);
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
