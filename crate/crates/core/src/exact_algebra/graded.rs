//! Free graded-commutative algebras over the polynomial ring of a patch.
//!
//! An element is a finite sum `f(x) * g_1^{e_1} ... g_r^{e_r}` with monomials in
//! canonical generator order. Odd generators square to zero; even ones are
//! polynomial. Truncation rules drop monomials whose weight exceeds a bound.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::Rational;

/// Exponent vector over the algebra generators, trailing zeros trimmed.
pub type Mono = Vec<u16>;

fn trim(mut m: Mono) -> Mono {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Self { name: name.into(), degree }
    }
}

/// Monomials with `sum weights[j] * e_j > max` are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub weights: Vec<u32>,
    pub max: u32,
}

impl Truncation {
    pub fn weight(&self, m: &[u16]) -> u32 {
        m.iter()
            .zip(&self.weights)
            .map(|(e, w)| *e as u32 * w)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcAlgebra {
    var_names: Vec<String>,
    gens: Vec<Generator>,
    odd: Vec<bool>,
    truncations: Vec<Truncation>,
}

/// Element of a [`GcAlgebra`]: monomial to polynomial coefficient.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    terms: BTreeMap<Mono, MultiPoly>,
}

impl Elem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::term(Vec::new(), p)
    }

    pub fn term(m: Mono, p: MultiPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(m, p);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &[u16]) -> MultiPoly {
        let m = trim(m.to_vec());
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Mono, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        let m = trim(m);
        let remove = {
            let slot = self.terms.entry(m.clone()).or_default();
            slot.add_assign(&p);
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign(&mut self, other: &Elem) {
        for (m, p) in &other.terms {
            self.add_term(m.clone(), p.clone());
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), p.neg());
        }
        out
    }

    pub fn neg(&self) -> Elem {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Elem {
        if c.is_zero() {
            return Elem::zero();
        }
        Elem {
            terms: self.terms.iter().map(|(m, p)| (m.clone(), p.scale(c))).collect(),
        }
    }

    /// Multiplication by a degree-0 coefficient polynomial.
    pub fn scale_poly(&self, f: &MultiPoly) -> Elem {
        let mut out = Elem::zero();
        for (m, p) in &self.terms {
            out.add_term(m.clone(), p.mul(f));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&MultiPoly) -> MultiPoly) -> Elem {
        let mut out = Elem::zero();
        for (m, p) in &self.terms {
            out.add_term(m.clone(), f(p));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&Mono, &MultiPoly) -> bool) -> Elem {
        Elem {
            terms: self
                .terms
                .iter()
                .filter(|(m, p)| keep(m, p))
                .map(|(m, p)| (m.clone(), p.clone()))
                .collect(),
        }
    }

    /// Evaluates every coefficient at a point of the patch.
    pub fn eval_coeffs(&self, point: &[Rational]) -> Elem {
        self.map_coeffs(|p| MultiPoly::constant(p.eval(point)))
    }

    /// Exponent of generator `j` in monomial `m`.
    pub fn exp(m: &[u16], j: usize) -> u16 {
        m.get(j).copied().unwrap_or(0)
    }
}

impl GcAlgebra {
    pub fn new(var_names: Vec<String>, gens: Vec<Generator>) -> Self {
        let odd = gens.iter().map(|g| g.degree.rem_euclid(2) == 1).collect();
        Self {
            var_names,
            gens,
            odd,
            truncations: Vec::new(),
        }
    }

    pub fn with_truncation(mut self, t: Truncation) -> Self {
        let mut t = t;
        t.weights.resize(self.gens.len(), 0);
        self.truncations.push(t);
        self
    }

    /// The same algebra with `extra` generators appended; existing truncations ignore them.
    pub fn with_extra_generators(&self, extra: Vec<Generator>) -> Self {
        let mut gens = self.gens.clone();
        gens.extend(extra);
        let mut out = Self::new(self.var_names.clone(), gens);
        out.truncations = self.truncations.clone();
        out
    }

    pub fn truncations(&self) -> &[Truncation] {
        &self.truncations
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn is_odd(&self, j: usize) -> bool {
        self.odd[j]
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|g| g == name)
    }

    pub fn gen(&self, j: usize) -> Elem {
        let mut m = vec![0u16; j + 1];
        m[j] = 1;
        Elem::term(m, MultiPoly::one())
    }

    pub fn var(&self, i: usize) -> Elem {
        Elem::from_poly(MultiPoly::var(i))
    }

    pub fn mono_elem(&self, m: &[u16]) -> Elem {
        Elem::term(m.to_vec(), MultiPoly::one())
    }

    pub fn mono_degree(&self, m: &[u16]) -> i32 {
        m.iter()
            .zip(&self.gens)
            .map(|(e, g)| *e as i32 * g.degree)
            .sum()
    }

    /// Common degree of all terms; `Some(None)` for zero, `None` if inhomogeneous.
    pub fn degree(&self, e: &Elem) -> Option<Option<i32>> {
        let mut it = e.terms.keys().map(|m| self.mono_degree(m));
        match it.next() {
            None => Some(None),
            Some(d) => it.all(|x| x == d).then_some(Some(d)),
        }
    }

    pub fn weight(m: &[u16], weights: &[u32]) -> u32 {
        m.iter()
            .zip(weights)
            .map(|(e, w)| *e as u32 * w)
            .sum()
    }

    /// Keeps terms whose weight (with respect to `weights`) lies in `range`.
    pub fn weight_part(e: &Elem, weights: &[u32], lo: u32, hi: u32) -> Elem {
        e.filter(|m, _| {
            let w = Self::weight(m, weights);
            w >= lo && w <= hi
        })
    }

    fn admissible(&self, m: &[u16]) -> bool {
        self.truncations.iter().all(|t| t.weight(m) <= t.max)
    }

    /// Product of two monomials in canonical order, with its Koszul sign.
    pub fn mono_mul(&self, a: &[u16], b: &[u16]) -> Option<(Mono, bool)> {
        let n = a.len().max(b.len());
        let mut out = vec![0u16; n];
        let mut negative = false;
        // number of odd generators of `a` with index > j, accumulated right to left
        let mut odd_a_above = 0usize;
        for j in (0..n).rev() {
            let ea = Elem::exp(a, j);
            let eb = Elem::exp(b, j);
            if self.odd[j] {
                if ea > 0 && eb > 0 {
                    return None;
                }
                if eb > 0 && odd_a_above % 2 == 1 {
                    negative = !negative;
                }
                if ea > 0 {
                    odd_a_above += 1;
                }
            }
            out[j] = ea + eb;
        }
        let out = trim(out);
        if !self.admissible(&out) {
            return None;
        }
        Some((out, negative))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (ma, pa) in &a.terms {
            for (mb, pb) in &b.terms {
                if let Some((m, neg)) = self.mono_mul(ma, mb) {
                    let p = pa.mul(pb);
                    out.add_term(m, if neg { p.neg() } else { p });
                }
            }
        }
        out
    }

    pub fn mul_all(&self, factors: &[Elem]) -> Elem {
        let mut acc = Elem::one();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn pow(&self, a: &Elem, k: u32) -> Elem {
        let mut acc = Elem::one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Drops terms violating the truncation rules.
    pub fn truncate(&self, e: &Elem) -> Elem {
        e.filter(|m, _| self.admissible(m))
    }

    /// Applies a derivation, extending from generators by the graded Leibniz rule.
    pub fn apply(&self, d: &Derivation, e: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (m, f) in &e.terms {
            // coefficient part: sum_i (d_i f) D(x_i) m
            for (i, dx) in d.on_vars.iter().enumerate() {
                if dx.is_zero() {
                    continue;
                }
                let df = f.differentiate(i);
                if df.is_zero() {
                    continue;
                }
                let t = self.mul(dx, &self.mono_elem(m));
                out.add_assign(&t.scale_poly(&df));
            }
            // generator part
            let mut left = vec![0u16; m.len()];
            let mut left_degree = 0i32;
            for j in 0..m.len() {
                let ej = m[j];
                if ej > 0 {
                    let dg = d.on_gens.get(j);
                    if let Some(dg) = dg.filter(|dg| !dg.is_zero()) {
                        let mut rest = m.clone();
                        for r in rest.iter_mut().take(j) {
                            *r = 0;
                        }
                        rest[j] -= 1;
                        let mut t = self.mul(&self.mono_elem(&left), dg);
                        t = self.mul(&t, &self.mono_elem(&rest));
                        let mut c = Rational::from_integer(ej.into());
                        if (d.degree * left_degree).rem_euclid(2) == 1 {
                            c = -c;
                        }
                        out.add_assign(&t.scale_poly(&f.scale(&c)));
                    }
                    left[j] = ej;
                    left_degree += ej as i32 * self.gens[j].degree;
                }
            }
        }
        self.truncate(&out)
    }

    /// Graded commutator `[d1, d2] = d1 d2 - (-1)^{|d1||d2|} d2 d1`.
    pub fn commutator(&self, d1: &Derivation, d2: &Derivation) -> Derivation {
        let sgn = if (d1.degree * d2.degree).rem_euclid(2) == 1 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let on_vars = (0..self.nvars())
            .map(|i| {
                let x = self.var(i);
                let a = self.apply(d1, &self.apply(d2, &x));
                let b = self.apply(d2, &self.apply(d1, &x));
                a.add(&b.scale(&sgn))
            })
            .collect();
        let on_gens = (0..self.ngens())
            .map(|j| {
                let g = self.gen(j);
                let a = self.apply(d1, &self.apply(d2, &g));
                let b = self.apply(d2, &self.apply(d1, &g));
                a.add(&b.scale(&sgn))
            })
            .collect();
        Derivation {
            degree: d1.degree + d2.degree,
            on_vars,
            on_gens,
        }
    }

    /// Applies an algebra morphism given on coordinates and generators.
    pub fn map_elem(&self, target: &GcAlgebra, f: &AlgMap, e: &Elem) -> Elem {
        let mut out = Elem::zero();
        let mut var_pow_cache: BTreeMap<(usize, u32), Elem> = BTreeMap::new();
        let mut gen_pow_cache: BTreeMap<(usize, u16), Elem> = BTreeMap::new();
        for (m, p) in &e.terms {
            let mut coeff = Elem::zero();
            for (ex, c) in p.terms() {
                let mut t = Elem::scalar(c.clone());
                for (i, &k) in ex.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let img = var_pow_cache
                        .entry((i, k))
                        .or_insert_with(|| {
                            let base = f
                                .on_vars
                                .get(i)
                                .and_then(|v| v.clone())
                                .unwrap_or_else(|| target.var(i));
                            target.pow(&base, k as u32)
                        })
                        .clone();
                    t = target.mul(&t, &img);
                }
                coeff.add_assign(&t);
            }
            let mut t = coeff;
            for (j, &k) in m.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let img = gen_pow_cache
                    .entry((j, k))
                    .or_insert_with(|| target.pow(&f.on_gens[j], k as u32))
                    .clone();
                t = target.mul(&t, &img);
            }
            out.add_assign(&t);
        }
        out
    }

    pub fn display(&self, e: &Elem) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, p) in &e.terms {
            let mono = self.mono_string(m);
            let coeff = p.display_with(&self.var_names);
            let s = if mono.is_empty() {
                coeff
            } else if coeff == "1" {
                mono
            } else if coeff == "-1" {
                format!("-{}", mono)
            } else if p.len() == 1 {
                format!("{}*{}", coeff, mono)
            } else {
                format!("({})*{}", coeff, mono)
            };
            parts.push(s);
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    pub fn mono_string(&self, m: &[u16]) -> String {
        let mut parts = Vec::new();
        for (j, &k) in m.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if k == 1 {
                parts.push(self.gens[j].name.clone());
            } else {
                parts.push(format!("{}^{}", self.gens[j].name, k));
            }
        }
        parts.join("*")
    }

    /// All monomials with every exponent bounded by `caps[j]` (odd generators capped at 1)
    /// whose degree equals `degree`, filtered by the truncation rules.
    pub fn monomials_of_degree(&self, degree: i32, caps: &[u16]) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; self.ngens()];
        self.enum_monos(0, degree, caps, &mut cur, &mut out);
        out
    }

    fn enum_monos(&self, j: usize, remaining: i32, caps: &[u16], cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if j == self.ngens() {
            if remaining == 0 && self.admissible(cur) {
                out.push(trim(cur.clone()));
            }
            return;
        }
        let cap = if self.odd[j] { caps[j].min(1) } else { caps[j] };
        for k in 0..=cap {
            cur[j] = k;
            self.enum_monos(j + 1, remaining - k as i32 * self.gens[j].degree, caps, cur, out);
        }
        cur[j] = 0;
    }
}

/// Graded derivation given by its values on coordinates and generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i32,
    pub on_vars: Vec<Elem>,
    pub on_gens: Vec<Elem>,
}

impl Derivation {
    pub fn zero(alg: &GcAlgebra, degree: i32) -> Self {
        Self {
            degree,
            on_vars: vec![Elem::zero(); alg.nvars()],
            on_gens: vec![Elem::zero(); alg.ngens()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.on_vars.iter().all(Elem::is_zero) && self.on_gens.iter().all(Elem::is_zero)
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            degree: self.degree,
            on_vars: self.on_vars.iter().zip(&other.on_vars).map(|(a, b)| a.add(b)).collect(),
            on_gens: self.on_gens.iter().zip(&other.on_gens).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            degree: self.degree,
            on_vars: self.on_vars.iter().map(|a| a.scale(c)).collect(),
            on_gens: self.on_gens.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Left multiplication `c * d` by an algebra element.
    pub fn left_mul(&self, alg: &GcAlgebra, c: &Elem, c_degree: i32) -> Derivation {
        Derivation {
            degree: self.degree + c_degree,
            on_vars: self.on_vars.iter().map(|a| alg.mul(c, a)).collect(),
            on_gens: self.on_gens.iter().map(|a| alg.mul(c, a)).collect(),
        }
    }

    /// Applies the truncation of `alg` to every stored value.
    pub fn truncated(&self, alg: &GcAlgebra) -> Derivation {
        Derivation {
            degree: self.degree,
            on_vars: self.on_vars.iter().map(|a| alg.truncate(a)).collect(),
            on_gens: self.on_gens.iter().map(|a| alg.truncate(a)).collect(),
        }
    }
}

/// Algebra morphism: images of coordinates (None keeps `x_i`) and of generators.
#[derive(Clone, Debug)]
pub struct AlgMap {
    pub on_vars: Vec<Option<Elem>>,
    pub on_gens: Vec<Elem>,
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?}){:?}", p, m)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
