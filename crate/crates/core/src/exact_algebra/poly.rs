use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::rational::{binomial, Rational};
use super::ExactError;

/// Exponent multi-index with trailing zeros trimmed, so a constant is `[]`.
pub type Exps = Vec<u32>;

fn trim(mut e: Exps) -> Exps {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exps(a: &[u32], b: &[u32]) -> Exps {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, v) in a.iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in b.iter().enumerate() {
        out[i] += v;
    }
    out
}

/// Multivariate polynomial with rational coefficients in the coordinates of a patch.
///
/// Variables are identified by index; the patch supplies names.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPoly {
    terms: BTreeMap<Exps, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exps, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x^exps` in place.
    pub fn add_term(&mut self, exps: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        let exps = trim(exps);
        let remove = {
            let slot = self.terms.entry(exps.clone()).or_insert_with(Rational::zero);
            *slot += c;
            slot.is_zero()
        };
        if remove {
            self.terms.remove(&exps);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        let e = trim(exps.to_vec());
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&[])
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(add_exps(e1, e2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact partial derivative in variable `i`.
    pub fn differentiate(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rational::from_integer(k.into()));
        }
        out
    }

    /// Partial derivative in the coordinate called `var` among `names`.
    pub fn differentiate_named(&self, names: &[String], var: &str) -> Result<Self, ExactError> {
        let i = names
            .iter()
            .position(|n| n == var)
            .ok_or_else(|| ExactError::UnknownVariable(var.to_string()))?;
        Ok(self.differentiate(i))
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                for _ in 0..*k {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes each variable `x_i` by the polynomial `subs[i]` (missing entries keep `x_i`).
    pub fn compose(&self, subs: &[MultiPoly]) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                let base = subs.get(i).cloned().unwrap_or_else(|| Self::var(i));
                t = t.mul(&base.pow(*k));
            }
            out.add_assign(&t);
        }
        out
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Common total degree of all terms, if any. Zero is homogeneous of every degree and returns `Some(None)`.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match it.next() {
            None => Some(None),
            Some(d) => it.all(|x| x == d).then_some(Some(d)),
        }
    }

    /// Largest variable index used plus one.
    pub fn var_bound(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    /// Keeps only terms of total degree `<= max`.
    pub fn truncate_degree(&self, max: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Expansion of `x^e` as `prod (x_i + shift_i)^{e_i}`, returned as pairs of
    /// (exponent of x, exponent of shift, coefficient). Used for Taylor shifts.
    pub fn binomial_shift(e: &[u32]) -> Vec<(Exps, Exps, Rational)> {
        let mut acc: Vec<(Exps, Exps, Rational)> = vec![(Vec::new(), Vec::new(), Rational::one())];
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let mut next = Vec::new();
            for (ex, es, c) in &acc {
                for j in 0..=k {
                    let mut ex2 = ex.clone();
                    let mut es2 = es.clone();
                    if ex2.len() <= i {
                        ex2.resize(i + 1, 0);
                    }
                    if es2.len() <= i {
                        es2.resize(i + 1, 0);
                    }
                    ex2[i] += k - j;
                    es2[i] += j;
                    next.push((trim(ex2), trim(es2), c * binomial(k, j)));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono = mono_string(e, names);
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", abs, mono));
            }
        }
        s
    }
}

fn mono_string(e: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i));
        if k == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{}^{}", name, k));
        }
    }
    parts.join("*")
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}
