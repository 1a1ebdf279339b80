use std::collections::BTreeMap;
use std::fmt;

use super::poly::MultiPoly;
use super::rational::Rational;
use crate::exact_algebra::ExactError;

/// Polynomial differential form on a patch of dimension `dim`.
///
/// Components are keyed by strictly increasing index lists of `dx_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    dim: usize,
    components: BTreeMap<Vec<usize>, MultiPoly>,
}

impl PolyForm {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            components: BTreeMap::new(),
        }
    }

    pub fn function(dim: usize, f: MultiPoly) -> Self {
        let mut out = Self::zero(dim);
        out.add_component(Vec::new(), f);
        out
    }

    /// `dx_i` as a 1-form.
    pub fn dx(dim: usize, i: usize) -> Self {
        let mut out = Self::zero(dim);
        out.add_component(vec![i], MultiPoly::one());
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.components.iter()
    }

    pub fn component(&self, subset: &[usize]) -> MultiPoly {
        self.components.get(subset).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Adds `f dx_{subset}`; `subset` must be strictly increasing.
    pub fn add_component(&mut self, subset: Vec<usize>, f: MultiPoly) {
        if f.is_zero() {
            return;
        }
        let remove = {
            let slot = self.components.entry(subset.clone()).or_default();
            slot.add_assign(&f);
            slot.is_zero()
        };
        if remove {
            self.components.remove(&subset);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, f) in &other.components {
            out.add_component(s.clone(), f.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for (s, f) in &self.components {
            out.add_component(s.clone(), f.scale(c));
        }
        out
    }

    /// Degree of a homogeneous form; `None` if mixed or zero.
    pub fn form_degree(&self) -> Option<usize> {
        let mut it = self.components.keys().map(Vec::len);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExactError> {
        if self.dim != other.dim {
            return Err(ExactError::PatchMismatch(self.dim, other.dim));
        }
        let mut out = Self::zero(self.dim);
        for (s1, f1) in &self.components {
            for (s2, f2) in &other.components {
                if let Some((merged, negative)) = merge_sign(s1, s2) {
                    let p = f1.mul(f2);
                    out.add_component(merged, if negative { p.neg() } else { p });
                }
            }
        }
        Ok(out)
    }

    pub fn de_rham(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (s, f) in &self.components {
            for i in 0..self.dim {
                let df = f.differentiate(i);
                if df.is_zero() {
                    continue;
                }
                if let Some((merged, negative)) = merge_sign(&[i], s) {
                    out.add_component(merged, if negative { df.neg() } else { df });
                }
            }
        }
        out
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.components.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (s, f) in &self.components {
            let dx: Vec<String> = s
                .iter()
                .map(|i| format!("d{}", names.get(*i).cloned().unwrap_or_else(|| format!("x{}", i))))
                .collect();
            let coeff = f.display_with(names);
            if s.is_empty() {
                parts.push(coeff);
            } else if coeff == "1" {
                parts.push(dx.join("^"));
            } else {
                parts.push(format!("({})*{}", coeff, dx.join("^")));
            }
        }
        parts.join(" + ")
    }
}

/// Sorted union of two increasing index lists with the sign of the shuffle.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for x in b {
        if a.contains(x) {
            return None;
        }
        inversions += a.iter().filter(|y| *y > x).count();
    }
    let mut merged: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}
