use std::collections::BTreeMap;

use num_traits::One;

use crate::algebroid::BundleModel;
use crate::exact_algebra::Rational;

use super::multider::{composite_pure, multilinear, Multiderivation, Pure, Section};
use super::DeformationError;

fn check_pair(d1: &Multiderivation, d2: &Multiderivation) -> Result<i32, DeformationError> {
    if d1.bundle() != d2.bundle() {
        return Err(DeformationError::BundleMismatch);
    }
    let arity = d1.arity() + d2.arity();
    if arity < -1 {
        return Err(DeformationError::Arity("composite of two sections".into()));
    }
    Ok(arity)
}

/// Shuffle composite `D1 ∘ D2`: `D2` is inserted into the first slot of `D1`.
///
/// Fails when the composite is not first order in every slot.
pub fn circle(d1: &Multiderivation, d2: &Multiderivation) -> Result<Multiderivation, DeformationError> {
    let arity = check_pair(d1, d2)?;
    let op = |p: &[Pure]| composite_pure(d1, d2, p);
    Multiderivation::from_operator(d1.bundle(), arity, d1.degree() + d2.degree(), &op)
}

/// The operator `(-1)^{t1 t2} D1 ∘ D2 - D2 ∘ D1` on pure inputs.
pub fn bracket_pure(d1: &Multiderivation, d2: &Multiderivation, p: &[Pure]) -> Section {
    let a = composite_pure(d1, d2, p);
    let b = composite_pure(d2, d1, p);
    let flip = (d1.degree() * d2.degree()).rem_euclid(2) == 1;
    a.iter()
        .zip(&b)
        .map(|(x, y)| if flip { x.neg().sub(y) } else { x.sub(y) })
        .collect()
}

/// Gerstenhaber bracket `[D1, D2] = (-1)^{t1 t2} D1 ∘ D2 - D2 ∘ D1`.
pub fn gerstenhaber(d1: &Multiderivation, d2: &Multiderivation) -> Result<Multiderivation, DeformationError> {
    let arity = check_pair(d1, d2)?;
    let op = |p: &[Pure]| bracket_pure(d1, d2, p);
    Multiderivation::from_operator(d1.bundle(), arity, d1.degree() + d2.degree(), &op)
}

/// Evaluates the bracket on sections without re-splitting.
pub fn gerstenhaber_eval(d1: &Multiderivation, d2: &Multiderivation, sections: &[Section]) -> Section {
    multilinear(d1.bundle().rank(), sections, &|p| bracket_pure(d1, d2, p))
}

/// A homogeneous element of `Der(E)` of fixed degree with components of several arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerSum {
    bundle: BundleModel,
    degree: i32,
    parts: BTreeMap<i32, Multiderivation>,
}

impl DerSum {
    pub fn zero(bundle: &BundleModel, degree: i32) -> Self {
        Self {
            bundle: bundle.clone(),
            degree,
            parts: BTreeMap::new(),
        }
    }

    pub fn from_parts(bundle: &BundleModel, degree: i32, parts: Vec<Multiderivation>) -> Result<Self, DeformationError> {
        let mut s = Self::zero(bundle, degree);
        for p in parts {
            s.add_part(p)?;
        }
        Ok(s)
    }

    pub fn single(d: Multiderivation) -> Self {
        let mut s = Self::zero(d.bundle(), d.degree());
        if !d.is_zero() {
            s.parts.insert(d.arity(), d);
        }
        s
    }

    pub fn bundle(&self) -> &BundleModel {
        &self.bundle
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn parts(&self) -> impl Iterator<Item = &Multiderivation> {
        self.parts.values()
    }

    pub fn part(&self, arity: i32) -> Multiderivation {
        self.parts
            .get(&arity)
            .cloned()
            .unwrap_or_else(|| Multiderivation::zero(&self.bundle, arity, self.degree))
    }

    /// Arities carrying a nonzero component.
    pub fn arities(&self) -> Vec<i32> {
        self.parts.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_part(&mut self, d: Multiderivation) -> Result<(), DeformationError> {
        if d.bundle() != &self.bundle {
            return Err(DeformationError::BundleMismatch);
        }
        if d.degree() != self.degree {
            return Err(DeformationError::Degree(format!(
                "component of degree {} in a sum of degree {}",
                d.degree(),
                self.degree
            )));
        }
        let a = d.arity();
        let new = match self.parts.remove(&a) {
            Some(cur) => cur.add(&d)?,
            None => d,
        };
        if !new.is_zero() {
            self.parts.insert(a, new);
        }
        Ok(())
    }

    pub fn add(&self, other: &DerSum) -> Result<DerSum, DeformationError> {
        let mut out = self.clone();
        for p in other.parts.values() {
            out.add_part(p.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> DerSum {
        let mut out = Self::zero(&self.bundle, self.degree);
        for p in self.parts.values() {
            let q = p.scale(c);
            if !q.is_zero() {
                out.parts.insert(q.arity(), q);
            }
        }
        out
    }

    pub fn sub(&self, other: &DerSum) -> Result<DerSum, DeformationError> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Bilinear extension of the Gerstenhaber bracket.
    pub fn bracket(&self, other: &DerSum) -> Result<DerSum, DeformationError> {
        let mut out = Self::zero(&self.bundle, self.degree + other.degree);
        for a in self.parts.values() {
            for b in other.parts.values() {
                if a.arity() + b.arity() < -1 {
                    continue;
                }
                out.add_part(gerstenhaber(a, b)?)?;
            }
        }
        Ok(out)
    }

    pub fn display(&self) -> String {
        if self.parts.is_empty() {
            return "0".into();
        }
        self.parts
            .iter()
            .map(|(a, p)| format!("[arity {}] {}", a, p.display()))
            .collect::<Vec<_>>()
            .join("; ")
    }
}
