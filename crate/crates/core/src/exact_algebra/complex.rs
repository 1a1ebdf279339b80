use std::collections::BTreeMap;

use num_traits::Zero;

use super::graded::{Elem, GcAlgebra, Mono};
use super::linalg::Matrix;
use super::poly::{Exps, MultiPoly};
use super::rational::Rational;
use super::ExactError;

/// Finite cochain complex: a basis per degree and the matrix of `d: C^k -> C^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSlice {
    spaces: BTreeMap<i32, Vec<String>>,
    maps: BTreeMap<i32, Matrix>,
}

/// Cohomology dimensions and representative cocycles per degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cohomology {
    pub dims: BTreeMap<i32, usize>,
    pub representatives: BTreeMap<i32, Vec<Vec<Rational>>>,
}

impl Cohomology {
    pub fn dim(&self, k: i32) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }

    /// Adds dimensions of another slice degreewise.
    pub fn accumulate(&mut self, other: &Cohomology) {
        for (k, d) in &other.dims {
            *self.dims.entry(*k).or_insert(0) += d;
        }
    }

    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .map(|(k, d)| if k.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }
}

impl ComplexSlice {
    pub fn new(spaces: BTreeMap<i32, Vec<String>>, maps: BTreeMap<i32, Matrix>) -> Result<Self, ExactError> {
        for (k, m) in &maps {
            let src = spaces.get(k).map_or(0, Vec::len);
            let tgt = spaces.get(&(k + 1)).map_or(0, Vec::len);
            if m.cols() != src || m.rows() != tgt {
                return Err(ExactError::DimensionMismatch(format!(
                    "map in degree {} is {}x{}, expected {}x{}",
                    k,
                    m.rows(),
                    m.cols(),
                    tgt,
                    src
                )));
            }
        }
        Ok(Self { spaces, maps })
    }

    pub fn spaces(&self) -> &BTreeMap<i32, Vec<String>> {
        &self.spaces
    }

    pub fn dim(&self, k: i32) -> usize {
        self.spaces.get(&k).map_or(0, Vec::len)
    }

    /// Matrix of `d_k`, zero if not stored.
    pub fn map(&self, k: i32) -> Matrix {
        self.maps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim(k + 1), self.dim(k)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.spaces
            .iter()
            .map(|(k, b)| if k.rem_euclid(2) == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }

    fn degree_range(&self) -> Vec<i32> {
        self.spaces.keys().copied().collect()
    }

    /// Checks `d_{k+1} d_k = 0`, returning the first failing degree and a witness.
    pub fn check_complex(&self) -> Result<(), ExactError> {
        for k in self.degree_range() {
            let prod = self.map(k + 1).mul(&self.map(k));
            if !prod.is_zero() {
                let j = (0..prod.cols())
                    .find(|&j| (0..prod.rows()).any(|i| !prod.get(i, j).is_zero()))
                    .unwrap_or(0);
                let mut witness = vec![Rational::zero(); self.dim(k)];
                witness[j] = Rational::from_integer(1.into());
                return Err(ExactError::ComplexViolation {
                    degree: k,
                    witness,
                    basis_label: self.spaces.get(&k).and_then(|b| b.get(j)).cloned().unwrap_or_default(),
                });
            }
        }
        Ok(())
    }

    pub fn cohomology(&self) -> Result<Cohomology, ExactError> {
        self.check_complex()?;
        let mut out = Cohomology::default();
        for k in self.degree_range() {
            let n = self.dim(k);
            let dk = self.map(k);
            let kernel = if dk.rows() == 0 {
                (0..n)
                    .map(|j| {
                        let mut v = vec![Rational::zero(); n];
                        v[j] = Rational::from_integer(1.into());
                        v
                    })
                    .collect()
            } else {
                dk.kernel()
            };
            let prev = self.map(k - 1);
            let image: Vec<Vec<Rational>> = (0..prev.cols()).map(|j| prev.column(j)).collect();
            let image_rank = if image.is_empty() { 0 } else { Matrix::from_columns(n, &image).rank() };
            // complete the image to a basis of the kernel
            let mut span = image.clone();
            let mut current = image_rank;
            let mut reps = Vec::new();
            for v in kernel.iter() {
                span.push(v.clone());
                let r = Matrix::from_columns(n, &span).rank();
                if r > current {
                    current = r;
                    reps.push(v.clone());
                } else {
                    span.pop();
                }
            }
            out.dims.insert(k, kernel.len() - image_rank);
            out.representatives.insert(k, reps);
        }
        Ok(out)
    }
}

/// One basis vector of a slice: generator monomial times coordinate monomial.
pub type BasisKey = (Mono, Exps);

/// Builds the matrix of a linear operator on algebra elements between two finite bases.
///
/// With `strict`, terms outside the target basis are an error; otherwise they are
/// dropped (projection onto the slice).
pub fn operator_matrix(
    alg: &GcAlgebra,
    source: &[BasisKey],
    target: &[BasisKey],
    op: impl Fn(&Elem) -> Elem,
    strict: bool,
) -> Result<Matrix, ExactError> {
    let index: BTreeMap<&BasisKey, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut m = Matrix::zeros(target.len(), source.len());
    for (j, (mono, ex)) in source.iter().enumerate() {
        let e = Elem::term(mono.clone(), MultiPoly::monomial(ex.clone(), Rational::from_integer(1.into())));
        let img = op(&e);
        for (mono2, p) in img.terms() {
            for (ex2, c) in p.terms() {
                let key = (mono2.clone(), ex2.clone());
                match index.get(&key) {
                    Some(&i) => m.add_at(i, j, c),
                    None if strict => {
                        return Err(ExactError::SliceNotClosed(format!(
                            "image of {} has term {} outside the slice",
                            basis_label(alg, &(mono.clone(), ex.clone())),
                            basis_label(alg, &key)
                        )))
                    }
                    None => {}
                }
            }
        }
    }
    Ok(m)
}

/// Assembles the slice on degrees `lo..=hi` with bases from `basis` and maps from `op`.
///
/// Cohomology is only meaningful strictly inside the range; callers widen it by one.
pub fn build_slice(
    alg: &GcAlgebra,
    lo: i32,
    hi: i32,
    basis: impl Fn(i32) -> Vec<BasisKey>,
    op: impl Fn(&Elem) -> Elem,
    strict: bool,
) -> Result<(ComplexSlice, BTreeMap<i32, Vec<BasisKey>>), ExactError> {
    let bases: BTreeMap<i32, Vec<BasisKey>> = (lo..=hi).map(|k| (k, basis(k))).collect();
    let mut maps = BTreeMap::new();
    for k in lo..hi {
        maps.insert(k, operator_matrix(alg, &bases[&k], &bases[&(k + 1)], &op, strict)?);
    }
    let spaces = bases
        .iter()
        .map(|(k, b)| (*k, b.iter().map(|key| basis_label(alg, key)).collect()))
        .collect();
    Ok((ComplexSlice::new(spaces, maps)?, bases))
}

pub fn basis_label(alg: &GcAlgebra, key: &BasisKey) -> String {
    let coeff = MultiPoly::monomial(key.1.clone(), Rational::from_integer(1.into())).display_with(alg.var_names());
    let mono = alg.mono_string(&key.0);
    match (coeff.as_str(), mono.is_empty()) {
        (c, true) => c.to_string(),
        ("1", false) => mono,
        (c, false) => format!("{}*{}", c, mono),
    }
}

/// All coordinate exponent vectors in `nvars` variables of total degree `d`.
pub fn coordinate_monomials(nvars: usize, d: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Exps>) {
        if i + 1 >= cur.len() {
            if !cur.is_empty() {
                cur[i] = rem;
            } else if rem > 0 {
                return;
            }
            let mut e = cur.clone();
            while e.last() == Some(&0) {
                e.pop();
            }
            out.push(e);
            return;
        }
        for k in (0..=rem).rev() {
            cur[i] = k;
            rec(i + 1, rem - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}
