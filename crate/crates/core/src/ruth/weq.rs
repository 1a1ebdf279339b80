//! Weak equivalences, detected pointwise: `f` is one iff `f_0` is a quasi-isomorphism of the
//! fibers `(E_p, D_0)` at every point. The check samples finitely many points.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_algebra::rational::qf;
use crate::exact_algebra::{ComplexSlice, Matrix, Rational};

use super::{RepMap, RuthError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePolicy {
    pub seed: u64,
    /// Random points besides the origin; `None` uses the patch dimension.
    pub extra_points: Option<usize>,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        Self {
            seed: 0,
            extra_points: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleEvidence {
    pub point: Vec<Rational>,
    pub cone_dims: BTreeMap<i32, usize>,
    pub source_dims: BTreeMap<i32, usize>,
    pub target_dims: BTreeMap<i32, usize>,
}

impl SampleEvidence {
    pub fn cone_acyclic(&self) -> bool {
        self.cone_dims.values().all(|d| *d == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakEquivalence {
    pub holds: bool,
    pub evidence: Vec<SampleEvidence>,
}

/// The origin followed by seeded random points of a patch of dimension `dim`.
pub fn sample_points(dim: usize, policy: &SamplePolicy) -> Vec<Vec<Rational>> {
    let mut pts = vec![vec![Rational::zero(); dim]];
    if dim == 0 {
        return pts;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    for _ in 0..policy.extra_points.unwrap_or(dim) {
        pts.push(
            (0..dim)
                .map(|_| qf(rng.gen_range(-9..=9), rng.gen_range(1..=5)))
                .collect(),
        );
    }
    pts
}

fn group_degrees(degrees: &[i32]) -> BTreeMap<i32, Vec<usize>> {
    let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, d) in degrees.iter().enumerate() {
        out.entry(*d).or_default().push(i);
    }
    out
}

/// `xi`-free part of an operator table, evaluated at `p`; entry `(i, j)` is the coefficient of
/// `eps'_j` in the image of `eps_i`.
fn evaluate_table(table: &[Vec<crate::exact_algebra::Elem>], p: &[Rational]) -> Vec<Vec<Rational>> {
    table
        .iter()
        .map(|row| row.iter().map(|w| w.coeff(&[]).eval(p)).collect())
        .collect()
}

/// Block of `table` from the frames `src` to `tgt`, as a matrix acting on coordinate columns.
fn block(table: &[Vec<Rational>], src: &[usize], tgt: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (c, &i) in src.iter().enumerate() {
        for (r, &j) in tgt.iter().enumerate() {
            m.set(r, c, table[i][j].clone());
        }
    }
    m
}

fn fiber_complex(table: &[Vec<Rational>], groups: &BTreeMap<i32, Vec<usize>>, lo: i32, hi: i32) -> Result<ComplexSlice, RuthError> {
    let empty = Vec::new();
    let get = |k: i32| groups.get(&k).unwrap_or(&empty);
    let spaces = (lo..=hi)
        .map(|k| (k, get(k).iter().map(|i| format!("e{}", i)).collect()))
        .collect();
    let maps = (lo..hi).map(|k| (k, block(table, get(k), get(k + 1)))).collect();
    Ok(ComplexSlice::new(spaces, maps)?)
}

fn dims(c: &ComplexSlice, lo: i32, hi: i32) -> Result<BTreeMap<i32, usize>, RuthError> {
    let h = c.cohomology()?;
    Ok((lo..=hi).map(|k| (k, h.dim(k))).filter(|(_, d)| *d > 0).collect())
}

/// Decides whether `f` is a weak equivalence by testing that its mapping cone is acyclic
/// at the origin and at seeded random points.
pub fn is_weak_equivalence(f: &RepMap, policy: &SamplePolicy) -> Result<WeakEquivalence, RuthError> {
    let cochain = f.check_cochain();
    if !cochain.pass {
        return Err(RuthError::NotCochainMap(cochain.witness.unwrap_or_default()));
    }
    let (src, tgt) = (f.source(), f.target());
    let ds: Vec<i32> = (0..src.rank()).map(|i| src.fiber().degree(i)).collect();
    let dt: Vec<i32> = (0..tgt.rank()).map(|i| tgt.fiber().degree(i)).collect();
    let mut evidence = Vec::new();
    for p in sample_points(src.alg().nvars(), policy) {
        let d0 = evaluate_table(src.ops(), &p);
        let d1 = evaluate_table(tgt.ops(), &p);
        let f0 = evaluate_table(f.comps(), &p);
        evidence.push(cone_evidence(&d0, &ds, &d1, &dt, &f0, p)?);
    }
    Ok(WeakEquivalence {
        holds: evidence.iter().all(SampleEvidence::cone_acyclic),
        evidence,
    })
}

/// Cohomology of the source, target and mapping cone of a map of finite cochain complexes
/// given by tables (`table[i][j]` is the coefficient of basis vector `j` in the image of `i`).
pub fn cone_evidence(
    d0: &[Vec<Rational>],
    deg0: &[i32],
    d1: &[Vec<Rational>],
    deg1: &[i32],
    f0: &[Vec<Rational>],
    point: Vec<Rational>,
) -> Result<SampleEvidence, RuthError> {
    let gs = group_degrees(deg0);
    let gt = group_degrees(deg1);
    let degs: Vec<i32> = deg0.iter().chain(deg1).copied().collect();
    let lo = degs.iter().min().copied().unwrap_or(0) - 2;
    let hi = degs.iter().max().copied().unwrap_or(0) + 1;
    let (n, m) = (deg0.len(), deg1.len());
    // cone^k = E^{k+1} ⊕ E'^k, frames of E' offset by n
    let mut cone_table = vec![vec![Rational::zero(); n + m]; n + m];
    for i in 0..n {
        for j in 0..n {
            cone_table[i][j] = -d0[i][j].clone();
        }
        for j in 0..m {
            cone_table[i][n + j] = f0[i][j].clone();
        }
    }
    for i in 0..m {
        for j in 0..m {
            cone_table[n + i][n + j] = d1[i][j].clone();
        }
    }
    let mut gc: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (k, v) in &gs {
        gc.entry(k - 1).or_default().extend(v.iter().copied());
    }
    for (k, v) in &gt {
        gc.entry(*k).or_default().extend(v.iter().map(|j| n + j));
    }
    let cone = fiber_complex(&cone_table, &gc, lo, hi)?;
    Ok(SampleEvidence {
        cone_dims: dims(&cone, lo + 1, hi - 1)?,
        source_dims: dims(&fiber_complex(d0, &gs, lo, hi)?, lo + 1, hi - 1)?,
        target_dims: dims(&fiber_complex(d1, &gt, lo, hi)?, lo + 1, hi - 1)?,
        point,
    })
}
