use crate::exact_algebra::rational::sign;
use crate::exact_algebra::{AlgMap, Elem, MultiPoly};
use crate::verdict::Verdict;

use super::{RepUH, RuthError};

/// A `C(L)`-linear map of representations: `f(eps_i) = sum_j F_ij eps'_j`.
#[derive(Clone, Debug)]
pub struct RepMap {
    source: RepUH,
    target: RepUH,
    comps: Vec<Vec<Elem>>,
}

impl RepMap {
    /// `comps[i][j]` must have degree `|eps_i| - |eps'_j|`.
    pub fn new(source: &RepUH, target: &RepUH, comps: Vec<Vec<Elem>>) -> Result<Self, RuthError> {
        if source.algebroid() != target.algebroid() {
            return Err(RuthError::AlgebroidMismatch);
        }
        let (n, m) = (source.rank(), target.rank());
        if comps.len() != n || comps.iter().any(|row| row.len() != m) {
            return Err(RuthError::Shape(format!("map components must be {n} x {m}")));
        }
        let r = source.offset();
        let calg = source.ce().alg();
        for (i, row) in comps.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                let want = source.fiber().degree(i) - target.fiber().degree(j);
                let ok = !f.terms().any(|(mono, _)| mono.len() > r)
                    && matches!(calg.degree(f), Some(None) | Some(Some(_)))
                    && calg.degree(f).flatten().map_or(true, |d| d == want);
                if !ok {
                    return Err(RuthError::Degree(format!(
                        "component ({}, {}) must lie in C(L) with degree {}",
                        source.fiber().name(i),
                        target.fiber().name(j),
                        want
                    )));
                }
            }
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub fn identity(r: &RepUH) -> Self {
        let n = r.rank();
        let comps = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Elem::one() } else { Elem::zero() }).collect())
            .collect();
        Self::new(r, r, comps).expect("identity has degree zero")
    }

    /// `eps_i -> eps'_i` between representations of the same rank.
    pub fn identity_frames(source: &RepUH, target: &RepUH) -> Result<Self, RuthError> {
        if source.rank() != target.rank() {
            return Err(RuthError::Shape("frame counts differ".into()));
        }
        let n = source.rank();
        let comps = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Elem::one() } else { Elem::zero() }).collect())
            .collect();
        Self::new(source, target, comps)
    }

    pub fn zero(source: &RepUH, target: &RepUH) -> Result<Self, RuthError> {
        Self::new(source, target, vec![vec![Elem::zero(); target.rank()]; source.rank()])
    }

    /// Inclusion of `r` as the first summand of `r ⊕ other`.
    pub fn inclusion(r: &RepUH, other: &RepUH) -> Result<Self, RuthError> {
        let sum = r.direct_sum(other)?;
        let comps = (0..r.rank())
            .map(|i| (0..sum.rank()).map(|j| if i == j { Elem::one() } else { Elem::zero() }).collect())
            .collect();
        Self::new(r, &sum, comps)
    }

    /// Canonical identification `E -> (E^∨)^∨`, `eps_i -> (-1)^{|eps_i|} eps_i^^`.
    pub fn double_dual(r: &RepUH) -> Result<Self, RuthError> {
        let dd = r.dual()?.dual()?;
        let n = r.rank();
        let comps = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Elem::scalar(sign(r.fiber().degree(i) as i64))
                        } else {
                            Elem::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(r, &dd, comps)
    }

    pub fn source(&self) -> &RepUH {
        &self.source
    }

    pub fn target(&self) -> &RepUH {
        &self.target
    }

    pub fn comps(&self) -> &[Vec<Elem>] {
        &self.comps
    }

    fn alg_map(&self) -> AlgMap {
        let r = self.source.offset();
        let talg = self.target.alg();
        let mut on_gens: Vec<Elem> = (0..r).map(|a| talg.gen(a)).collect();
        for row in &self.comps {
            on_gens.push(self.target.module_elem(row));
        }
        AlgMap {
            on_vars: vec![None; talg.nvars()],
            on_gens,
        }
    }

    /// `f` on a module element of the source.
    pub fn apply(&self, v: &Elem) -> Elem {
        self.source.alg().map_elem(self.target.alg(), &self.alg_map(), v)
    }

    /// Checks `f D = D' f` on every frame.
    pub fn check_cochain(&self) -> Verdict {
        for i in 0..self.source.rank() {
            let e = self.source.eps(i);
            let lhs = self.target.alg().truncate(&self.apply(&self.source.apply(&e)));
            let rhs = self.target.alg().truncate(&self.target.apply(&self.apply(&e)));
            if lhs != rhs {
                let diff = lhs.sub(&rhs);
                return Verdict::fail(
                    "cochain_map",
                    format!(
                        "on {}: fD - D'f = {}",
                        self.source.fiber().name(i),
                        self.target.alg().display(&diff)
                    ),
                );
            }
        }
        Verdict::pass("cochain_map")
    }

    /// `xi`-free part of the components as a polynomial matrix.
    pub fn linear_part(&self) -> Vec<Vec<MultiPoly>> {
        self.comps
            .iter()
            .map(|row| row.iter().map(|f| f.coeff(&[])).collect())
            .collect()
    }

    /// An isomorphism: square, with `det f_0` a nonzero constant.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.rank() != self.target.rank() {
            return false;
        }
        poly_determinant(&self.linear_part())
            .as_constant()
            .is_some_and(|c| c != num_traits::Zero::zero())
    }
}

/// Laplace expansion along the first row.
pub fn poly_determinant(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one();
    }
    let mut det = MultiPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = m[0][j].mul(&poly_determinant(&minor)).scale(&sign(j as i64));
        det.add_assign(&term);
    }
    det
}
