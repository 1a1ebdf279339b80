//! The Weil algebra `W(L, nabla)` of an ungraded Lie algebroid.
//!
//! Elements are polynomials in `x`, odd generators `xi^a` of bidegree (1,0), odd `dx^i` of
//! bidegree (0,1) and even `zeta^a` of bidegree (1,1). A term with `k` factors of `zeta` lies in
//! `Λ^{p-k} L^∨ ⊗ Λ^{q-k} T^∨ ⊗ Sym^k L^∨`.
//!
//! The same generators read with `dxi^a` in place of `zeta^a` give the de Rham algebra of the
//! graded manifold `L[1]`, with `d_dR` and `L_Q`. The connection identifies the two through
//! `zeta = dxi - nabla xi`; `d_ver` and `d_hor` are `d_dR` and `L_Q` carried across.

pub mod one_forms;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebroid::ce::weight_shift;
use crate::algebroid::{AlgebroidError, CeAlgebra, ConnectionModel, LieAlgebroidModel, SliceMode, SliceResult};
use crate::exact_algebra::complex::{build_slice, coordinate_monomials, BasisKey};
use crate::exact_algebra::{AlgMap, Cohomology, Derivation, Elem, ExactError, GcAlgebra, Generator, Mono};
use crate::ruth::RuthError;

pub use one_forms::{one_forms_as_coadjoint, OneFormsIso};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeilError {
    #[error("the Weil algebra is only built for ungraded algebroids; '{0}' has nonzero degree")]
    Graded(String),
    #[error("connection does not live on the bundle of the algebroid")]
    Connection,
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Ruth(#[from] RuthError),
}

/// An element of the Weil algebra.
pub type WeilElement = Elem;

#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    ce: CeAlgebra,
    nabla: ConnectionModel,
    alg: GcAlgebra,
    d_hor: Derivation,
    d_ver: Derivation,
    to_de_rham: AlgMap,
    from_de_rham: AlgMap,
}

impl WeilAlgebra {
    pub fn new(l: &LieAlgebroidModel, nabla: &ConnectionModel) -> Result<Self, WeilError> {
        if let Some((name, _)) = l.bundle().frame().iter().find(|(_, d)| *d != 0) {
            return Err(WeilError::Graded(name.clone()));
        }
        if nabla.bundle() != l.bundle() {
            return Err(WeilError::Connection);
        }
        let ce = CeAlgebra::new(l);
        let (r, n) = (l.rank(), l.dim());
        let mut gens: Vec<Generator> = ce.alg().gens().to_vec();
        gens.extend(l.patch().names().iter().map(|x| Generator::new(format!("d{}", x), 1)));
        gens.extend(l.bundle().frame().iter().map(|(a, _)| Generator::new(format!("zeta_{}", a), 2)));
        let alg = GcAlgebra::new(l.patch().names().to_vec(), gens);

        let xi = |a: usize| alg.gen(a);
        let dx = |i: usize| alg.gen(r + i);
        let top = |a: usize| alg.gen(r + n + a);
        // nabla xi^a = -sum gamma(i, b, a) dx^i xi^b
        let nabla_xi = |a: usize| {
            let mut out = Elem::zero();
            for i in 0..n {
                for b in 0..r {
                    let g = nabla.gamma(i, b, a);
                    if !g.is_zero() {
                        out.add_assign(&alg.mul(&dx(i), &xi(b)).scale_poly(&g.neg()));
                    }
                }
            }
            out
        };
        let keep = |alg: &GcAlgebra| -> Vec<Elem> { (0..alg.ngens()).map(|j| alg.gen(j)).collect() };
        let mut from_gens = keep(&alg);
        let mut to_gens = keep(&alg);
        for a in 0..r {
            from_gens[r + n + a] = top(a).add(&nabla_xi(a));
            to_gens[r + n + a] = top(a).sub(&nabla_xi(a));
        }
        let from_de_rham = AlgMap {
            on_vars: vec![None; n],
            on_gens: from_gens,
        };
        let to_de_rham = AlgMap {
            on_vars: vec![None; n],
            on_gens: to_gens,
        };

        let mut d_dr = Derivation::zero(&alg, 1);
        for i in 0..n {
            d_dr.on_vars[i] = dx(i);
        }
        for a in 0..r {
            d_dr.on_gens[a] = top(a);
        }
        let mut l_q = Derivation::zero(&alg, 1);
        for i in 0..n {
            l_q.on_vars[i] = ce.d(&alg.var(i));
            l_q.on_gens[r + i] = alg.apply(&d_dr, &l_q.on_vars[i]).neg();
        }
        for a in 0..r {
            l_q.on_gens[a] = ce.differential().on_gens[a].clone();
            l_q.on_gens[r + n + a] = alg.apply(&d_dr, &l_q.on_gens[a]).neg();
        }

        let conjugate = |d: &Derivation| -> Derivation {
            let through = |e: &Elem| {
                let e = alg.map_elem(&alg, &to_de_rham, e);
                alg.map_elem(&alg, &from_de_rham, &alg.apply(d, &e))
            };
            Derivation {
                degree: d.degree,
                on_vars: (0..n).map(|i| through(&alg.var(i))).collect(),
                on_gens: (0..alg.ngens()).map(|j| through(&alg.gen(j))).collect(),
            }
        };
        let d_hor = conjugate(&l_q);
        let d_ver = conjugate(&d_dr);
        Ok(Self {
            ce,
            nabla: nabla.clone(),
            alg,
            d_hor,
            d_ver,
            to_de_rham,
            from_de_rham,
        })
    }

    pub fn algebroid(&self) -> &LieAlgebroidModel {
        self.ce.model()
    }

    pub fn connection(&self) -> &ConnectionModel {
        &self.nabla
    }

    pub fn ce(&self) -> &CeAlgebra {
        &self.ce
    }

    pub fn alg(&self) -> &GcAlgebra {
        &self.alg
    }

    pub fn rank(&self) -> usize {
        self.algebroid().rank()
    }

    pub fn dim(&self) -> usize {
        self.algebroid().dim()
    }

    pub fn xi(&self, a: usize) -> Elem {
        self.alg.gen(a)
    }

    pub fn dx(&self, i: usize) -> Elem {
        self.alg.gen(self.rank() + i)
    }

    pub fn zeta(&self, a: usize) -> Elem {
        self.alg.gen(self.rank() + self.dim() + a)
    }

    pub fn d_hor_derivation(&self) -> &Derivation {
        &self.d_hor
    }

    pub fn d_ver_derivation(&self) -> &Derivation {
        &self.d_ver
    }

    pub fn d_hor(&self, w: &WeilElement) -> WeilElement {
        self.alg.apply(&self.d_hor, w)
    }

    pub fn d_ver(&self, w: &WeilElement) -> WeilElement {
        self.alg.apply(&self.d_ver, w)
    }

    pub fn d_total(&self, w: &WeilElement) -> WeilElement {
        self.d_hor(w).add(&self.d_ver(w))
    }

    /// Rewrites `zeta` as `dxi - nabla xi`.
    pub fn to_de_rham(&self, w: &WeilElement) -> Elem {
        self.alg.map_elem(&self.alg, &self.to_de_rham, w)
    }

    /// Rewrites `dxi` as `zeta + nabla xi`.
    pub fn from_de_rham(&self, e: &Elem) -> WeilElement {
        self.alg.map_elem(&self.alg, &self.from_de_rham, e)
    }

    /// `(p, q, k)` of a generator monomial.
    pub fn tridegree(&self, m: &[u16]) -> (u32, u32, u32) {
        let (r, n) = (self.rank(), self.dim());
        let count = |range: std::ops::Range<usize>| range.map(|j| Elem::exp(m, j) as u32).sum::<u32>();
        let xi = count(0..r);
        let dx = count(r..r + n);
        let k = count(r + n..r + n + r);
        (xi + k, dx + k, k)
    }

    /// Homogeneous components indexed by `(p, q, k)`.
    pub fn components(&self, w: &WeilElement) -> BTreeMap<(u32, u32, u32), WeilElement> {
        let mut out: BTreeMap<(u32, u32, u32), Elem> = BTreeMap::new();
        for (m, p) in w.terms() {
            out.entry(self.tridegree(m)).or_default().add_term(m.clone(), p.clone());
        }
        out
    }

    fn weight_of(&self, m: &[u16], xdeg: u32, delta: i64) -> i64 {
        let (p, q, k) = self.tridegree(m);
        xdeg as i64 - delta * p as i64 + (q - k) as i64
    }

    fn monomials(&self, k: i32) -> Vec<Mono> {
        let caps: Vec<u16> = self.alg.gens().iter().map(|g| (k.max(0) / g.degree) as u16).collect();
        self.alg.monomials_of_degree(k, &caps)
    }

    /// Total-degree slice on `lo..=hi`.
    ///
    /// In weight mode the basis consists of de Rham monomials of fixed weight carried to
    /// Weil generators, which spans a subcomplex for every connection; the slice is exact.
    /// Truncation keeps Weil monomials with coefficients of degree at most `K`.
    pub fn totalize(&self, mode: SliceMode, lo: i32, hi: i32) -> Result<SliceResult, WeilError> {
        let n = self.dim();
        match mode {
            SliceMode::Weight(w) => {
                let delta = weight_shift(self.algebroid())?;
                let basis = |k: i32| -> Vec<BasisKey> {
                    let mut out = Vec::new();
                    for m in self.monomials(k) {
                        let xdeg = w - self.weight_of(&m, 0, delta);
                        if xdeg >= 0 {
                            for ex in coordinate_monomials(n, xdeg as u32) {
                                out.push((m.clone(), ex));
                            }
                        }
                    }
                    out
                };
                let op = |e: &Elem| self.to_de_rham(&self.d_total(&self.from_de_rham(e)));
                let (slice, bases) = build_slice(&self.alg, lo, hi, basis, op, true)?;
                Ok(SliceResult {
                    slice,
                    bases,
                    approximate: false,
                })
            }
            SliceMode::Truncate(t) => {
                let basis = |k: i32| -> Vec<BasisKey> {
                    let mut out = Vec::new();
                    for m in self.monomials(k) {
                        for xd in 0..=t {
                            for ex in coordinate_monomials(n, xd) {
                                out.push((m.clone(), ex));
                            }
                        }
                    }
                    out
                };
                let (slice, bases) = build_slice(&self.alg, lo, hi, basis, |e| self.d_total(e), false)?;
                Ok(SliceResult {
                    slice,
                    bases,
                    approximate: true,
                })
            }
        }
    }

    /// Cohomology of one slice in degrees `lo..=hi`.
    pub fn cohomology(&self, mode: SliceMode, lo: i32, hi: i32) -> Result<(Cohomology, bool), WeilError> {
        let res = self.totalize(mode, lo - 1, hi + 1)?;
        let full = res.slice.cohomology()?;
        Ok((crate::algebroid::ce::restrict(&full, lo, hi), res.approximate))
    }

    /// Cohomology summed over all weights up to `max_weight`.
    pub fn cohomology_summed(&self, max_weight: i64, lo: i32, hi: i32) -> Result<Cohomology, WeilError> {
        let delta = weight_shift(self.algebroid())?;
        let min_weight = if delta > 0 { -delta * (hi as i64 + 1) } else { 0 };
        let mut total = Cohomology::default();
        for k in lo..=hi {
            total.dims.insert(k, 0);
        }
        for w in min_weight..=max_weight {
            total.accumulate(&self.cohomology(SliceMode::Weight(w), lo, hi)?.0);
        }
        Ok(total)
    }
}

/// Cohomology of the totalized Weil complex; the flag marks approximate (truncated) results.
pub fn weil_cohomology(
    l: &LieAlgebroidModel,
    nabla: &ConnectionModel,
    mode: SliceMode,
    lo: i32,
    hi: i32,
) -> Result<(Cohomology, bool), WeilError> {
    WeilAlgebra::new(l, nabla)?.cohomology(mode, lo, hi)
}
