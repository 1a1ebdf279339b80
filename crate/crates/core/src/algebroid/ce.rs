//! Chevalley–Eilenberg algebra `Sym(L^∨[-1])` over the patch with its differential `d_L`.
//!
//! Generators are `xi_<frame>` of degree `1 - |e_a|`. The differential is the
//! derivation with
//!
//! ```text
//! d x^i   = sum_a rho^i_a xi^a
//! d xi^k  = -1/2 sum_{a,b} (-1)^{|a|(|b|+1)} c^k_{ab} xi^a xi^b - sum_a (-1)^{|a|} D^k_a xi^a
//! ```
//!
//! where `D e_a = sum_k D^k_a e_k` is the internal differential.

use std::collections::BTreeMap;

use num_traits::One;

use crate::exact_algebra::complex::{build_slice, coordinate_monomials, BasisKey};
use crate::exact_algebra::rational::{qf, sign};
use crate::exact_algebra::{
    AlgMap, Cohomology, ComplexSlice, Derivation, Elem, GcAlgebra, Generator, Mono, MultiPoly, PolyForm, Rational,
    Truncation,
};
use crate::verdict::Verdict;

use super::model::{LieAlgebroidModel, Patch};
use super::AlgebroidError;

/// How an infinite CE complex is cut into a finite slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceMode {
    /// Exact slice of fixed weight `x-degree - delta * degree`.
    Weight(i64),
    /// Coefficients of polynomial degree at most `K`, differential projected (approximate).
    Truncate(u32),
}

#[derive(Clone, Debug)]
pub struct SliceResult {
    pub slice: ComplexSlice,
    pub bases: BTreeMap<i32, Vec<BasisKey>>,
    pub approximate: bool,
}

#[derive(Clone, Debug)]
pub struct CeAlgebra {
    model: LieAlgebroidModel,
    alg: GcAlgebra,
    d: Derivation,
    even_cap: u16,
}

/// Default exponent cap for generators of degree `<= 0`.
pub const DEFAULT_EVEN_CAP: u16 = 2;

impl CeAlgebra {
    pub fn new(model: &LieAlgebroidModel) -> Self {
        Self::with_cap(model, DEFAULT_EVEN_CAP)
    }

    /// CE algebra where generators of nonpositive degree carry exponent at most `cap`.
    pub fn with_cap(model: &LieAlgebroidModel, cap: u16) -> Self {
        let gens: Vec<Generator> = model
            .bundle()
            .frame()
            .iter()
            .map(|(n, d)| Generator::new(format!("xi_{}", n), 1 - d))
            .collect();
        let mut alg = GcAlgebra::new(model.patch().names().to_vec(), gens.clone());
        if gens.iter().any(|g| g.degree <= 0 && g.degree % 2 == 0) {
            let weights = gens.iter().map(|g| u32::from(g.degree <= 0)).collect();
            alg = alg.with_truncation(Truncation {
                weights,
                max: cap as u32,
            });
        }
        let d = differential_on(model, &alg);
        Self {
            model: model.clone(),
            alg,
            d,
            even_cap: cap,
        }
    }

    pub fn model(&self) -> &LieAlgebroidModel {
        &self.model
    }

    pub fn alg(&self) -> &GcAlgebra {
        &self.alg
    }

    pub fn differential(&self) -> &Derivation {
        &self.d
    }

    pub fn xi(&self, a: usize) -> Elem {
        self.alg.gen(a)
    }

    pub fn function(&self, f: MultiPoly) -> Elem {
        Elem::from_poly(f)
    }

    pub fn d(&self, e: &Elem) -> Elem {
        self.alg.apply(&self.d, e)
    }

    /// First coordinate or generator on which `d^2` does not vanish.
    pub fn d_squared_witness(&self) -> Option<String> {
        let candidates = (0..self.alg.nvars())
            .map(|i| (self.alg.var_names()[i].clone(), self.alg.var(i)))
            .chain((0..self.alg.ngens()).map(|j| (self.alg.gens()[j].name.clone(), self.alg.gen(j))));
        for (name, g) in candidates {
            let dd = self.d(&self.d(&g));
            if !dd.is_zero() {
                return Some(format!("d^2({}) = {}", name, self.alg.display(&dd)));
            }
        }
        None
    }

    /// `d^2` on every basis element of degrees `lo..=hi` with coefficients of degree `<= max_x`.
    pub fn d_squared_on_basis(&self, lo: i32, hi: i32, max_x: u32) -> Option<String> {
        for n in lo..=hi {
            for m in self.monomials(n) {
                for xd in 0..=max_x {
                    for ex in coordinate_monomials(self.alg.nvars(), xd) {
                        let e = Elem::term(m.clone(), MultiPoly::monomial(ex, Rational::one()));
                        let dd = self.d(&self.d(&e));
                        if !dd.is_zero() {
                            return Some(format!("d^2({}) = {}", self.alg.display(&e), self.alg.display(&dd)));
                        }
                    }
                }
            }
        }
        None
    }

    /// Generator monomials of cohomological degree `n`.
    pub fn monomials(&self, n: i32) -> Vec<Mono> {
        let caps: Vec<u16> = self
            .alg
            .gens()
            .iter()
            .map(|g| {
                if g.degree > 0 {
                    (n.max(0) / g.degree) as u16
                } else {
                    self.even_cap
                }
            })
            .collect();
        self.alg.monomials_of_degree(n, &caps)
    }

    /// Natural degree range: `0..=rank` for ungraded algebroids.
    pub fn default_degrees(&self) -> (i32, i32) {
        if self.model.bundle().is_ungraded() {
            (0, self.model.rank() as i32)
        } else {
            (0, self.model.rank() as i32 + 2)
        }
    }
}

fn differential_on(model: &LieAlgebroidModel, alg: &GcAlgebra) -> Derivation {
    let r = model.rank();
    let mut d = Derivation::zero(alg, 1);
    for (i, slot) in d.on_vars.iter_mut().enumerate() {
        for a in 0..r {
            let p = model.anchor(a, i);
            if !p.is_zero() {
                slot.add_assign(&alg.gen(a).scale_poly(p));
            }
        }
    }
    let half = qf(-1, 2);
    for k in 0..r {
        let mut v = Elem::zero();
        for a in 0..r {
            for b in 0..r {
                let c = model.bracket(a, b, k);
                if c.is_zero() {
                    continue;
                }
                let da = model.degree(a) as i64;
                let db = model.degree(b) as i64;
                let coeff = half.clone() * sign(da * (db + 1));
                let prod = alg.mul(&alg.gen(a), &alg.gen(b));
                v.add_assign(&prod.scale_poly(&c.scale(&coeff)));
            }
            let dk = model.internal_diff(a, k);
            if !dk.is_zero() {
                let coeff = -sign(model.degree(a) as i64);
                v.add_assign(&alg.gen(a).scale_poly(&dk.scale(&coeff)));
            }
        }
        d.on_gens[k] = alg.truncate(&v);
    }
    d
}

/// `d_L` applied to a CE element.
pub fn ce_differential(ce: &CeAlgebra, alpha: &Elem) -> Elem {
    ce.d(alpha)
}

/// Uniform weight shift `delta` of `d_L`, or an error naming the inhomogeneous entry.
pub fn weight_shift(model: &LieAlgebroidModel) -> Result<i64, AlgebroidError> {
    let mut delta: Option<(i64, String)> = None;
    let mut record = |p: &MultiPoly, offset: i64, what: String| -> Result<(), AlgebroidError> {
        match p.homogeneous_degree() {
            Some(None) => Ok(()),
            None => Err(AlgebroidError::NotHomogeneous(format!("{} is not homogeneous", what))),
            Some(Some(h)) => {
                let val = h as i64 + offset;
                match &delta {
                    None => {
                        delta = Some((val, what));
                        Ok(())
                    }
                    Some((d, w)) if *d != val => Err(AlgebroidError::NotHomogeneous(format!(
                        "{} shifts weight by {} but {} shifts it by {}",
                        what, val, w, d
                    ))),
                    _ => Ok(()),
                }
            }
        }
    };
    let r = model.rank();
    let names = model.patch().names();
    for a in 0..r {
        let an = model.bundle().name(a);
        for i in 0..model.dim() {
            record(model.anchor(a, i), -1, format!("anchor {} -> d/d{}", an, names[i]))?;
        }
        for b in 0..r {
            for k in 0..r {
                record(
                    model.bracket(a, b, k),
                    0,
                    format!("bracket [{}, {}] component {}", an, model.bundle().name(b), model.bundle().name(k)),
                )?;
            }
            record(
                model.internal_diff(a, b),
                0,
                format!("internal differential {} -> {}", an, model.bundle().name(b)),
            )?;
        }
    }
    Ok(delta.map_or(0, |(d, _)| d))
}

impl CeAlgebra {
    /// Finite slice of the CE complex in degrees `lo..=hi`.
    pub fn complex(&self, mode: SliceMode, lo: i32, hi: i32) -> Result<SliceResult, AlgebroidError> {
        let n = self.alg.nvars();
        let (strict, approximate, delta) = match mode {
            SliceMode::Weight(_) => (true, false, weight_shift(&self.model)?),
            SliceMode::Truncate(_) => (false, true, 0),
        };
        let basis = |k: i32| -> Vec<BasisKey> {
            let monos = self.monomials(k);
            let xdegs: Vec<u32> = match mode {
                SliceMode::Weight(w) => {
                    let xd = w + delta * k as i64;
                    if xd < 0 {
                        vec![]
                    } else {
                        vec![xd as u32]
                    }
                }
                SliceMode::Truncate(t) => (0..=t).collect(),
            };
            let mut out = Vec::new();
            for m in &monos {
                for &xd in &xdegs {
                    for ex in coordinate_monomials(n, xd) {
                        out.push((m.clone(), ex));
                    }
                }
            }
            out
        };
        let (slice, bases) = build_slice(&self.alg, lo, hi, basis, |e| self.d(e), strict)?;
        Ok(SliceResult {
            slice,
            bases,
            approximate,
        })
    }

    /// Cohomology dims in degrees `lo..=hi` of one slice.
    pub fn cohomology(&self, mode: SliceMode, lo: i32, hi: i32) -> Result<Cohomology, AlgebroidError> {
        let res = self.complex(mode, lo - 1, hi + 1)?;
        let full = res.slice.cohomology()?;
        Ok(restrict(&full, lo, hi))
    }

    /// Cohomology summed over all weights `<= max_weight` (weight mode only).
    pub fn cohomology_summed(&self, max_weight: i64, lo: i32, hi: i32) -> Result<Cohomology, AlgebroidError> {
        let delta = weight_shift(&self.model)?;
        let min_weight = (lo - 1..=hi + 1).map(|k| -delta * k as i64).min().unwrap_or(0);
        let mut total = Cohomology::default();
        for k in lo..=hi {
            total.dims.insert(k, 0);
        }
        for w in min_weight..=max_weight {
            total.accumulate(&self.cohomology(SliceMode::Weight(w), lo, hi)?);
        }
        Ok(total)
    }
}

pub(crate) fn restrict(c: &Cohomology, lo: i32, hi: i32) -> Cohomology {
    Cohomology {
        dims: (lo..=hi).map(|k| (k, c.dim(k))).collect(),
        representatives: c
            .representatives
            .iter()
            .filter(|(k, _)| (lo..=hi).contains(*k))
            .map(|(k, v)| (*k, v.clone()))
            .collect(),
    }
}

pub fn ce_complex(model: &LieAlgebroidModel, mode: SliceMode) -> Result<SliceResult, AlgebroidError> {
    let ce = CeAlgebra::new(model);
    let (lo, hi) = ce.default_degrees();
    ce.complex(mode, lo, hi)
}

pub fn ce_cohomology(model: &LieAlgebroidModel, lo: i32, hi: i32, mode: SliceMode) -> Result<Cohomology, AlgebroidError> {
    CeAlgebra::new(model).cohomology(mode, lo, hi)
}

/// Polynomial de Rham algebra of a patch: coordinates plus odd `dx_<name>`, with `d`.
pub fn de_rham_algebra(patch: &Patch) -> (GcAlgebra, Derivation) {
    let gens = patch.names().iter().map(|n| Generator::new(format!("dx_{}", n), 1)).collect();
    let alg = GcAlgebra::new(patch.names().to_vec(), gens);
    let mut d = Derivation::zero(&alg, 1);
    for i in 0..patch.dim() {
        d.on_vars[i] = alg.gen(i);
    }
    (alg, d)
}

/// Embeds a [`PolyForm`] into the de Rham algebra.
pub fn form_to_elem(form: &PolyForm) -> Elem {
    let mut e = Elem::zero();
    for (subset, f) in form.components() {
        let mut m: Mono = vec![0; subset.iter().max().map_or(0, |x| x + 1)];
        for &i in subset {
            m[i] = 1;
        }
        e.add_term(m, f.clone());
    }
    e
}

/// The cdga map `Omega*_X -> C*(L)`: identity on functions, `dx^i -> rho^∨(dx^i)`.
#[derive(Clone, Debug)]
pub struct AnchorPullback {
    pub de_rham: GcAlgebra,
    pub de_rham_d: Derivation,
    pub map: AlgMap,
}

impl AnchorPullback {
    pub fn apply(&self, ce: &CeAlgebra, e: &Elem) -> Elem {
        self.de_rham.map_elem(ce.alg(), &self.map, e)
    }

    pub fn apply_form(&self, ce: &CeAlgebra, form: &PolyForm) -> Elem {
        self.apply(ce, &form_to_elem(form))
    }

    /// Checks `d_L ∘ rho^∨ = rho^∨ ∘ d` on coordinates and their differentials.
    pub fn check_commutes(&self, ce: &CeAlgebra) -> Verdict {
        let gens = (0..self.de_rham.nvars())
            .map(|i| self.de_rham.var(i))
            .chain((0..self.de_rham.ngens()).map(|j| self.de_rham.gen(j)));
        for g in gens {
            let lhs = ce.d(&self.apply(ce, &g));
            let rhs = self.apply(ce, &self.de_rham.apply(&self.de_rham_d, &g));
            if lhs != rhs {
                return Verdict::fail(
                    "anchor_pullback_cochain",
                    format!(
                        "on {}: d_L(rho(g)) = {} but rho(d g) = {}",
                        self.de_rham.display(&g),
                        ce.alg().display(&lhs),
                        ce.alg().display(&rhs)
                    ),
                );
            }
        }
        Verdict::pass("anchor_pullback_cochain")
    }
}

pub fn anchor_pullback(ce: &CeAlgebra) -> AnchorPullback {
    let (de_rham, de_rham_d) = de_rham_algebra(ce.model().patch());
    let on_gens = (0..ce.model().dim()).map(|i| ce.d(&ce.alg().var(i))).collect();
    AnchorPullback {
        de_rham,
        de_rham_d,
        map: AlgMap {
            on_vars: vec![None; ce.model().dim()],
            on_gens,
        },
    }
}
