use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{check_axioms, BundleModel, CeAlgebra, LieAlgebroidModel, SliceMode};
use crate::exact_algebra::complex::{build_slice, coordinate_monomials, BasisKey};
use crate::exact_algebra::rational::{q, sign};
use crate::exact_algebra::{Cohomology, Derivation, Elem, GcAlgebra, Generator, Mono, MultiPoly};
use crate::verdict::{CheckReport, Verdict};

use super::RuthError;

/// A representation up to homotopy on the graded frame `fiber`.
#[derive(Clone, Debug)]
pub struct RepUH {
    ce: CeAlgebra,
    fiber: BundleModel,
    alg: GcAlgebra,
    ops: Vec<Vec<Elem>>,
}

fn form_length(m: &[u16]) -> usize {
    m.iter().map(|&e| e as usize).sum()
}

impl RepUH {
    /// `ops[i][j]` is the coefficient of `eps_j` in `D(eps_i)`; it must lie in `C(L)` and
    /// have degree `|eps_i| + 1 - |eps_j|`.
    pub fn new(l: &LieAlgebroidModel, fiber: BundleModel, ops: Vec<Vec<Elem>>) -> Result<Self, RuthError> {
        if fiber.patch() != l.patch() {
            return Err(RuthError::Shape("fiber and algebroid live on different patches".into()));
        }
        let n = fiber.rank();
        if ops.len() != n || ops.iter().any(|row| row.len() != n) {
            return Err(RuthError::Shape(format!("operator table must be {n} x {n}")));
        }
        let ce = CeAlgebra::new(l);
        let r = l.rank();
        for (i, row) in ops.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                if w.terms().any(|(m, _)| m.len() > r) {
                    return Err(RuthError::Shape(format!(
                        "coefficient of {} in D({}) involves fiber generators",
                        fiber.name(j),
                        fiber.name(i)
                    )));
                }
                let want = fiber.degree(i) + 1 - fiber.degree(j);
                match ce.alg().degree(w) {
                    Some(None) => {}
                    Some(Some(d)) if d == want => {}
                    _ => {
                        return Err(RuthError::Degree(format!(
                            "coefficient of {} in D({}) must have degree {}",
                            fiber.name(j),
                            fiber.name(i),
                            want
                        )))
                    }
                }
            }
        }
        let extra = fiber.frame().iter().map(|(name, d)| Generator::new(name.clone(), *d)).collect();
        let alg = ce.alg().with_extra_generators(extra);
        let ops = ops.into_iter().map(|row| row.into_iter().map(|w| ce.alg().truncate(&w)).collect()).collect();
        Ok(Self { ce, fiber, alg, ops })
    }

    /// `C(L)` itself: one frame of degree 0 with `D = d_L`.
    pub fn trivial(l: &LieAlgebroidModel) -> Self {
        let fiber = BundleModel::new(l.patch().clone(), vec![("1".into(), 0)]).expect("single frame");
        Self::new(l, fiber, vec![vec![Elem::zero()]]).expect("zero operator")
    }

    pub fn algebroid(&self) -> &LieAlgebroidModel {
        self.ce.model()
    }

    pub fn ce(&self) -> &CeAlgebra {
        &self.ce
    }

    pub fn fiber(&self) -> &BundleModel {
        &self.fiber
    }

    pub fn rank(&self) -> usize {
        self.fiber.rank()
    }

    /// The algebra `C(L)^# [eps]` in which module elements are the `eps`-linear part.
    pub fn alg(&self) -> &GcAlgebra {
        &self.alg
    }

    pub fn ops(&self) -> &[Vec<Elem>] {
        &self.ops
    }

    pub fn op(&self, i: usize, j: usize) -> &Elem {
        &self.ops[i][j]
    }

    /// Index offset of the fiber generators in [`RepUH::alg`].
    pub fn offset(&self) -> usize {
        self.algebroid().rank()
    }

    pub fn eps(&self, i: usize) -> Elem {
        self.alg.gen(self.offset() + i)
    }

    /// `D` as a degree-one derivation of `C(L)^# [eps]`.
    pub fn derivation(&self) -> Derivation {
        let r = self.offset();
        let dl = self.ce.differential();
        let mut d = Derivation::zero(&self.alg, 1);
        d.on_vars = dl.on_vars.clone();
        d.on_gens[..r].clone_from_slice(&dl.on_gens);
        for i in 0..self.rank() {
            d.on_gens[r + i] = self.module_elem(&self.ops[i]);
        }
        d
    }

    /// `D` on a module element.
    pub fn apply(&self, v: &Elem) -> Elem {
        self.alg.apply(&self.derivation(), v)
    }

    /// `sum_i c_i eps_i`.
    pub fn module_elem(&self, coeffs: &[Elem]) -> Elem {
        let mut out = Elem::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out.add_assign(&self.alg.mul(c, &self.eps(i)));
        }
        out
    }

    /// Coefficients `c_i` of an `eps`-linear element `sum_i c_i eps_i`.
    pub fn coefficients(&self, v: &Elem) -> Vec<Elem> {
        let r = self.offset();
        let mut out = vec![Elem::zero(); self.rank()];
        for (m, p) in v.terms() {
            let tail = if m.len() > r { &m[r..] } else { &[][..] };
            let hits: Vec<usize> = tail.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i).collect();
            if hits.len() == 1 && tail[hits[0]] == 1 {
                let mut head: Mono = m[..r.min(m.len())].to_vec();
                while head.last() == Some(&0) {
                    head.pop();
                }
                out[hits[0]].add_term(head, p.clone());
            }
        }
        out
    }

    /// Form-degree `k` part of the operator table.
    pub fn component(&self, k: usize) -> Vec<Vec<Elem>> {
        self.ops
            .iter()
            .map(|row| row.iter().map(|w| w.filter(|m, _| form_length(m) == k)).collect())
            .collect()
    }

    /// Largest `k` with `D_k != 0`, or `None` for the zero operator.
    pub fn top_component(&self) -> Option<usize> {
        self.ops.iter().flatten().flat_map(|w| w.terms().map(|(m, _)| form_length(m))).max()
    }

    fn display_elem(&self, e: &Elem) -> String {
        self.alg.display(e)
    }

    /// Checks the axioms of `L`, `D^2 = 0` on every frame and the Leibniz rule on seeded samples.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new();
        let axioms = check_axioms(self.algebroid());
        report.push(Verdict::from_witness(
            "algebroid_axioms",
            axioms.first_failure().map(|v| v.to_string()),
        ));
        let d = self.derivation();
        let mut witness = None;
        for i in 0..self.rank() {
            let dd = self.alg.apply(&d, &self.alg.apply(&d, &self.eps(i)));
            if !dd.is_zero() {
                witness = Some(format!("D^2({}) = {}", self.fiber.name(i), self.display_elem(&dd)));
                break;
            }
        }
        report.push(Verdict::from_witness("d_squared", witness));
        report.push(self.leibniz_check(7));
        report
    }

    fn leibniz_check(&self, seed: u64) -> Verdict {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ce = &self.ce;
        let n = self.alg.nvars();
        for deg in 0..=2 {
            let mut alpha = Elem::zero();
            for m in ce.monomials(deg) {
                for xd in 0..=1 {
                    for ex in coordinate_monomials(n, xd) {
                        let c = rng.gen_range(-2..=2);
                        alpha.add_term(m.clone(), MultiPoly::monomial(ex, q(c)));
                    }
                }
            }
            for i in 0..self.rank() {
                let lhs = self.apply(&self.alg.mul(&alpha, &self.eps(i)));
                let da = ce.d(&alpha);
                let rhs = self.alg.mul(&da, &self.eps(i)).add(
                    &self
                        .alg
                        .mul(&alpha, &self.module_elem(&self.ops[i]))
                        .scale(&sign(deg as i64)),
                );
                if self.alg.truncate(&lhs) != self.alg.truncate(&rhs) {
                    return Verdict::fail(
                        "leibniz",
                        format!(
                            "on {} * {}: D gives {} but the Leibniz rule gives {}",
                            ce.alg().display(&alpha),
                            self.fiber.name(i),
                            self.display_elem(&lhs),
                            self.display_elem(&rhs)
                        ),
                    );
                }
            }
        }
        Verdict::pass("leibniz")
    }

    fn require_valid(&self) -> Result<(), RuthError> {
        match self.validate().first_failure() {
            Some(f) => Err(RuthError::Invalid(f.to_string())),
            None => Ok(()),
        }
    }

    fn same_algebroid(&self, other: &RepUH) -> Result<(), RuthError> {
        if self.algebroid() != other.algebroid() {
            return Err(RuthError::AlgebroidMismatch);
        }
        Ok(())
    }

    /// The dual representation on `E^∨`, fixed by
    /// `d_L ev(s, s') = ev(D s, s') + (-1)^{|s|} ev(s, D s')`.
    pub fn dual(&self) -> Result<RepUH, RuthError> {
        self.require_valid()?;
        let n = self.rank();
        let frame: Vec<(String, i32)> = self
            .fiber
            .frame()
            .iter()
            .map(|(name, d)| (format!("{}^", name), -d))
            .collect();
        let fiber = BundleModel::new(self.fiber.patch().clone(), frame)?;
        let mut ops = vec![vec![Elem::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let w = &self.ops[i][j];
                if w.is_zero() {
                    continue;
                }
                let ei = self.fiber.degree(i) as i64;
                let wd = (self.fiber.degree(i) + 1 - self.fiber.degree(j)) as i64;
                ops[j][i] = w.scale(&-sign(ei * (1 + wd)));
            }
        }
        RepUH::new(self.algebroid(), fiber, ops)
    }

    /// Evaluation pairing of `v in C(L) ⊗ E` with `w in C(L) ⊗ E^∨`, where `dual` is the
    /// dual of `self`: `ev(a eps_i, b eps^i) = (-1)^{|eps_i||b|} a b`.
    pub fn pairing(&self, dual: &RepUH, v: &Elem, w: &Elem) -> Elem {
        let a = self.coefficients(v);
        let b = dual.coefficients(w);
        let alg = self.ce.alg();
        let mut out = Elem::zero();
        for i in 0..self.rank() {
            for (m, p) in b[i].terms() {
                let s = sign(self.fiber.degree(i) as i64 * alg.mono_degree(m) as i64);
                let bt = Elem::term(m.clone(), p.scale(&s));
                out.add_assign(&alg.mul(&a[i], &bt));
            }
        }
        out
    }

    /// Checks the defining relation of the dual on all frame pairs.
    pub fn check_pairing(&self, dual: &RepUH) -> Verdict {
        for i in 0..self.rank() {
            for j in 0..dual.rank() {
                let s = self.eps(i);
                let t = dual.eps(j);
                let lhs = self.ce.d(&self.pairing(dual, &s, &t));
                let rhs = self.pairing(dual, &self.apply(&s), &t).add(
                    &self
                        .pairing(dual, &s, &dual.apply(&t))
                        .scale(&sign(self.fiber.degree(i) as i64)),
                );
                if self.ce.alg().truncate(&lhs) != self.ce.alg().truncate(&rhs) {
                    return Verdict::fail(
                        "dual_pairing",
                        format!("frames ({}, {})", self.fiber.name(i), dual.fiber.name(j)),
                    );
                }
            }
        }
        Verdict::pass("dual_pairing")
    }

    /// Tensor product with `D(s ⊗ t) = D s ⊗ t + (-1)^{|s|} s ⊗ D t`.
    pub fn tensor(&self, other: &RepUH) -> Result<RepUH, RuthError> {
        self.same_algebroid(other)?;
        let (n1, n2) = (self.rank(), other.rank());
        let mut frame = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                frame.push((
                    format!("{}.{}", self.fiber.name(i), other.fiber.name(j)),
                    self.fiber.degree(i) + other.fiber.degree(j),
                ));
            }
        }
        let fiber = BundleModel::new(self.fiber.patch().clone(), frame)?;
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut ops = vec![vec![Elem::zero(); n1 * n2]; n1 * n2];
        for i in 0..n1 {
            let ei = self.fiber.degree(i) as i64;
            for j in 0..n2 {
                for k in 0..n1 {
                    ops[idx(i, j)][idx(k, j)].add_assign(&self.ops[i][k]);
                }
                for l in 0..n2 {
                    let th = &other.ops[j][l];
                    if th.is_zero() {
                        continue;
                    }
                    let td = (other.fiber.degree(j) + 1 - other.fiber.degree(l)) as i64;
                    ops[idx(i, j)][idx(i, l)].add_assign(&th.scale(&sign(ei + ei * td)));
                }
            }
        }
        RepUH::new(self.algebroid(), fiber, ops)
    }

    /// Direct sum `E ⊕ E'`.
    pub fn direct_sum(&self, other: &RepUH) -> Result<RepUH, RuthError> {
        self.same_algebroid(other)?;
        let (n1, n2) = (self.rank(), other.rank());
        let frame: Vec<(String, i32)> = self.fiber.frame().iter().chain(other.fiber.frame()).cloned().collect();
        let fiber = BundleModel::new(self.fiber.patch().clone(), frame)?;
        let mut ops = vec![vec![Elem::zero(); n1 + n2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..n1 {
                ops[i][j] = self.ops[i][j].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                ops[n1 + i][n1 + j] = other.ops[i][j].clone();
            }
        }
        RepUH::new(self.algebroid(), fiber, ops)
    }

    /// Graded symmetric power `Sym^p E`, with `D` extended as a derivation.
    pub fn symmetric_power(&self, p: u16) -> Result<RepUH, RuthError> {
        let r = self.offset();
        let n = self.rank();
        let fiber_alg = GcAlgebra::new(
            Vec::new(),
            self.fiber.frame().iter().map(|(name, d)| Generator::new(name.clone(), *d)).collect(),
        );
        let mut monos = Vec::new();
        let mut cur = vec![0u16; n];
        fn rec(alg: &GcAlgebra, j: usize, left: u16, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if j == cur.len() {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let cap = if alg.is_odd(j) { left.min(1) } else { left };
            for k in (0..=cap).rev() {
                cur[j] = k;
                rec(alg, j + 1, left - k, cur, out);
            }
            cur[j] = 0;
        }
        rec(&fiber_alg, 0, p, &mut cur, &mut monos);
        let name = |m: &[u16]| -> String {
            let mut parts = Vec::new();
            for (j, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    parts.push(self.fiber.name(j).to_string());
                }
            }
            parts.join("·")
        };
        let degree = |m: &[u16]| -> i32 { m.iter().enumerate().map(|(j, &e)| e as i32 * self.fiber.degree(j)).sum() };
        let frame: Vec<(String, i32)> = monos.iter().map(|m| (name(m), degree(m))).collect();
        let fiber = BundleModel::new(self.fiber.patch().clone(), frame)?;
        let index: BTreeMap<Vec<u16>, usize> = monos
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut t = m.clone();
                while t.last() == Some(&0) {
                    t.pop();
                }
                (t, i)
            })
            .collect();
        let embed = |m: &[u16]| -> Mono {
            let mut full = vec![0u16; r + n];
            full[r..].copy_from_slice(m);
            while full.last() == Some(&0) {
                full.pop();
            }
            full
        };
        let d = self.derivation();
        let mut ops = vec![vec![Elem::zero(); monos.len()]; monos.len()];
        for (i, m) in monos.iter().enumerate() {
            let img = self.alg.apply(&d, &self.alg.mono_elem(&embed(m)));
            for (mono, coeff) in img.terms() {
                let mut head: Mono = mono[..r.min(mono.len())].to_vec();
                while head.last() == Some(&0) {
                    head.pop();
                }
                let mut tail: Vec<u16> = if mono.len() > r { mono[r..].to_vec() } else { Vec::new() };
                while tail.last() == Some(&0) {
                    tail.pop();
                }
                let j = index[&tail];
                ops[i][j].add_term(head, coeff.clone());
            }
        }
        RepUH::new(self.algebroid(), fiber, ops)
    }
}

/// Cohomology of `C(L) ⊗ E` on a slice.
#[derive(Clone, Debug)]
pub struct RepCohomology {
    pub cohomology: Cohomology,
    pub approximate: bool,
}

/// Cohomology of `(C(L) ⊗ E, D)` in degrees `lo..=hi`.
///
/// Over a point the complex is finite and `Weight(0)` is exact; on a patch only
/// truncation is supported and the result is flagged approximate.
pub fn rep_cohomology(r: &RepUH, mode: SliceMode, lo: i32, hi: i32) -> Result<RepCohomology, RuthError> {
    let dim = r.alg().nvars();
    let (xdegs, strict): (Vec<u32>, bool) = match mode {
        SliceMode::Weight(w) if dim == 0 => (if w == 0 { vec![0] } else { vec![] }, true),
        SliceMode::Weight(_) => {
            return Err(RuthError::Slice(
                "weight slices of representations are only available over a point; use truncation".into(),
            ))
        }
        SliceMode::Truncate(k) => ((0..=k).collect(), dim == 0),
    };
    let off = r.offset();
    let basis = |k: i32| -> Vec<BasisKey> {
        let mut out = Vec::new();
        for i in 0..r.rank() {
            for m in r.ce().monomials(k - r.fiber().degree(i)) {
                let mut full = m.clone();
                full.resize(off + i + 1, 0);
                full[off + i] = 1;
                for &xd in &xdegs {
                    for ex in coordinate_monomials(dim, xd) {
                        out.push((full.clone(), ex));
                    }
                }
            }
        }
        out
    };
    let d = r.derivation();
    let (slice, _) = build_slice(r.alg(), lo - 1, hi + 1, basis, |e| r.alg().apply(&d, e), strict)?;
    let full = slice.cohomology()?;
    Ok(RepCohomology {
        cohomology: crate::algebroid::ce::restrict(&full, lo, hi),
        approximate: !strict,
    })
}
