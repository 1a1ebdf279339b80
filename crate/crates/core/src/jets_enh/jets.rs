use num_traits::One;

use crate::algebroid::{BundleModel, Patch};
use crate::exact_algebra::complex::coordinate_monomials;
use crate::exact_algebra::poly::Exps;
use crate::exact_algebra::{Derivation, Elem, GcAlgebra, Generator, MultiPoly, Rational};
use crate::verdict::{CheckReport, Verdict};

use super::EnhError;

/// `y`-degree of an exponent vector on the variables `x_1..x_n, y_1..y_n`.
pub(crate) fn y_degree(e: &[u32], n: usize) -> u32 {
    e.iter().skip(n).take(n).sum()
}

pub(crate) fn truncate_poly(p: &MultiPoly, n: usize, k: u32) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (e, c) in p.terms() {
        if y_degree(e, n) <= k {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// Drops every coefficient term of `y`-degree above `k`.
pub(crate) fn truncate_elem(e: &Elem, n: usize, k: u32) -> Elem {
    e.map_coeffs(|p| truncate_poly(p, n, k))
}

/// `p(x) -> p(x + y)`.
pub(crate) fn shift_poly(p: &MultiPoly, n: usize) -> MultiPoly {
    let subs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(i).add(&MultiPoly::var(n + i))).collect();
    p.compose(&subs)
}

pub(crate) fn jet_var_names(patch: &Patch) -> Vec<String> {
    let mut names = patch.names().to_vec();
    names.extend(patch.names().iter().map(|x| format!("y_{}", x)));
    names
}

/// `Q[x, y] ⊗ Λ(dx)`: the home of form-valued jets.
pub fn jet_algebra(patch: &Patch) -> GcAlgebra {
    let gens = patch.names().iter().map(|x| Generator::new(format!("d{}", x), 1)).collect();
    GcAlgebra::new(jet_var_names(patch), gens)
}

/// Grothendieck connection `sum_i dx_i (d/dx_i - d/dy_i)` on an algebra whose variables are
/// `x, y` and whose generators `dx` start at `dx_offset`.
pub(crate) fn grothendieck_derivation(alg: &GcAlgebra, n: usize, dx_offset: usize) -> Derivation {
    let mut d = Derivation::zero(alg, 1);
    for i in 0..n {
        d.on_vars[i] = alg.gen(dx_offset + i);
        d.on_vars[n + i] = alg.gen(dx_offset + i).neg();
    }
    d
}

/// A section of `J^K(E)`: one polynomial in `x, y` per frame, of `y`-degree at most `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSection {
    bundle: BundleModel,
    order: u32,
    comps: Vec<MultiPoly>,
}

impl JetSection {
    pub fn new(bundle: &BundleModel, order: u32, comps: Vec<MultiPoly>) -> Result<Self, EnhError> {
        if comps.len() != bundle.rank() {
            return Err(EnhError::Mismatch(format!("expected {} components", bundle.rank())));
        }
        let n = bundle.patch().dim();
        if comps.iter().any(|p| p.var_bound() > 2 * n) {
            return Err(EnhError::Mismatch("coefficients use unknown variables".into()));
        }
        let comps = comps.iter().map(|p| truncate_poly(p, n, order)).collect();
        Ok(Self {
            bundle: bundle.clone(),
            order,
            comps,
        })
    }

    pub fn bundle(&self) -> &BundleModel {
        &self.bundle
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn comps(&self) -> &[MultiPoly] {
        &self.comps
    }

    pub fn dim(&self) -> usize {
        self.bundle.patch().dim()
    }

    /// Value at `y = 0`.
    pub fn evaluate(&self) -> Vec<MultiPoly> {
        let n = self.dim();
        let subs: Vec<MultiPoly> = (0..n)
            .map(MultiPoly::var)
            .chain((0..n).map(|_| MultiPoly::zero()))
            .collect();
        self.comps.iter().map(|p| p.compose(&subs)).collect()
    }

    pub fn display(&self) -> String {
        let names = jet_var_names(self.bundle.patch());
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .map(|(a, p)| format!("{}: {}", self.bundle.name(a), p.display_with(&names)))
            .collect();
        parts.join(", ")
    }
}

/// Taylor expansion `s(x + y)` truncated at `y`-degree `K`.
pub fn jet_prolong(bundle: &BundleModel, s: &[MultiPoly], order: u32) -> Result<JetSection, EnhError> {
    let n = bundle.patch().dim();
    JetSection::new(bundle, order, s.iter().map(|p| shift_poly(p, n)).collect())
}

/// Action of a jet of functions on a jet of sections.
pub fn jet_mult(a: &JetSection, b: &JetSection) -> Result<JetSection, EnhError> {
    if a.bundle.rank() != 1 || a.bundle.degree(0) != 0 {
        return Err(EnhError::Mismatch("the first factor must be a jet of functions".into()));
    }
    if a.bundle.patch() != b.bundle.patch() || a.order != b.order {
        return Err(EnhError::Mismatch("patches or truncation orders differ".into()));
    }
    let f = &a.comps[0];
    JetSection::new(&b.bundle, b.order, b.comps.iter().map(|p| f.mul(p)).collect())
}

/// Monoidal comparison `J(E) ⊗ J(F) -> J(E ⊗ F)` on frames `a.b`.
pub fn jet_tensor(a: &JetSection, b: &JetSection) -> Result<JetSection, EnhError> {
    if a.bundle.patch() != b.bundle.patch() || a.order != b.order {
        return Err(EnhError::Mismatch("patches or truncation orders differ".into()));
    }
    let mut frame = Vec::new();
    let mut comps = Vec::new();
    for i in 0..a.bundle.rank() {
        for j in 0..b.bundle.rank() {
            frame.push((
                format!("{}.{}", a.bundle.name(i), b.bundle.name(j)),
                a.bundle.degree(i) + b.bundle.degree(j),
            ));
            comps.push(a.comps[i].mul(&b.comps[j]));
        }
    }
    let bundle = BundleModel::new(a.bundle.patch().clone(), frame)?;
    JetSection::new(&bundle, a.order, comps)
}

/// Grothendieck connection applied to each component; values live in [`jet_algebra`].
pub fn grothendieck(a: &JetSection) -> Vec<Elem> {
    let alg = jet_algebra(a.bundle.patch());
    let d = grothendieck_derivation(&alg, a.dim(), 0);
    a.comps.iter().map(|p| alg.apply(&d, &Elem::from_poly(p.clone()))).collect()
}

/// `int_0^1 t^{k-1} F(x + (1-t) y, t y) dt` followed by contraction with `-y`, on each
/// `k`-form part; zero on functions.
pub(crate) fn homotopy(alg: &GcAlgebra, n: usize, e: &Elem) -> Elem {
    let t = 2 * n;
    let mut subs: Vec<MultiPoly> = Vec::with_capacity(2 * n);
    let one_minus_t = MultiPoly::one().sub(&MultiPoly::var(t));
    for i in 0..n {
        subs.push(MultiPoly::var(i).add(&MultiPoly::var(n + i).mul(&one_minus_t)));
    }
    for i in 0..n {
        subs.push(MultiPoly::var(n + i).mul(&MultiPoly::var(t)));
    }
    let mut contract = Derivation::zero(alg, -1);
    for i in 0..n {
        contract.on_gens[i] = Elem::from_poly(MultiPoly::var(n + i).neg());
    }
    let mut out = Elem::zero();
    for (m, f) in e.terms() {
        let k: u32 = m.iter().map(|&x| x as u32).sum();
        if k == 0 {
            continue;
        }
        let g = f.compose(&subs);
        let mut integrated = MultiPoly::zero();
        for (ex, c) in g.terms() {
            let tdeg = ex.get(t).copied().unwrap_or(0) + k - 1;
            let mut rest: Exps = ex.clone();
            rest.truncate(t);
            integrated.add_term(rest, c / Rational::from_integer((tdeg + 1).into()));
        }
        out.add_assign(&alg.apply(&contract, &Elem::term(m.clone(), integrated)));
    }
    out
}

/// `j(F(x, 0))` on functions, zero on forms of positive degree.
pub(crate) fn prolong_evaluate(n: usize, e: &Elem) -> Elem {
    let f = e.coeff(&[]);
    let subs: Vec<MultiPoly> = (0..n)
        .map(MultiPoly::var)
        .chain((0..n).map(|_| MultiPoly::zero()))
        .collect();
    Elem::from_poly(shift_poly(&f.compose(&subs), n))
}

/// Verifies `nabla h + h nabla = id - j ev` and `nabla^2 = 0` on every monomial
/// `x^a y^b dx^I` with `|a| + |b| <= K` of the standard `n`-dimensional patch.
pub fn contracting_homotopy_check(n: usize, order: u32) -> CheckReport {
    let patch = Patch::with_dim(n);
    let alg = jet_algebra(&patch);
    let d = grothendieck_derivation(&alg, n, 0);
    let caps = vec![1u16; n];
    let mut forms = Vec::new();
    for k in 0..=n as i32 {
        forms.extend(alg.monomials_of_degree(k, &caps));
    }
    let mut identity = None;
    let mut square = None;
    'outer: for deg in 0..=order {
        for ex in coordinate_monomials(2 * n, deg) {
            for m in &forms {
                let e = Elem::term(m.clone(), MultiPoly::monomial(ex.clone(), Rational::one()));
                let lhs = alg.apply(&d, &homotopy(&alg, n, &e)).add(&homotopy(&alg, n, &alg.apply(&d, &e)));
                let rhs = e.sub(&prolong_evaluate(n, &e));
                if lhs != rhs && identity.is_none() {
                    identity = Some(format!(
                        "on {}: nabla h + h nabla = {} but id - j ev = {}",
                        alg.display(&e),
                        alg.display(&lhs),
                        alg.display(&rhs)
                    ));
                }
                let dd = alg.apply(&d, &alg.apply(&d, &e));
                if !dd.is_zero() && square.is_none() {
                    square = Some(format!("nabla^2({}) = {}", alg.display(&e), alg.display(&dd)));
                }
                if identity.is_some() && square.is_some() {
                    break 'outer;
                }
            }
        }
    }
    let mut report = CheckReport::new();
    report.push(Verdict::from_witness("homotopy_identity", identity));
    report.push(Verdict::from_witness("nabla_squared", square));
    report
}

/// Horizontality of a jet: `nabla a` modulo `F^{order}`, which is the exact statement for a
/// truncated Taylor series.
pub fn is_horizontal(a: &JetSection) -> bool {
    if a.order == 0 {
        return true;
    }
    let n = a.dim();
    grothendieck(a).iter().all(|e| truncate_elem(e, n, a.order - 1).is_zero())
}
