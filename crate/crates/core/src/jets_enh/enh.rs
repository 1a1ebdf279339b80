use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{check_axioms, CeAlgebra, ConnectionModel, LieAlgebroidModel};
use crate::exact_algebra::complex::coordinate_monomials;
use crate::exact_algebra::rational::q;
use crate::exact_algebra::poly::Exps;
use crate::exact_algebra::{AlgMap, Derivation, Elem, GcAlgebra, Generator, MultiPoly, Rational};
use crate::verdict::{CheckReport, Verdict};

use super::jets::{contracting_homotopy_check, jet_var_names, shift_poly, truncate_elem, truncate_poly, y_degree};
use super::EnhError;

type PolyMatrix = Vec<Vec<MultiPoly>>;

fn identity_matrix(r: usize) -> PolyMatrix {
    (0..r)
        .map(|a| (0..r).map(|b| if a == b { MultiPoly::one() } else { MultiPoly::zero() }).collect())
        .collect()
}

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix, n: usize, prec: u32) -> PolyMatrix {
    let r = a.len();
    let mut out = vec![vec![MultiPoly::zero(); r]; r];
    for i in 0..r {
        for k in 0..r {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..r {
                if !b[k][j].is_zero() {
                    out[i][j].add_assign(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out.iter().map(|row| row.iter().map(|p| truncate_poly(p, n, prec)).collect()).collect()
}

/// `int_0^t` in the variable with index `t`.
fn integrate(p: &MultiPoly, t: usize) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (e, c) in p.terms() {
        let mut e: Exps = e.clone();
        if e.len() <= t {
            e.resize(t + 1, 0);
        }
        e[t] += 1;
        out.add_term(e.clone(), c / Rational::from_integer(e[t].into()));
    }
    out
}

/// Parallel transport along `s -> x + s y`: entry `[a][b]` is the coefficient of `e_a(x + y)`
/// in the transported frame vector `E_b`, correct modulo `y`-degree above `prec`.
pub(crate) fn transport(nabla: &ConnectionModel, n: usize, prec: u32) -> PolyMatrix {
    let r = nabla.bundle().rank();
    if nabla.is_frame_flat() {
        return identity_matrix(r);
    }
    let t = 2 * n;
    let along: Vec<MultiPoly> = (0..n)
        .map(|j| MultiPoly::var(j).add(&MultiPoly::var(t).mul(&MultiPoly::var(n + j))))
        .collect();
    // A[c][a] = sum_i y_i gamma(i, a, c)(x + t y)
    let mut a_mat = vec![vec![MultiPoly::zero(); r]; r];
    for (c, row) in a_mat.iter_mut().enumerate() {
        for (a, slot) in row.iter_mut().enumerate() {
            for i in 0..n {
                let g = nabla.gamma(i, a, c);
                if !g.is_zero() {
                    slot.add_assign(&MultiPoly::var(n + i).mul(&g.compose(&along)));
                }
            }
        }
    }
    let id = identity_matrix(r);
    let mut m = id.clone();
    for _ in 0..prec {
        let am = mat_mul(&a_mat, &m, n, prec);
        m = id
            .iter()
            .zip(&am)
            .map(|(ir, ar)| ir.iter().zip(ar).map(|(i, p)| i.sub(&integrate(p, t))).collect())
            .collect();
    }
    let mut at_one: Vec<MultiPoly> = (0..t).map(MultiPoly::var).collect();
    at_one.push(MultiPoly::one());
    m.iter().map(|row| row.iter().map(|p| p.compose(&at_one)).collect()).collect()
}

/// Inverse of `I + N` with `N` of positive `y`-degree, modulo `y`-degree above `prec`.
pub(crate) fn unipotent_inverse(m: &PolyMatrix, n: usize, prec: u32) -> PolyMatrix {
    let r = m.len();
    let id = identity_matrix(r);
    let minus_n: PolyMatrix = m
        .iter()
        .zip(&id)
        .map(|(mr, ir)| mr.iter().zip(ir).map(|(p, i)| i.sub(p)).collect())
        .collect();
    let mut out = id.clone();
    let mut power = id;
    for _ in 0..prec {
        power = mat_mul(&power, &minus_n, n, prec);
        for (orow, prow) in out.iter_mut().zip(&power) {
            for (o, p) in orow.iter_mut().zip(prow) {
                o.add_assign(p);
            }
        }
    }
    out
}

/// The curved `L∞` model `enh(L)` on the dual side: `Ĉ(enh L) = Ω_X ⊗ Sym(T^∨ ⊕ L^∨[-1])`
/// with generators `y_i` and `eta^a` over `x, dx`, and the differential `D`.
#[derive(Clone, Debug)]
pub struct EnhSpace {
    ce: CeAlgebra,
    nabla: ConnectionModel,
    order: u32,
    alg: GcAlgebra,
    d: Derivation,
    d_naive: Derivation,
    to_sigma: AlgMap,
    to_naive: AlgMap,
}

/// Builds `enh(L)` for the splitting defined by `nabla`, truncated at jet order `K`.
pub fn build_enh(l: &LieAlgebroidModel, nabla: &ConnectionModel, order: u32) -> Result<EnhSpace, EnhError> {
    if let Some(f) = check_axioms(l).first_failure() {
        return Err(EnhError::Axioms(f.to_string()));
    }
    if order < 1 {
        return Err(EnhError::Order { min: 1, got: order });
    }
    if nabla.bundle() != l.bundle() {
        return Err(EnhError::Connection);
    }
    let e = EnhSpace::new(l, nabla, order);
    if let Some(w) = e.d_squared_witness() {
        return Err(EnhError::Internal(w));
    }
    Ok(e)
}

impl EnhSpace {
    fn new(l: &LieAlgebroidModel, nabla: &ConnectionModel, order: u32) -> Self {
        let ce = CeAlgebra::new(l);
        let (n, r) = (l.dim(), l.rank());
        let mut gens: Vec<Generator> = l
            .bundle()
            .frame()
            .iter()
            .map(|(a, d)| Generator::new(format!("eta_{}", a), 1 - d))
            .collect();
        gens.extend(l.patch().names().iter().map(|x| Generator::new(format!("d{}", x), 1)));
        let mut alg = GcAlgebra::new(jet_var_names(l.patch()), gens);
        for t in ce.alg().truncations() {
            alg = alg.with_truncation(t.clone());
        }

        let prec = order + 2;
        let m = transport(nabla, n, prec);
        let minv = unipotent_inverse(&m, n, prec);
        let frame_map = |mat: &PolyMatrix| -> AlgMap {
            let mut on_gens: Vec<Elem> = (0..alg.ngens()).map(|j| alg.gen(j)).collect();
            for (a, slot) in on_gens.iter_mut().enumerate().take(r) {
                let mut img = Elem::zero();
                for b in 0..r {
                    img.add_assign(&alg.gen(b).scale_poly(&mat[a][b]));
                }
                *slot = img;
            }
            AlgMap {
                on_vars: vec![None; 2 * n],
                on_gens,
            }
        };
        let to_sigma = frame_map(&m);
        let to_naive = frame_map(&minv);

        let dl = ce.differential();
        let lift = |e: &Elem| e.map_coeffs(|p| shift_poly(p, n));
        let dx = |i: usize| alg.gen(r + i);
        let mut d_naive = Derivation::zero(&alg, 1);
        for i in 0..n {
            d_naive.on_vars[i] = dx(i);
            d_naive.on_vars[n + i] = lift(&dl.on_vars[i]).sub(&dx(i));
        }
        for a in 0..r {
            d_naive.on_gens[a] = lift(&dl.on_gens[a]);
        }
        let mut e = Self {
            ce,
            nabla: nabla.clone(),
            order,
            alg,
            d: d_naive.clone(),
            d_naive,
            to_sigma,
            to_naive,
        };
        e.d = e.conjugate(&e.d_naive);
        e
    }

    /// Carries a derivation given in the naive jet frame to the `sigma` frame, keeping
    /// `y`-degree at most `K + 1`.
    pub(crate) fn conjugate(&self, d: &Derivation) -> Derivation {
        let through = |g: &Elem| {
            let g = self.to_naive(g);
            truncate_elem(&self.to_sigma(&self.alg.apply(d, &g)), self.dim(), self.order + 1)
        };
        Derivation {
            degree: d.degree,
            on_vars: (0..self.alg.nvars()).map(|i| through(&self.alg.var(i))).collect(),
            on_gens: (0..self.alg.ngens()).map(|j| through(&self.alg.gen(j))).collect(),
        }
    }

    pub(crate) fn to_sigma(&self, e: &Elem) -> Elem {
        self.alg.map_elem(&self.alg, &self.to_sigma, e)
    }

    pub(crate) fn to_naive(&self, e: &Elem) -> Elem {
        self.alg.map_elem(&self.alg, &self.to_naive, e)
    }

    pub(crate) fn to_sigma_map(&self) -> &AlgMap {
        &self.to_sigma
    }

    pub(crate) fn to_naive_map(&self) -> &AlgMap {
        &self.to_naive
    }

    pub(crate) fn naive_derivation(&self) -> &Derivation {
        &self.d_naive
    }

    /// `x -> x + y`, `xi -> eta` on an element of `C(L)`.
    pub(crate) fn lift_naive(&self, e: &Elem) -> Elem {
        e.map_coeffs(|p| shift_poly(p, self.dim()))
    }

    pub fn algebroid(&self) -> &LieAlgebroidModel {
        self.ce.model()
    }

    pub fn ce(&self) -> &CeAlgebra {
        &self.ce
    }

    pub fn connection(&self) -> &ConnectionModel {
        &self.nabla
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn alg(&self) -> &GcAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.algebroid().dim()
    }

    pub fn rank(&self) -> usize {
        self.algebroid().rank()
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn x(&self, i: usize) -> Elem {
        self.alg.var(i)
    }

    pub fn y(&self, i: usize) -> Elem {
        self.alg.var(self.dim() + i)
    }

    pub fn eta(&self, a: usize) -> Elem {
        self.alg.gen(a)
    }

    pub fn dx(&self, i: usize) -> Elem {
        self.alg.gen(self.rank() + i)
    }

    /// `D` applied exactly to the stored values.
    pub fn d(&self, e: &Elem) -> Elem {
        self.alg.apply(&self.d, e)
    }

    /// Reduction modulo `F^{K+1}`.
    pub fn reduce(&self, e: &Elem) -> Elem {
        truncate_elem(e, self.dim(), self.order)
    }

    pub fn display(&self, e: &Elem) -> String {
        self.alg.display(e)
    }

    /// Generators of `V^∨[-1]`: `y_i` then `eta^a`, with names.
    pub fn v_generators(&self) -> Vec<(String, Elem)> {
        let names = self.alg.var_names().to_vec();
        let mut out: Vec<(String, Elem)> = (0..self.dim()).map(|i| (names[self.dim() + i].clone(), self.y(i))).collect();
        out.extend((0..self.rank()).map(|a| (self.alg.gens()[a].name.clone(), self.eta(a))));
        out
    }

    fn all_generators(&self) -> Vec<(String, Elem)> {
        let mut out: Vec<(String, Elem)> = self
            .alg
            .var_names()
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), self.alg.var(i)))
            .collect();
        out.extend(self.alg.gens().iter().enumerate().map(|(j, g)| (g.name.clone(), self.alg.gen(j))));
        out
    }

    pub(crate) fn d_squared_witness(&self) -> Option<String> {
        for (name, g) in self.all_generators() {
            let dd = self.reduce(&self.d(&self.d(&g)));
            if !dd.is_zero() {
                return Some(format!("D^2({}) = {} mod F^{}", name, self.display(&dd), self.order + 1));
            }
        }
        None
    }

    /// Part of `e` of symmetric degree `s` in the generators `y, eta`.
    pub fn sym_component(&self, e: &Elem, s: u32) -> Elem {
        let (n, r) = (self.dim(), self.rank());
        let mut out = Elem::zero();
        for (m, p) in e.terms() {
            let eta: u32 = (0..r).map(|a| Elem::exp(m, a) as u32).sum();
            if eta > s {
                continue;
            }
            let mut keep = MultiPoly::zero();
            for (ex, c) in p.terms() {
                if y_degree(ex, n) + eta == s {
                    keep.add_term(ex.clone(), c.clone());
                }
            }
            if !keep.is_zero() {
                out.add_term(m.clone(), keep);
            }
        }
        out
    }

    fn curving_witness(&self) -> Option<String> {
        let r = self.rank();
        for (name, g) in self.v_generators() {
            let l0 = self.sym_component(&self.d(&g), 0);
            for (m, p) in l0.terms() {
                let forms: u16 = m.iter().skip(r).sum();
                if forms == 0 {
                    return Some(format!(
                        "curving of {} has a function part {}",
                        name,
                        p.display_with(self.alg.var_names())
                    ));
                }
            }
        }
        None
    }

    /// `D^2 = 0 mod F^{K+1}` on every generator and the curving condition.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new();
        let note = format!("mod F^{}", self.order + 1);
        report.push(Verdict::from_witness("d_squared", self.d_squared_witness()).with_note(note));
        report.push(Verdict::from_witness("curving", self.curving_witness()));
        report
    }

    /// `j_∞`: `x -> x + y` on coefficients and `xi^a` to the jet of the coframe, in the `sigma` frame.
    pub fn j_infty(&self, alpha: &Elem) -> Elem {
        truncate_elem(&self.to_sigma(&self.lift_naive(alpha)), self.dim(), self.order + 1)
    }
}

/// `ℓ_n` in dual form: the `Sym^n` part of `D` on each generator of `V^∨[-1]`.
pub fn extract_brackets(e: &EnhSpace, n: u32) -> Result<Vec<(String, Elem)>, EnhError> {
    if n > e.order + 1 {
        return Err(EnhError::Order { min: n.saturating_sub(1), got: e.order });
    }
    Ok(e
        .v_generators()
        .into_iter()
        .map(|(name, g)| {
            let c = e.sym_component(&e.d(&g), n);
            (name, c)
        })
        .collect())
}

pub(crate) fn random_ce_elem(ce: &CeAlgebra, rng: &mut ChaCha8Rng, deg: i32) -> Elem {
    let n = ce.alg().nvars();
    let mut out = Elem::zero();
    for m in ce.monomials(deg) {
        if rng.gen_bool(0.4) {
            continue;
        }
        for xd in 0..=2 {
            for ex in coordinate_monomials(n, xd) {
                let c = rng.gen_range(-2..=2);
                if c != 0 {
                    out.add_term(m.clone(), MultiPoly::monomial(ex, q(c)));
                }
            }
        }
    }
    out
}

/// Checks that `j_∞` is an algebra map and a cochain map mod `F^{K+1}` on generators and
/// on 50 seeded random products.
pub fn j_infty_compare(e: &EnhSpace, seed: u64) -> CheckReport {
    let ce = e.ce();
    let calg = ce.alg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<Elem> = (0..calg.nvars()).map(|i| calg.var(i)).collect();
    samples.extend((0..calg.ngens()).map(|a| calg.gen(a)));
    let mut algebra = None;
    for _ in 0..50 {
        let (d1, d2) = (rng.gen_range(0..=2), rng.gen_range(0..=1));
        let a = random_ce_elem(ce, &mut rng, d1);
        let b = random_ce_elem(ce, &mut rng, d2);
        let ab = calg.mul(&a, &b);
        if algebra.is_none() {
            let lhs = e.reduce(&e.j_infty(&ab));
            let rhs = e.reduce(&e.alg().mul(&e.j_infty(&a), &e.j_infty(&b)));
            if lhs != rhs {
                algebra = Some(format!(
                    "j({} * {}) differs from the product of the images",
                    calg.display(&a),
                    calg.display(&b)
                ));
            }
        }
        samples.push(ab);
    }
    let mut cochain = None;
    for s in &samples {
        let lhs = e.reduce(&e.d(&e.j_infty(s)));
        let rhs = e.reduce(&e.j_infty(&ce.d(s)));
        if lhs != rhs {
            cochain = Some(format!(
                "on {}: D j = {} but j d_L = {}",
                calg.display(s),
                e.display(&lhs),
                e.display(&rhs)
            ));
            break;
        }
    }
    let note = format!("mod F^{}", e.order() + 1);
    let mut report = CheckReport::new();
    report.push(Verdict::from_witness("algebra_map", algebra).with_note(note.clone()));
    report.push(Verdict::from_witness("cochain_map", cochain).with_note(note));
    let graded = contracting_homotopy_check(e.dim(), e.order()).all_pass();
    report.push(if graded {
        Verdict::pass("quasi_isomorphism").with_note("verified via contracting homotopy on the associated graded")
    } else {
        Verdict::fail("quasi_isomorphism", "contracting homotopy identity fails")
    });
    report
}
