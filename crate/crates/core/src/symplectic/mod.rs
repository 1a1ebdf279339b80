//! Shifted symplectic structures on `X/L`.
//!
//! Two-forms live in the Weil algebra. Closedness and `Q`-invariance are checked in the de Rham
//! reading (`zeta` replaced by `dxi`), nondegeneracy as a fiberwise quasi-isomorphism between the
//! tangent complex of `L[1]` and its shifted dual.

mod nondeg;
mod transfer;

use thiserror::Error;

use crate::algebroid::{check_axioms, AlgebroidError, ConnectionModel, LieAlgebroidModel};
use crate::exact_algebra::{Derivation, Elem, ExactError, Rational};
use crate::jets_enh::EnhError;
use crate::ruth::SamplePolicy;
use crate::verdict::{CheckReport, Verdict};
use crate::weil::{WeilAlgebra, WeilError};

pub use nondeg::{nondegenerate, quasi_iso_tables, Nondegeneracy, PointEvidence};
pub use transfer::{push_to_enh, transfer_to_enh, EnhForms};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("component {index} has tridegree {found:?}, expected (p, q) = {expected:?}")]
    Degree {
        index: usize,
        found: (u32, u32, u32),
        expected: (i64, u32),
    },
    #[error("sequence of length {len} exceeds the cap dim + rank + 1 = {cap}")]
    SequenceTooLong { len: usize, cap: usize },
    #[error("not a Roytenberg structure: {0}")]
    NotRoytenberg(String),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Enh(#[from] EnhError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A 2-form of cohomological degree `n` on `L[1]`, in Weil generators.
#[derive(Clone, Debug)]
pub struct TwoForm {
    weil: WeilAlgebra,
    degree: i64,
    value: Elem,
}

fn check_component(w: &WeilAlgebra, e: &Elem, index: usize, p: i64, q: u32) -> Result<(), SymplecticError> {
    for (m, _) in e.terms() {
        let t = w.tridegree(m);
        if i64::from(t.0) != p || t.1 != q {
            return Err(SymplecticError::Degree {
                index,
                found: t,
                expected: (p, q),
            });
        }
    }
    Ok(())
}

impl TwoForm {
    /// `value` is in Weil generators and must have tridegree `(n, 2, *)`.
    pub fn new(l: &LieAlgebroidModel, nabla: &ConnectionModel, degree: i64, value: Elem) -> Result<Self, SymplecticError> {
        let weil = WeilAlgebra::new(l, nabla)?;
        let value = weil.alg().truncate(&value);
        check_component(&weil, &value, 0, degree, 2)?;
        Ok(Self { weil, degree, value })
    }

    /// Same as [`TwoForm::new`] with `value` read in de Rham generators (`zeta` meaning `dxi`).
    pub fn from_de_rham(l: &LieAlgebroidModel, nabla: &ConnectionModel, degree: i64, value: Elem) -> Result<Self, SymplecticError> {
        let weil = WeilAlgebra::new(l, nabla)?;
        let value = weil.from_de_rham(&value);
        Self::new(l, nabla, degree, value)
    }

    pub fn weil(&self) -> &WeilAlgebra {
        &self.weil
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    pub fn de_rham_value(&self) -> Elem {
        self.weil.to_de_rham(&self.value)
    }

    pub fn scale(&self, c: &Rational) -> TwoForm {
        TwoForm {
            weil: self.weil.clone(),
            degree: self.degree,
            value: self.value.scale(c),
        }
    }

    pub fn display(&self) -> String {
        self.weil.alg().display(&self.value)
    }
}

/// A sequence `(omega_0, omega_1, ...)` with `omega_i` a `(i+2)`-form of internal degree `n - i`.
#[derive(Clone, Debug)]
pub struct ClosedTwoForm {
    weil: WeilAlgebra,
    degree: i64,
    comps: Vec<Elem>,
}

impl ClosedTwoForm {
    pub fn new(l: &LieAlgebroidModel, nabla: &ConnectionModel, degree: i64, comps: Vec<Elem>) -> Result<Self, SymplecticError> {
        let weil = WeilAlgebra::new(l, nabla)?;
        Self::from_weil(weil, degree, comps)
    }

    fn from_weil(weil: WeilAlgebra, degree: i64, comps: Vec<Elem>) -> Result<Self, SymplecticError> {
        let cap = weil.dim() + weil.rank() + 1;
        if comps.len() > cap {
            return Err(SymplecticError::SequenceTooLong { len: comps.len(), cap });
        }
        let comps: Vec<Elem> = comps.iter().map(|c| weil.alg().truncate(c)).collect();
        for (i, c) in comps.iter().enumerate() {
            check_component(&weil, c, i, degree - i as i64, i as u32 + 2)?;
        }
        Ok(Self { weil, degree, comps })
    }

    pub fn weil(&self) -> &WeilAlgebra {
        &self.weil
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn comps(&self) -> &[Elem] {
        &self.comps
    }

    /// `omega_i`, zero past the stored length.
    pub fn comp(&self, i: usize) -> Elem {
        self.comps.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> TwoForm {
        TwoForm {
            weil: self.weil.clone(),
            degree: self.degree,
            value: self.comp(0),
        }
    }
}

/// `d_dR` on the de Rham reading: `x -> dx`, `xi -> dxi`.
fn de_rham_derivation(w: &WeilAlgebra) -> Derivation {
    let (r, n) = (w.rank(), w.dim());
    let mut d = Derivation::zero(w.alg(), 1);
    for i in 0..n {
        d.on_vars[i] = w.dx(i);
    }
    for a in 0..r {
        d.on_gens[a] = w.zeta(a);
    }
    d
}

/// Contraction with `Q`, a derivation of total degree 0.
fn iota_q(w: &WeilAlgebra) -> Derivation {
    let (r, n) = (w.rank(), w.dim());
    let ce = w.ce();
    let mut d = Derivation::zero(w.alg(), 0);
    for i in 0..n {
        d.on_gens[r + i] = ce.d(&w.alg().var(i));
    }
    for a in 0..r {
        d.on_gens[r + n + a] = ce.differential().on_gens[a].clone();
    }
    d
}

/// `L_Q omega` in the de Rham reading via the Cartan formula `[iota_Q, d_dR]`.
pub fn lie_derivative_cartan(w: &WeilAlgebra, value: &Elem) -> Elem {
    let l_q = w.alg().commutator(&iota_q(w), &de_rham_derivation(w));
    w.alg().apply(&l_q, &w.to_de_rham(value))
}

/// `L_Q omega` in the de Rham reading through the horizontal differential of the Weil model.
pub fn lie_derivative_direct(w: &WeilAlgebra, value: &Elem) -> Elem {
    w.to_de_rham(&w.d_hor(value))
}

fn zero_witness(w: &WeilAlgebra, e: &Elem) -> Option<String> {
    (!e.is_zero()).then(|| w.alg().display(e))
}

/// Axioms, closedness, `Q`-invariance (two ways) and nondegeneracy.
pub fn check_roytenberg(omega: &TwoForm, policy: &SamplePolicy) -> CheckReport {
    let w = &omega.weil;
    let mut report = CheckReport::new();
    let axioms = check_axioms(w.algebroid());
    report.push(Verdict::from_witness(
        "axioms",
        axioms.first_failure().map(|v| format!("{}: {}", v.name, v.witness.clone().unwrap_or_default())),
    ));

    let dd = w.alg().apply(&de_rham_derivation(w), &omega.de_rham_value());
    report.push(Verdict::from_witness("closed", zero_witness(w, &dd)));

    let cartan = lie_derivative_cartan(w, &omega.value);
    let direct = lie_derivative_direct(w, &omega.value);
    report.push(Verdict::from_witness("q_invariant", zero_witness(w, &cartan)).with_note("Cartan formula"));
    report.push(Verdict::from_witness("lq_methods_agree", zero_witness(w, &cartan.sub(&direct))));

    report.push(match nondegenerate(omega, policy) {
        Ok(nd) => nd.verdict(),
        Err(e) => Verdict::fail("nondegenerate", e.to_string()),
    });
    report
}

/// `(eta, 0, 0, ...)`, after checking that `eta` is a Roytenberg structure.
pub fn lift_roytenberg(eta: &TwoForm, policy: &SamplePolicy) -> Result<ClosedTwoForm, SymplecticError> {
    let report = check_roytenberg(eta, policy);
    if let Some(v) = report.first_failure() {
        return Err(SymplecticError::NotRoytenberg(format!(
            "{}: {}",
            v.name,
            v.witness.clone().unwrap_or_default()
        )));
    }
    ClosedTwoForm::from_weil(eta.weil.clone(), eta.degree, vec![eta.value.clone()])
}

/// Checks `d_H omega_0 = 0` and `d_dR omega_i = d_H omega_{i+1}` for every rung, in the Weil
/// model where `d_dR` and `d_H` are `d_ver` and `d_hor`.
pub fn certify_closed(omega: &ClosedTwoForm) -> CheckReport {
    let w = &omega.weil;
    let mut report = CheckReport::new();
    let mut failure = None;
    let start = w.d_hor(&omega.comp(0));
    if !start.is_zero() {
        failure = Some(format!("d_H omega_0 = {}", w.alg().display(&start)));
    }
    let rungs = omega.comps.len();
    for i in 0..rungs {
        if failure.is_some() {
            break;
        }
        let lhs = w.d_ver(&omega.comp(i));
        let rhs = w.d_hor(&omega.comp(i + 1));
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            failure = Some(format!("rung i = {}: d_dR omega_i - d_H omega_(i+1) = {}", i, w.alg().display(&diff)));
        }
    }
    report.push(Verdict::from_witness("closed", failure).with_note(format!("{} rungs", rungs + 1)));
    report
}

/// Graded-symmetric pairing `1/2 sum g_ab zeta^a zeta^b`, as a degree-2 form over a point.
pub fn pairing_form(l: &LieAlgebroidModel, g: &[Vec<Rational>]) -> Result<TwoForm, SymplecticError> {
    let r = l.rank();
    if l.dim() != 0 || g.len() != r || g.iter().any(|row| row.len() != r) {
        return Err(SymplecticError::Mismatch(format!(
            "pairing needs an {r}x{r} matrix over a point"
        )));
    }
    let nabla = l.connection().clone();
    let w = WeilAlgebra::new(l, &nabla)?;
    let half = Rational::new(1.into(), 2.into());
    let mut value = Elem::zero();
    for a in 0..r {
        for b in 0..r {
            if g[a][b] != g[b][a] {
                return Err(SymplecticError::Mismatch("pairing matrix is not symmetric".into()));
            }
            let t = w.alg().mul(&w.zeta(a), &w.zeta(b));
            value.add_assign(&t.scale(&(&g[a][b] * &half)));
        }
    }
    TwoForm::new(l, &nabla, 2, value)
}

/// Killing form `tr(ad_a ad_b)` of a Lie algebra (an algebroid over a point).
pub fn killing_matrix(l: &LieAlgebroidModel) -> Vec<Vec<Rational>> {
    let r = l.rank();
    let c = |a: usize, b: usize, k: usize| -> Rational { l.bracket(a, b, k).constant_term() };
    (0..r)
        .map(|a| {
            (0..r)
                .map(|b| {
                    let mut t = Rational::from_integer(0.into());
                    for x in 0..r {
                        for y in 0..r {
                            t += c(b, x, y) * c(a, y, x);
                        }
                    }
                    t
                })
                .collect()
        })
        .collect()
}

pub fn killing_form(l: &LieAlgebroidModel) -> Result<TwoForm, SymplecticError> {
    pairing_form(l, &killing_matrix(l))
}

/// `dx^1 dx^2` on the tangent algebroid of a plane, a 0-shifted form.
pub fn area_form(l: &LieAlgebroidModel) -> Result<TwoForm, SymplecticError> {
    if l.dim() != 2 {
        return Err(SymplecticError::Mismatch("area form needs a 2-dimensional patch".into()));
    }
    let nabla = l.connection().clone();
    let w = WeilAlgebra::new(l, &nabla)?;
    let value = w.alg().mul(&w.dx(0), &w.dx(1));
    TwoForm::new(l, &nabla, 0, value)
}
