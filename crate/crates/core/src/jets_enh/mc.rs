use crate::exact_algebra::{AlgMap, Elem, GcAlgebra, Generator, Rational};

use super::enh::EnhSpace;
use super::EnhError;

/// A nilpotent test algebra `Λ(θ_1, ..., θ_m)` with odd generators of degree one over a point.
/// The ideal `I` is generated by the `θ`, and `I^{m+1} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentBase {
    alg: GcAlgebra,
}

impl NilpotentBase {
    pub fn exterior(names: &[&str]) -> Self {
        let gens = names.iter().map(|n| Generator::new(*n, 1)).collect();
        Self {
            alg: GcAlgebra::new(Vec::new(), gens),
        }
    }

    /// `Q[ε]/ε²` with `ε` odd.
    pub fn dual_numbers() -> Self {
        Self::exterior(&["eps"])
    }

    pub fn alg(&self) -> &GcAlgebra {
        &self.alg
    }

    /// Smallest `k` with `I^k = 0`.
    pub fn order(&self) -> u32 {
        self.alg.ngens() as u32 + 1
    }

    pub fn theta(&self, i: usize) -> Elem {
        self.alg.gen(i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McResult {
    pub holds: bool,
    /// `-φ_α(D g)` for each generator `g` of `V^∨[-1]`; this is `Σ ℓ_n(α^n)/n!` in components.
    pub residual: Vec<(String, Elem)>,
    /// False when jet truncation could hide terms of the sum.
    pub exact: bool,
}

/// Evaluates the Maurer-Cartan curvature of `α` at `point`, where `α` lists one coefficient
/// in `I` for each generator `y_i`, `eta^a`.
pub fn mc_check(e: &EnhSpace, base: &NilpotentBase, point: &[Rational], alpha: &[Elem]) -> Result<McResult, EnhError> {
    let gens = e.v_generators();
    if alpha.len() != gens.len() {
        return Err(EnhError::Mismatch(format!("expected {} components of α", gens.len())));
    }
    if point.len() != e.dim() {
        return Err(EnhError::Mismatch("point has the wrong dimension".into()));
    }
    let (n, r) = (e.dim(), e.rank());
    let balg = base.alg();
    for ((name, g), a) in gens.iter().zip(alpha) {
        if a.terms().any(|(m, p)| m.is_empty() || p.var_bound() > 0) {
            return Err(EnhError::NotInIdeal(format!("component for {} has a part outside I", name)));
        }
        let want = e.alg().degree(g).flatten().unwrap_or(0);
        if let Some(Some(d)) = balg.degree(a) {
            if d != want {
                return Err(EnhError::NotInIdeal(format!("component for {} must have degree {}", name, want)));
            }
        } else if balg.degree(a).is_none() {
            return Err(EnhError::NotInIdeal(format!("component for {} is not homogeneous", name)));
        }
    }
    let mut on_vars: Vec<Option<Elem>> = point.iter().map(|c| Some(Elem::scalar(c.clone()))).collect();
    on_vars.extend(alpha[..n].iter().map(|a| Some(a.clone())));
    let mut on_gens: Vec<Elem> = alpha[n..].to_vec();
    on_gens.extend((0..n).map(|_| Elem::zero()));
    let phi = AlgMap { on_vars, on_gens };
    debug_assert_eq!(phi.on_gens.len(), r + n);
    let residual: Vec<(String, Elem)> = gens
        .iter()
        .map(|(name, g)| (name.clone(), e.alg().map_elem(balg, &phi, &e.d(g)).neg()))
        .collect();
    Ok(McResult {
        holds: residual.iter().all(|(_, r)| r.is_zero()),
        residual,
        exact: n == 0 || base.order() <= e.order() + 2,
    })
}
