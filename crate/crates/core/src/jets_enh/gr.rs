use num_traits::Zero;

use crate::exact_algebra::{Elem, Rational};
use crate::ruth::{cone_evidence, sample_points, SampleEvidence, SamplePolicy};

use super::enh::EnhSpace;
use super::EnhError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrWeakEquivalence {
    pub holds: bool,
    pub evidence: Vec<SampleEvidence>,
}

/// Linear part of `D` with `dx = 0` at `point`: entry `[g][h]` is the coefficient of
/// generator `h` in `D g`.
pub(crate) fn linear_table(e: &EnhSpace, point: &[Rational]) -> Vec<Vec<Rational>> {
    let (n, r) = (e.dim(), e.rank());
    let gens = e.v_generators();
    let mut out = vec![vec![Rational::zero(); n + r]; n + r];
    for (gi, (_, g)) in gens.iter().enumerate() {
        let lin = e.sym_component(&e.d(g), 1);
        for (m, p) in lin.terms() {
            if m.iter().skip(r).any(|&k| k > 0) {
                continue;
            }
            match m.iter().position(|&k| k > 0) {
                Some(a) => out[gi][n + a] += constant_part_at(p, n, point, None),
                None => {
                    for j in 0..n {
                        out[gi][j] += constant_part_at(p, n, point, Some(j));
                    }
                }
            }
        }
    }
    out
}

/// Evaluates at `x = point` the coefficient of `y_j` (or the `y`-free part).
fn constant_part_at(p: &crate::exact_algebra::MultiPoly, n: usize, point: &[Rational], yj: Option<usize>) -> Rational {
    let mut acc = Rational::zero();
    for (ex, c) in p.terms() {
        let ys: Vec<u32> = (0..n).map(|i| ex.get(n + i).copied().unwrap_or(0)).collect();
        let hit = match yj {
            None => ys.iter().all(|&k| k == 0),
            Some(j) => ys.iter().enumerate().all(|(i, &k)| k == u32::from(i == j)),
        };
        if hit {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..ex.get(i).copied().unwrap_or(0) {
                    t *= x;
                }
            }
            acc += t;
        }
    }
    acc
}

fn degrees(e: &EnhSpace) -> Vec<i32> {
    e.v_generators()
        .iter()
        .map(|(_, g)| e.alg().degree(g).flatten().unwrap_or(0))
        .collect()
}

/// Decides whether `φ` induces a quasi-isomorphism on the associated graded for the
/// `Ω^{≥1}` filtration. `phi[g2][g1]` is the coefficient of the `e1` generator `g1` in the
/// pullback of the `e2` generator `g2`; form parts of the coefficients vanish on `Gr`.
pub fn gr_weak_equivalence(
    e1: &EnhSpace,
    e2: &EnhSpace,
    phi: &[Vec<Elem>],
    policy: &SamplePolicy,
) -> Result<GrWeakEquivalence, EnhError> {
    if e1.dim() != e2.dim() {
        return Err(EnhError::Mismatch("enh spaces over different patches".into()));
    }
    let (deg1, deg2) = (degrees(e1), degrees(e2));
    if phi.len() != deg2.len() || phi.iter().any(|row| row.len() != deg1.len()) {
        return Err(EnhError::Mismatch(format!("φ must be {} x {}", deg2.len(), deg1.len())));
    }
    let n = e1.dim();
    for (i, row) in phi.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.terms().any(|(m, p)| m.iter().take(e1.rank()).any(|&k| k > 0) || p.var_bound() > n) {
                return Err(EnhError::NotFiltered(format!("entry ({i}, {j}) involves jet generators")));
            }
            if !c.coeff(&[]).is_zero() && deg1[j] != deg2[i] {
                return Err(EnhError::NotFiltered(format!("entry ({i}, {j}) changes degree")));
            }
        }
    }
    let mut evidence = Vec::new();
    for p in sample_points(n, policy) {
        let l1 = linear_table(e1, &p);
        let l2 = linear_table(e2, &p);
        let f: Vec<Vec<Rational>> = phi.iter().map(|row| row.iter().map(|c| c.coeff(&[]).eval(&p)).collect()).collect();
        // cochain condition Φ L1 = L2 Φ on Gr
        for i in 0..deg2.len() {
            for k in 0..deg1.len() {
                let a: Rational = (0..deg1.len()).map(|j| &f[i][j] * &l1[j][k]).sum();
                let b: Rational = (0..deg2.len()).map(|j| &l2[i][j] * &f[j][k]).sum();
                if a != b {
                    return Err(EnhError::Mismatch(format!("φ does not commute with ℓ_1 at row {i}")));
                }
            }
        }
        evidence.push(cone_evidence(&l2, &deg2, &l1, &deg1, &f, p)?);
    }
    Ok(GrWeakEquivalence {
        holds: evidence.iter().all(SampleEvidence::cone_acyclic),
        evidence,
    })
}
