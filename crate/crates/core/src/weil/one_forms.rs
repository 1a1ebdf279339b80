use crate::algebroid::{BundleModel, ConnectionModel, LieAlgebroidModel};
use crate::exact_algebra::{Elem, Mono};
use crate::ruth::{coadjoint, RepMap, RepUH};
use crate::verdict::Verdict;

use super::{WeilAlgebra, WeilError};

/// Kähler one-forms of `C(L)` as a representation, with the comparison to the coadjoint one.
#[derive(Clone, Debug)]
pub struct OneFormsIso {
    /// `Ω^1` shifted down by two, on the frame `dx^i, zeta^a` with `D = d_hor`.
    pub omega1: RepUH,
    pub coadjoint: RepUH,
    /// `dx^i -> T_x^`, `zeta^a -> L_a^`.
    pub map: RepMap,
    pub verdict: Verdict,
}

/// Row `q = 1` of the Weil algebra as a representation.
fn one_forms(w: &WeilAlgebra) -> Result<RepUH, WeilError> {
    let l = w.algebroid();
    let (r, n) = (w.rank(), w.dim());
    let mut frame: Vec<(String, i32)> = l.patch().names().iter().map(|x| (format!("d{}", x), -1)).collect();
    frame.extend(l.bundle().frame().iter().map(|(a, _)| (format!("zeta_{}", a), 0)));
    let fiber = BundleModel::new(l.patch().clone(), frame)?;
    let gens: Vec<Elem> = (0..n).map(|i| w.dx(i)).chain((0..r).map(|a| w.zeta(a))).collect();
    let mut ops = vec![vec![Elem::zero(); n + r]; n + r];
    for (i, g) in gens.iter().enumerate() {
        for (m, p) in w.d_hor(g).terms() {
            let j = (r..r + n + r)
                .find(|&j| Elem::exp(m, j) == 1)
                .expect("d_hor preserves the row q = 1");
            let mut head: Mono = m[..r.min(m.len())].to_vec();
            while head.last() == Some(&0) {
                head.pop();
            }
            ops[i][j - r].add_term(head, p.clone());
        }
    }
    Ok(RepUH::new(l, fiber, ops)?)
}

/// Identifies `Ω^1_{C(L)}` with the coadjoint representation for `nabla`.
pub fn one_forms_as_coadjoint(l: &LieAlgebroidModel, nabla: &ConnectionModel) -> Result<OneFormsIso, WeilError> {
    let w = WeilAlgebra::new(l, nabla)?;
    let omega1 = one_forms(&w)?;
    let coadjoint = coadjoint(l, nabla)?;
    let map = RepMap::identity_frames(&omega1, &coadjoint)?;
    let mut verdict = map.check_cochain();
    verdict.name = "one_forms_coadjoint".into();
    if verdict.pass && !map.is_isomorphism() {
        verdict = Verdict::fail("one_forms_coadjoint", "frame map is not invertible");
    }
    Ok(OneFormsIso {
        omega1,
        coadjoint,
        map,
        verdict,
    })
}
