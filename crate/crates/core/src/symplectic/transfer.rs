use num_traits::Zero;

use crate::exact_algebra::{AlgMap, Derivation, Elem, GcAlgebra, Generator, Rational};
use crate::jets_enh::jets::truncate_elem;
use crate::jets_enh::gr::linear_table;
use crate::jets_enh::EnhSpace;
use crate::ruth::{sample_points, SamplePolicy};
use crate::verdict::{CheckReport, Verdict};

use super::nondeg::{add_pairing, assemble, test_point, PointData};
use super::{certify_closed, ClosedTwoForm, SymplecticError};

/// Relative de Rham forms on the enh model: `dy_i` and `deta^a` adjoined to the enh algebra.
#[derive(Clone, Debug)]
pub struct EnhForms {
    pub alg: GcAlgebra,
    pub d_rel: Derivation,
    pub l_d: Derivation,
    /// Images of `omega_0, omega_1, ...`, kept to `y`-degree `K + 1`.
    pub images: Vec<Elem>,
}

fn extend(d: &Derivation, alg: &GcAlgebra) -> Derivation {
    let mut out = Derivation::zero(alg, d.degree);
    out.on_vars.clone_from(&d.on_vars);
    for (j, v) in d.on_gens.iter().enumerate() {
        out.on_gens[j] = v.clone();
    }
    out
}

/// Pushes the de Rham reading of each `omega_i` along `x -> x + y`, `xi -> j_inf(xi)`, `d -> d_rel`.
pub fn push_to_enh(omega: &ClosedTwoForm, e: &EnhSpace) -> Result<EnhForms, SymplecticError> {
    let w = omega.weil();
    if w.algebroid() != e.algebroid() {
        return Err(SymplecticError::Mismatch("form and enh space are built from different algebroids".into()));
    }
    let (r, n, k) = (e.rank(), e.dim(), e.order());
    let base = e.alg();
    let mut extra: Vec<Generator> = (0..n)
        .map(|i| Generator::new(format!("d{}", base.var_names()[n + i]), 1))
        .collect();
    extra.extend((0..r).map(|a| {
        let g = &base.gens()[a];
        Generator::new(format!("d{}", g.name), g.degree + 1)
    }));
    let alg = base.with_extra_generators(extra);
    let dy = |i: usize| alg.gen(r + n + i);
    let deta = |a: usize| alg.gen(r + 2 * n + a);

    let mut d_rel = Derivation::zero(&alg, 1);
    for i in 0..n {
        d_rel.on_vars[n + i] = dy(i);
    }
    for a in 0..r {
        d_rel.on_gens[a] = deta(a);
    }

    let mut l_d = extend(e.derivation(), &alg);
    for i in 0..n {
        l_d.on_gens[r + n + i] = alg.apply(&d_rel, &l_d.on_vars[n + i]).neg();
    }
    for a in 0..r {
        l_d.on_gens[r + 2 * n + a] = alg.apply(&d_rel, &l_d.on_gens[a]).neg();
    }

    let wa = w.alg();
    let mut on_gens: Vec<Elem> = (0..r).map(|a| e.j_infty(&wa.gen(a))).collect();
    on_gens.extend((0..n).map(dy));
    for a in 0..r {
        let jx = on_gens[a].clone();
        on_gens.push(truncate_elem(&alg.apply(&d_rel, &jx), n, k + 1));
    }
    let phi = AlgMap {
        on_vars: (0..n).map(|i| Some(alg.var(i).add(&alg.var(n + i)))).collect(),
        on_gens,
    };
    let images = omega
        .comps()
        .iter()
        .map(|c| truncate_elem(&wa.map_elem(&alg, &phi, &w.to_de_rham(c)), n, k + 1))
        .collect();
    Ok(EnhForms { alg, d_rel, l_d, images })
}

/// Certifies `omega`, pushes it to the enh model and re-checks closedness mod `F^{K+1}` and
/// nondegeneracy of the leading form on the associated graded.
pub fn transfer_to_enh(omega: &ClosedTwoForm, e: &EnhSpace, policy: &SamplePolicy) -> Result<CheckReport, SymplecticError> {
    let mut report = CheckReport::new();
    let source = certify_closed(omega);
    report.push(Verdict::from_witness(
        "source_closed",
        source.first_failure().map(|v| v.witness.clone().unwrap_or_default()),
    ));
    let forms = push_to_enh(omega, e)?;
    let (r, n, k) = (e.rank(), e.dim(), e.order());
    let alg = &forms.alg;
    let image = |i: usize| forms.images.get(i).cloned().unwrap_or_default();
    let reduce = |x: &Elem| truncate_elem(x, n, k);

    let mut failure = None;
    let start = reduce(&alg.apply(&forms.l_d, &image(0)));
    if !start.is_zero() {
        failure = Some(format!("L_D omega_0 = {}", alg.display(&start)));
    }
    for i in 0..forms.images.len() {
        if failure.is_some() {
            break;
        }
        let lhs = alg.apply(&forms.d_rel, &image(i));
        let rhs = alg.apply(&forms.l_d, &image(i + 1));
        let diff = reduce(&lhs.sub(&rhs));
        if !diff.is_zero() {
            failure = Some(format!("rung i = {}: {}", i, alg.display(&diff)));
        }
    }
    report.push(Verdict::from_witness("enh_closed", failure).with_note(format!("mod F^{}", k + 1)));

    let lead = image(0);
    let results = sample_points(n, policy)
        .into_iter()
        .map(|p| {
            let mut pairing = vec![vec![Rational::zero(); n + r]; n + r];
            for (m, c) in lead.terms() {
                // drop eta, dx and y-dependent parts
                if m.iter().take(r + n).any(|&x| x > 0) {
                    continue;
                }
                // y = 0 through the zero padding of eval
                let c = c.eval(&p);
                if c.is_zero() {
                    continue;
                }
                let slots: Vec<usize> = (r + n..m.len()).flat_map(|j| std::iter::repeat(j).take(m[j] as usize)).collect();
                if slots.len() != 2 {
                    continue;
                }
                let odd = alg.is_odd(slots[0]) && alg.is_odd(slots[1]);
                // dy_i sits at r + n + i and deta^a at r + 2n + a; coordinates are y_i then eta^a
                add_pairing(&mut pairing, slots[0] - r - n, slots[1] - r - n, odd, c);
            }
            let mut coord_degrees = vec![0; n];
            coord_degrees.extend((0..r).map(|a| e.alg().gens()[a].degree));
            let data = PointData {
                lin: linear_table(e, &p),
                pairing,
                coord_degrees,
            };
            test_point(&data, omega.degree(), &p)
        })
        .collect();
    let nd = assemble(results);
    let mut v = nd.verdict();
    v.name = "enh_nondegenerate".into();
    report.push(v.with_note("associated graded"));
    Ok(report)
}
