use crate::algebroid::{BundleModel, ConnectionModel};
use crate::exact_algebra::rational::sign;
use crate::exact_algebra::{AlgMap, Derivation, Elem, GcAlgebra, Generator, Mono, MultiPoly};
use crate::ruth::RepUH;
use crate::verdict::{CheckReport, Verdict};

use super::enh::{transport, unipotent_inverse, EnhSpace};
use super::jets::truncate_elem;
use super::EnhError;

/// The dg module `enh_mod(E)` over `Ĉ(enh L)`: free on the frame of `E` with
/// `D(eps_i) = sum_j ops[i][j] eps_j`, coefficients in the algebra of the enh space.
#[derive(Clone, Debug)]
pub struct EnhModule {
    enh: EnhSpace,
    fiber: BundleModel,
    alg: GcAlgebra,
    ops: Vec<Vec<Elem>>,
}

/// Tensor product connection on frames `a.b`.
pub fn tensor_connection(c1: &ConnectionModel, c2: &ConnectionModel, bundle: &BundleModel) -> Result<ConnectionModel, EnhError> {
    let (r1, r2) = (c1.bundle().rank(), c2.bundle().rank());
    let n = bundle.patch().dim();
    let mut g = vec![vec![vec![MultiPoly::zero(); r1 * r2]; r1 * r2]; n];
    for (i, gi) in g.iter_mut().enumerate() {
        for a in 0..r1 {
            for b in 0..r2 {
                for c in 0..r1 {
                    gi[a * r2 + b][c * r2 + b].add_assign(c1.gamma(i, a, c));
                }
                for d in 0..r2 {
                    gi[a * r2 + b][a * r2 + d].add_assign(c2.gamma(i, b, d));
                }
            }
        }
    }
    Ok(ConnectionModel::new(bundle, g)?)
}

/// Transfers a representation to a dg module over `Ĉ(enh L)`, using `nabla_e` to split the
/// jets of `E`.
pub fn enh_mod(e: &EnhSpace, r: &RepUH, nabla_e: &ConnectionModel) -> Result<EnhModule, EnhError> {
    if r.algebroid() != e.algebroid() {
        return Err(EnhError::Mismatch("representation lives over another algebroid".into()));
    }
    if nabla_e.bundle() != r.fiber() {
        return Err(EnhError::Connection);
    }
    if let Some(f) = r.validate().first_failure() {
        return Err(EnhError::Ruth(crate::ruth::RuthError::Invalid(f.to_string())));
    }
    let (n, m) = (e.dim(), r.rank());
    let base = e.alg();
    let nb = base.ngens();
    let alg = base.with_extra_generators(
        r.fiber()
            .frame()
            .iter()
            .map(|(name, d)| Generator::new(format!("eps_{}", name), *d))
            .collect(),
    );
    let prec = e.order() + 2;
    let t = transport(nabla_e, n, prec);
    let tinv = unipotent_inverse(&t, n, prec);
    // frames transform inversely to coframes: e_a(x + y) = sum_b tinv[b][a] E_b
    let extend = |base_map: &AlgMap, mat: &[Vec<MultiPoly>], transpose: bool| -> AlgMap {
        let mut on_gens = base_map.on_gens.clone();
        for a in 0..m {
            let mut img = Elem::zero();
            for b in 0..m {
                let c = if transpose { &mat[b][a] } else { &mat[a][b] };
                img.add_assign(&alg.gen(nb + b).scale_poly(c));
            }
            on_gens.push(img);
        }
        AlgMap {
            on_vars: base_map.on_vars.clone(),
            on_gens,
        }
    };
    let to_sigma = extend(e.to_sigma_map(), &tinv, true);
    let to_naive = extend(e.to_naive_map(), &t, true);

    let mut d_naive = Derivation::zero(&alg, 1);
    d_naive.on_vars = e.naive_derivation().on_vars.clone();
    d_naive.on_gens[..nb].clone_from_slice(&e.naive_derivation().on_gens);
    for i in 0..m {
        let mut img = Elem::zero();
        for j in 0..m {
            let w = e.lift_naive(r.op(i, j));
            img.add_assign(&alg.mul(&w, &alg.gen(nb + j)));
        }
        d_naive.on_gens[nb + i] = img;
    }
    let mut ops = Vec::with_capacity(m);
    for i in 0..m {
        let g = alg.map_elem(&alg, &to_naive, &alg.gen(nb + i));
        let dg = alg.map_elem(&alg, &to_sigma, &alg.apply(&d_naive, &g));
        ops.push(coefficients(&truncate_elem(&dg, n, e.order() + 1), nb, m));
    }
    Ok(EnhModule {
        enh: e.clone(),
        fiber: r.fiber().clone(),
        alg,
        ops,
    })
}

/// Coefficients of an `eps`-linear element.
fn coefficients(v: &Elem, nb: usize, m: usize) -> Vec<Elem> {
    let mut out = vec![Elem::zero(); m];
    for (mono, p) in v.terms() {
        let tail = if mono.len() > nb { &mono[nb..] } else { &[][..] };
        let hits: Vec<usize> = tail.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i).collect();
        if hits.len() == 1 && tail[hits[0]] == 1 {
            let mut head: Mono = mono[..nb.min(mono.len())].to_vec();
            while head.last() == Some(&0) {
                head.pop();
            }
            out[hits[0]].add_term(head, p.clone());
        }
    }
    out
}

impl EnhModule {
    pub fn enh(&self) -> &EnhSpace {
        &self.enh
    }

    pub fn fiber(&self) -> &BundleModel {
        &self.fiber
    }

    pub fn alg(&self) -> &GcAlgebra {
        &self.alg
    }

    pub fn rank(&self) -> usize {
        self.fiber.rank()
    }

    pub fn ops(&self) -> &[Vec<Elem>] {
        &self.ops
    }

    pub fn eps(&self, i: usize) -> Elem {
        self.alg.gen(self.enh.alg().ngens() + i)
    }

    pub fn module_elem(&self, coeffs: &[Elem]) -> Elem {
        let mut out = Elem::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out.add_assign(&self.alg.mul(c, &self.eps(i)));
        }
        out
    }

    pub fn derivation(&self) -> Derivation {
        let nb = self.enh.alg().ngens();
        let mut d = Derivation::zero(&self.alg, 1);
        d.on_vars = self.enh.derivation().on_vars.clone();
        d.on_gens[..nb].clone_from_slice(&self.enh.derivation().on_gens);
        for i in 0..self.rank() {
            d.on_gens[nb + i] = self.module_elem(&self.ops[i]);
        }
        d
    }

    pub fn apply(&self, v: &Elem) -> Elem {
        self.alg.apply(&self.derivation(), v)
    }

    pub fn coefficients(&self, v: &Elem) -> Vec<Elem> {
        coefficients(v, self.enh.alg().ngens(), self.rank())
    }

    /// `D^2 = 0 mod F^{K+1}` on every frame.
    pub fn validate(&self) -> CheckReport {
        let mut report = self.enh.validate();
        let d = self.derivation();
        let mut witness = None;
        for i in 0..self.rank() {
            let dd = truncate_elem(&self.alg.apply(&d, &self.alg.apply(&d, &self.eps(i))), self.enh.dim(), self.enh.order());
            if !dd.is_zero() {
                witness = Some(format!("D^2({}) = {}", self.fiber.name(i), self.alg.display(&dd)));
                break;
            }
        }
        report.push(Verdict::from_witness("module_d_squared", witness).with_note(format!("mod F^{}", self.enh.order() + 1)));
        report
    }

    /// Tensor product of dg modules on frames `a.b`.
    pub fn tensor(&self, other: &EnhModule) -> Result<EnhModule, EnhError> {
        if self.enh.algebroid() != other.enh.algebroid() || self.enh.order() != other.enh.order() {
            return Err(EnhError::Mismatch("modules over different enh spaces".into()));
        }
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
        let alg = self.enh.alg().with_extra_generators(
            fiber
                .frame()
                .iter()
                .map(|(name, d)| Generator::new(format!("eps_{}", name), *d))
                .collect(),
        );
        Ok(EnhModule {
            enh: self.enh.clone(),
            fiber,
            alg,
            ops,
        })
    }

    /// Compares operator tables under the identity on frames, mod `F^{K+1}`.
    pub fn compare(&self, other: &EnhModule, name: &str) -> Verdict {
        if self.rank() != other.rank() {
            return Verdict::fail(name, "frame counts differ");
        }
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let a = self.enh.reduce(&self.ops[i][j]);
                let b = self.enh.reduce(&other.ops[i][j]);
                if a != b {
                    return Verdict::fail(
                        name,
                        format!(
                            "entry ({}, {}): {} vs {}",
                            self.fiber.name(i),
                            self.fiber.name(j),
                            self.enh.display(&a),
                            self.enh.display(&b)
                        ),
                    );
                }
            }
        }
        Verdict::pass(name).with_note(format!("mod F^{}", self.enh.order() + 1))
    }

    /// `ev(a eps_i, b eps^i) = (-1)^{|eps_i||b|} a b` against the module of the dual.
    pub fn pairing(&self, dual: &EnhModule, v: &Elem, w: &Elem) -> Elem {
        let a = self.coefficients(v);
        let b = dual.coefficients(w);
        let alg = self.enh.alg();
        let mut out = Elem::zero();
        for i in 0..self.rank() {
            for (m, p) in b[i].terms() {
                let s = sign(self.fiber.degree(i) as i64 * alg.mono_degree(m) as i64);
                out.add_assign(&alg.mul(&a[i], &Elem::term(m.clone(), p.scale(&s))));
            }
        }
        out
    }

    /// `D ev(s, t) = ev(Ds, t) + (-1)^{|s|} ev(s, Dt)` on frame pairs, mod `F^{K+1}`.
    pub fn check_pairing(&self, dual: &EnhModule) -> Verdict {
        for i in 0..self.rank() {
            for j in 0..dual.rank() {
                let (s, t) = (self.eps(i), dual.eps(j));
                let lhs = self.enh.reduce(&self.enh.d(&self.pairing(dual, &s, &t)));
                let rhs = self.enh.reduce(
                    &self
                        .pairing(dual, &self.apply(&s), &t)
                        .add(&self.pairing(dual, &s, &dual.apply(&t)).scale(&sign(self.fiber.degree(i) as i64))),
                );
                if lhs != rhs {
                    return Verdict::fail("dual_pairing", format!("frames ({}, {})", self.fiber.name(i), dual.fiber.name(j)));
                }
            }
        }
        Verdict::pass("dual_pairing")
    }
}
