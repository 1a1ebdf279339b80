//! Seeded random multiderivations for property tests and benchmarks.

use rand::Rng;

use crate::algebroid::BundleModel;
use crate::exact_algebra::complex::coordinate_monomials;
use crate::exact_algebra::rational::q;
use crate::exact_algebra::MultiPoly;

use super::multider::{multisets, shifted, Multiderivation};

fn random_poly(rng: &mut impl Rng, nvars: usize, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero();
    for d in 0..=max_deg {
        for e in coordinate_monomials(nvars, d) {
            if rng.gen_bool(0.5) {
                p.add_term(e, q(rng.gen_range(-2..=2)));
            }
        }
    }
    p
}

/// Random multiderivation with small integer coefficients of polynomial degree `<= max_deg`.
pub fn random_multider(
    rng: &mut impl Rng,
    bundle: &BundleModel,
    arity: i32,
    degree: i32,
    max_deg: u32,
) -> Multiderivation {
    let n = bundle.patch().dim();
    let r = bundle.rank();
    let mut d = Multiderivation::zero(bundle, arity, degree);
    for tuple in multisets(bundle, (arity + 1) as usize) {
        let out = d.output_degree(&tuple);
        let v: Vec<MultiPoly> = (0..r)
            .map(|k| {
                if shifted(bundle, k) == out {
                    random_poly(rng, n, max_deg)
                } else {
                    MultiPoly::zero()
                }
            })
            .collect();
        d.set_frame(&tuple, v).expect("degree-compatible components");
    }
    if arity >= 0 && n > 0 {
        for tuple in multisets(bundle, arity as usize) {
            if d.output_degree(&tuple) != 0 {
                continue;
            }
            let v: Vec<MultiPoly> = (0..n).map(|_| random_poly(rng, n, max_deg)).collect();
            d.set_symbol(&tuple, v).expect("degree-zero symbol");
        }
    }
    d
}
