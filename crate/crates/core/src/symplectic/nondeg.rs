use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exact_algebra::{Elem, Matrix, Rational};
use crate::ruth::{sample_points, SamplePolicy};
use crate::verdict::Verdict;

use super::{SymplecticError, TwoForm};

/// Cohomology ranks at one sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointEvidence {
    pub point: Vec<Rational>,
    pub source: BTreeMap<i32, usize>,
    pub target: BTreeMap<i32, usize>,
    pub induced_rank: BTreeMap<i32, usize>,
    /// `f d = d f` up to an overall sign on the source differential.
    pub cochain_map: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nondegeneracy {
    pub holds: bool,
    /// The pairing matrix is invertible at every sample point.
    pub strict: bool,
    /// A sample point and a vector in the kernel of the pairing there.
    pub kernel: Option<(Vec<Rational>, Vec<Rational>)>,
    pub evidence: Vec<PointEvidence>,
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl Nondegeneracy {
    pub fn verdict(&self) -> Verdict {
        if self.holds {
            let note = if self.strict { "pairing invertible" } else { "quasi-isomorphism, pairing singular" };
            return Verdict::pass("nondegenerate").with_note(note);
        }
        let mut witness = match self.evidence.iter().find(|e| !e.holds) {
            Some(e) if !e.cochain_map => format!("at {}: the pairing is not a cochain map", fmt_vec(&e.point)),
            Some(e) => format!(
                "at {}: H(source) {:?}, H(target) {:?}, induced ranks {:?}",
                fmt_vec(&e.point),
                e.source,
                e.target,
                e.induced_rank
            ),
            None => String::from("no evidence"),
        };
        if let Some((p, v)) = &self.kernel {
            witness.push_str(&format!("; kernel vector {} at {}", fmt_vec(v), fmt_vec(p)));
        }
        Verdict::fail("nondegenerate", witness)
    }
}

fn block(m: &[Vec<Rational>], rows: &[usize], cols: &[usize]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect())
}

fn rank_of(m: &[Vec<Rational>], rows: &[usize], cols: &[usize]) -> usize {
    if rows.is_empty() || cols.is_empty() {
        0
    } else {
        block(m, rows, cols).rank()
    }
}

/// Does `f` induce an isomorphism on cohomology?
///
/// `src_d[i][j]` is the coefficient of basis vector `i` in `d(e_j)`, likewise `tgt_d`; `f[i][j]`
/// is the coefficient of target vector `i` in `f(e_j)`. Degrees index the basis vectors.
pub fn quasi_iso_tables(
    src_d: &[Vec<Rational>],
    src_deg: &[i32],
    tgt_d: &[Vec<Rational>],
    tgt_deg: &[i32],
    f: &[Vec<Rational>],
    point: &[Rational],
) -> PointEvidence {
    let group = |degs: &[i32]| {
        let mut g: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, d) in degs.iter().enumerate() {
            g.entry(*d).or_default().push(i);
        }
        g
    };
    let (sg, tg) = (group(src_deg), group(tgt_deg));
    let empty = Vec::new();
    let at = |g: &BTreeMap<i32, Vec<usize>>, k: i32| g.get(&k).cloned().unwrap_or_else(|| empty.clone());
    let mut degrees: Vec<i32> = sg.keys().chain(tg.keys()).copied().collect();
    degrees.sort_unstable();
    degrees.dedup();

    let mut ev = PointEvidence {
        point: point.to_vec(),
        source: BTreeMap::new(),
        target: BTreeMap::new(),
        induced_rank: BTreeMap::new(),
        cochain_map: is_cochain_map(src_d, tgt_d, f),
        holds: true,
    };
    if !ev.cochain_map {
        ev.holds = false;
        return ev;
    }
    for k in degrees {
        let (s_k, s_up, s_dn) = (at(&sg, k), at(&sg, k + 1), at(&sg, k - 1));
        let (t_k, t_up, t_dn) = (at(&tg, k), at(&tg, k + 1), at(&tg, k - 1));
        let cycles: Vec<Vec<Rational>> = if s_up.is_empty() {
            (0..s_k.len())
                .map(|j| (0..s_k.len()).map(|i| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }).collect())
                .collect()
        } else if s_k.is_empty() {
            Vec::new()
        } else {
            block(src_d, &s_up, &s_k).kernel()
        };
        let h_src = cycles.len() - rank_of(src_d, &s_k, &s_dn);
        let z_tgt = t_k.len() - rank_of(tgt_d, &t_up, &t_k);
        let b_tgt = rank_of(tgt_d, &t_k, &t_dn);
        let h_tgt = z_tgt - b_tgt;

        let mut cols: Vec<Vec<Rational>> = cycles
            .iter()
            .map(|z| {
                t_k.iter()
                    .map(|&i| {
                        let mut acc = Rational::zero();
                        for (c, &j) in z.iter().zip(&s_k) {
                            acc += &f[i][j] * c;
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        cols.extend(t_dn.iter().map(|&j| t_k.iter().map(|&i| tgt_d[i][j].clone()).collect()));
        let total = if t_k.is_empty() || cols.is_empty() {
            0
        } else {
            Matrix::from_columns(t_k.len(), &cols).rank()
        };
        let induced = total - b_tgt;
        ev.source.insert(k, h_src);
        ev.target.insert(k, h_tgt);
        ev.induced_rank.insert(k, induced);
        if h_src != h_tgt || induced != h_src {
            ev.holds = false;
        }
    }
    ev
}

fn compose(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let (rows, mid) = (a.len(), b.len());
    let cols = b.first().map_or(0, Vec::len);
    (0..rows)
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for k in 0..mid {
                        acc += &a[i][k] * &b[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn is_cochain_map(src_d: &[Vec<Rational>], tgt_d: &[Vec<Rational>], f: &[Vec<Rational>]) -> bool {
    let fd = compose(f, src_d);
    let df = compose(tgt_d, f);
    let same = fd == df;
    let opposite = fd.iter().zip(&df).all(|(x, y)| x.iter().zip(y).all(|(a, b)| a == &-b.clone()));
    same || opposite
}

/// Kernel of the pairing read as a map from source to target basis, if any.
pub(crate) fn pairing_kernel(w: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = w.len();
    if n == 0 {
        return None;
    }
    let m = Matrix::from_rows((0..n).map(|b| (0..n).map(|a| w[a][b].clone()).collect()).collect());
    m.kernel().into_iter().next()
}

/// Tables at one point: linearization `lin[A][B]` of the differential on coordinates `X^A` and
/// the pairing `w[A][B]` with `omega = 1/2 sum w_AB dX^A dX^B`.
pub(crate) struct PointData {
    pub lin: Vec<Vec<Rational>>,
    pub pairing: Vec<Vec<Rational>>,
    pub coord_degrees: Vec<i32>,
}

/// Runs the quasi-isomorphism test for `i(omega): T -> T^∨[n]` given point data.
pub(crate) fn test_point(data: &PointData, n: i64, point: &[Rational]) -> (PointEvidence, Option<Vec<Rational>>) {
    let size = data.coord_degrees.len();
    // source basis d/dX^A, target basis dX^B
    let src_deg: Vec<i32> = data.coord_degrees.iter().map(|d| 1 - d).collect();
    let tgt_deg: Vec<i32> = data.coord_degrees.iter().map(|d| 1 - n as i32 + d).collect();
    let mut src_d = vec![vec![Rational::zero(); size]; size];
    let mut tgt_d = vec![vec![Rational::zero(); size]; size];
    for a in 0..size {
        for b in 0..size {
            // d(dX^A) has dX^B-coefficient lin[A][B]; dually d(d/dX^B) hits d/dX^A
            tgt_d[b][a] = data.lin[a][b].clone();
            src_d[a][b] = data.lin[a][b].clone();
        }
    }
    let f: Vec<Vec<Rational>> = (0..size).map(|b| (0..size).map(|a| data.pairing[a][b].clone()).collect()).collect();
    let ev = quasi_iso_tables(&src_d, &src_deg, &tgt_d, &tgt_deg, &f, point);
    (ev, pairing_kernel(&data.pairing))
}

pub(crate) fn assemble(results: Vec<(PointEvidence, Option<Vec<Rational>>)>) -> Nondegeneracy {
    let mut kernel = None;
    let mut evidence = Vec::new();
    for (ev, k) in results {
        if kernel.is_none() {
            if let Some(v) = k {
                kernel = Some((ev.point.clone(), v));
            }
        }
        evidence.push(ev);
    }
    Nondegeneracy {
        holds: evidence.iter().all(|e| e.holds),
        strict: kernel.is_none(),
        kernel,
        evidence,
    }
}

/// Adds the pairing coefficient of a monomial with two differential slots `a <= b`.
pub(crate) fn add_pairing(w: &mut [Vec<Rational>], a: usize, b: usize, both_odd: bool, c: Rational) {
    if a == b {
        w[a][a] += c * Rational::from_integer(2.into());
    } else {
        w[a][b] += c.clone();
        w[b][a] += if both_odd { -c } else { c };
    }
}

fn point_data(omega: &TwoForm, point: &[Rational]) -> PointData {
    let wa = omega.weil();
    let (r, n) = (wa.rank(), wa.dim());
    let alg = wa.alg();
    let ce = wa.ce();
    let size = n + r;
    let mut lin = vec![vec![Rational::zero(); size]; size];
    let mut coords: Vec<Elem> = (0..n).map(|i| ce.d(&alg.var(i))).collect();
    coords.extend((0..r).map(|a| ce.differential().on_gens[a].clone()));
    for (a, q) in coords.iter().enumerate() {
        for (m, p) in q.terms() {
            let nz: Vec<usize> = (0..m.len()).filter(|&j| m[j] > 0).collect();
            if nz.len() == 1 && m[nz[0]] == 1 && nz[0] < r {
                lin[a][n + nz[0]] += p.eval(point);
            }
        }
    }
    let mut pairing = vec![vec![Rational::zero(); size]; size];
    for (m, p) in omega.de_rham_value().terms() {
        if m.iter().take(r).any(|&k| k > 0) {
            continue;
        }
        let c = p.eval(point);
        if c.is_zero() {
            continue;
        }
        let slots: Vec<usize> = (r..m.len()).flat_map(|j| std::iter::repeat(j).take(m[j] as usize)).collect();
        if slots.len() != 2 {
            continue;
        }
        let odd = alg.is_odd(slots[0]) && alg.is_odd(slots[1]);
        // dx^i sits at r + i and zeta^a at r + n + a; coordinates are x^i then xi^a
        add_pairing(&mut pairing, slots[0] - r, slots[1] - r, odd, c);
    }
    let mut coord_degrees = vec![0; n];
    coord_degrees.extend((0..r).map(|a| alg.gens()[a].degree));
    PointData {
        lin,
        pairing,
        coord_degrees,
    }
}

/// Nondegeneracy of `i(omega)` at the sample points of `policy`.
pub fn nondegenerate(omega: &TwoForm, policy: &SamplePolicy) -> Result<Nondegeneracy, SymplecticError> {
    let n = omega.weil().dim();
    let results = sample_points(n, policy)
        .into_iter()
        .map(|p| {
            let data = point_data(omega, &p);
            test_point(&data, omega.degree(), &p)
        })
        .collect();
    Ok(assemble(results))
}
