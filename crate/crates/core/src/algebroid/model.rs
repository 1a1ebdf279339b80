use std::collections::BTreeSet;

use crate::exact_algebra::{MultiPoly, Rational};

use super::AlgebroidError;

/// Coordinate patch: an affine chart with named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    names: Vec<String>,
}

impl Patch {
    pub fn new(names: Vec<String>) -> Result<Self, AlgebroidError> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(AlgebroidError::Shape(format!("duplicate coordinate '{}'", n)));
            }
        }
        Ok(Self { names })
    }

    pub fn point() -> Self {
        Self { names: Vec::new() }
    }

    pub fn with_dim(n: usize) -> Self {
        let names = match n {
            1 => vec!["x".to_string()],
            2 => vec!["x".to_string(), "y".to_string()],
            _ => (0..n).map(|i| format!("x{}", i + 1)).collect(),
        };
        Self { names }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var(&self, name: &str) -> Result<usize, AlgebroidError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AlgebroidError::UnknownName(name.to_string()))
    }
}

/// Trivialized graded vector bundle: a frame of named sections with degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleModel {
    patch: Patch,
    frame: Vec<(String, i32)>,
}

impl BundleModel {
    pub fn new(patch: Patch, frame: Vec<(String, i32)>) -> Result<Self, AlgebroidError> {
        let mut seen = BTreeSet::new();
        for (n, _) in &frame {
            if !seen.insert(n) {
                return Err(AlgebroidError::Shape(format!("duplicate frame name '{}'", n)));
            }
        }
        Ok(Self { patch, frame })
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn frame(&self) -> &[(String, i32)] {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn degree(&self, a: usize) -> i32 {
        self.frame[a].1
    }

    pub fn name(&self, a: usize) -> &str {
        &self.frame[a].0
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebroidError> {
        self.frame
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| AlgebroidError::UnknownName(name.to_string()))
    }

    pub fn is_ungraded(&self) -> bool {
        self.frame.iter().all(|(_, d)| *d == 0)
    }
}

/// Connection on a trivialized bundle: `nabla_{d_i} e_a = sum_k gamma[i][a][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionModel {
    bundle: BundleModel,
    christoffel: Vec<Vec<Vec<MultiPoly>>>,
}

impl ConnectionModel {
    /// The connection for which the frame is parallel.
    pub fn flat(bundle: &BundleModel) -> Self {
        let n = bundle.patch().dim();
        let r = bundle.rank();
        Self {
            bundle: bundle.clone(),
            christoffel: vec![vec![vec![MultiPoly::zero(); r]; r]; n],
        }
    }

    pub fn new(bundle: &BundleModel, christoffel: Vec<Vec<Vec<MultiPoly>>>) -> Result<Self, AlgebroidError> {
        let n = bundle.patch().dim();
        let r = bundle.rank();
        if christoffel.len() != n || christoffel.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r)) {
            return Err(AlgebroidError::Shape(format!(
                "christoffel symbols must have shape {} x {} x {}",
                n, r, r
            )));
        }
        for (i, m) in christoffel.iter().enumerate() {
            for (a, row) in m.iter().enumerate() {
                for (k, g) in row.iter().enumerate() {
                    if !g.is_zero() && bundle.degree(a) != bundle.degree(k) {
                        return Err(AlgebroidError::Degree(format!(
                            "christoffel entry ({}, {}, {}) mixes degrees",
                            i, a, k
                        )));
                    }
                }
            }
        }
        Ok(Self {
            bundle: bundle.clone(),
            christoffel,
        })
    }

    pub fn bundle(&self) -> &BundleModel {
        &self.bundle
    }

    /// `Gamma^k_{i a}`.
    pub fn gamma(&self, i: usize, a: usize, k: usize) -> &MultiPoly {
        &self.christoffel[i][a][k]
    }

    pub fn christoffel(&self) -> &Vec<Vec<Vec<MultiPoly>>> {
        &self.christoffel
    }

    pub fn is_frame_flat(&self) -> bool {
        self.christoffel.iter().flatten().flatten().all(MultiPoly::is_zero)
    }

    /// Covariant derivative of a section along `d_i`.
    pub fn covariant(&self, i: usize, s: &[MultiPoly]) -> Vec<MultiPoly> {
        let r = self.bundle.rank();
        let mut out: Vec<MultiPoly> = s.iter().map(|f| f.differentiate(i)).collect();
        for (a, f) in s.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (k, slot) in out.iter_mut().enumerate().take(r) {
                let g = self.gamma(i, a, k);
                if !g.is_zero() {
                    slot.add_assign(&f.mul(g));
                }
            }
        }
        out
    }

    /// Difference tensor `other - self` as `[i][a][k]`.
    pub fn difference(&self, other: &ConnectionModel) -> Vec<Vec<Vec<MultiPoly>>> {
        self.christoffel
            .iter()
            .zip(&other.christoffel)
            .map(|(m1, m2)| {
                m1.iter()
                    .zip(m2)
                    .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| b.sub(a)).collect())
                    .collect()
            })
            .collect()
    }
}

/// A (dg) Lie algebroid on a trivialized graded bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebroidModel {
    bundle: BundleModel,
    /// `anchor[a][i] = rho^i_a`.
    anchor: Vec<Vec<MultiPoly>>,
    /// `brackets[a][b][k] = c^k_{ab}`.
    brackets: Vec<Vec<Vec<MultiPoly>>>,
    /// `internal_diff[a][b] = d^b_a`, i.e. `d e_a = sum_b d^b_a e_b`.
    internal_diff: Vec<Vec<MultiPoly>>,
    connection: ConnectionModel,
}

impl LieAlgebroidModel {
    /// Zero structure on a bundle.
    pub fn zero(bundle: BundleModel) -> Self {
        let n = bundle.patch().dim();
        let r = bundle.rank();
        let connection = ConnectionModel::flat(&bundle);
        Self {
            anchor: vec![vec![MultiPoly::zero(); n]; r],
            brackets: vec![vec![vec![MultiPoly::zero(); r]; r]; r],
            internal_diff: vec![vec![MultiPoly::zero(); r]; r],
            bundle,
            connection,
        }
    }

    pub fn bundle(&self) -> &BundleModel {
        &self.bundle
    }

    pub fn patch(&self) -> &Patch {
        self.bundle.patch()
    }

    pub fn rank(&self) -> usize {
        self.bundle.rank()
    }

    pub fn dim(&self) -> usize {
        self.bundle.patch().dim()
    }

    pub fn degree(&self, a: usize) -> i32 {
        self.bundle.degree(a)
    }

    pub fn anchor(&self, a: usize, i: usize) -> &MultiPoly {
        &self.anchor[a][i]
    }

    pub fn bracket(&self, a: usize, b: usize, k: usize) -> &MultiPoly {
        &self.brackets[a][b][k]
    }

    pub fn internal_diff(&self, a: usize, b: usize) -> &MultiPoly {
        &self.internal_diff[a][b]
    }

    pub fn connection(&self) -> &ConnectionModel {
        &self.connection
    }

    pub fn with_connection(mut self, c: ConnectionModel) -> Result<Self, AlgebroidError> {
        if c.bundle() != &self.bundle {
            return Err(AlgebroidError::Shape("connection is on a different bundle".into()));
        }
        self.connection = c;
        Ok(self)
    }

    pub fn is_dg(&self) -> bool {
        self.internal_diff.iter().flatten().any(|p| !p.is_zero())
    }

    pub fn set_anchor(&mut self, a: usize, i: usize, p: MultiPoly) -> Result<(), AlgebroidError> {
        if a >= self.rank() || i >= self.dim() {
            return Err(AlgebroidError::Shape(format!("anchor index ({}, {}) out of range", a, i)));
        }
        if !p.is_zero() && self.degree(a) != 0 {
            return Err(AlgebroidError::Degree(format!(
                "anchor on frame '{}' of nonzero degree",
                self.bundle.name(a)
            )));
        }
        self.anchor[a][i] = p;
        Ok(())
    }

    /// Sets `c^k_{ab}` and the graded-antisymmetric partner `c^k_{ba}`.
    pub fn set_bracket(&mut self, a: usize, b: usize, k: usize, p: MultiPoly) -> Result<(), AlgebroidError> {
        let r = self.rank();
        if a >= r || b >= r || k >= r {
            return Err(AlgebroidError::Shape(format!("bracket index ({}, {}, {}) out of range", a, b, k)));
        }
        if !p.is_zero() && self.degree(a) + self.degree(b) != self.degree(k) {
            return Err(AlgebroidError::Degree(format!(
                "bracket [{}, {}] -> {} does not preserve degree",
                self.bundle.name(a),
                self.bundle.name(b),
                self.bundle.name(k)
            )));
        }
        let koszul = (self.degree(a) * self.degree(b)).rem_euclid(2) == 1;
        let partner = if koszul { p.clone() } else { p.neg() };
        if a == b && !p.is_zero() && !koszul {
            return Err(AlgebroidError::Shape(format!(
                "bracket of even frame '{}' with itself must vanish",
                self.bundle.name(a)
            )));
        }
        self.brackets[a][b][k] = p;
        self.brackets[b][a][k] = partner;
        Ok(())
    }

    /// Sets `d^b_a`, the coefficient of `e_b` in `d e_a`.
    pub fn set_internal_diff(&mut self, a: usize, b: usize, p: MultiPoly) -> Result<(), AlgebroidError> {
        let r = self.rank();
        if a >= r || b >= r {
            return Err(AlgebroidError::Shape(format!("internal differential index ({}, {}) out of range", a, b)));
        }
        if !p.is_zero() && self.degree(b) != self.degree(a) + 1 {
            return Err(AlgebroidError::Degree(format!(
                "internal differential {} -> {} must raise degree by one",
                self.bundle.name(a),
                self.bundle.name(b)
            )));
        }
        self.internal_diff[a][b] = p;
        Ok(())
    }

    /// Anchor applied to a section, as a vector field.
    pub fn anchor_of(&self, s: &[MultiPoly]) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(); self.dim()];
        for (a, f) in s.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let r = &self.anchor[a][i];
                if !r.is_zero() {
                    slot.add_assign(&f.mul(r));
                }
            }
        }
        out
    }

    /// Internal differential applied to a section (function-linear).
    pub fn diff_of(&self, s: &[MultiPoly]) -> Vec<MultiPoly> {
        let r = self.rank();
        let mut out = vec![MultiPoly::zero(); r];
        for (a, f) in s.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (b, slot) in out.iter_mut().enumerate() {
                let d = &self.internal_diff[a][b];
                if !d.is_zero() {
                    slot.add_assign(&f.mul(d));
                }
            }
        }
        out
    }

    /// Bracket of two sections extended from the frame by the Leibniz rule.
    ///
    /// Sections are split by frame degree so that Koszul signs are exact.
    pub fn bracket_of(&self, s: &[MultiPoly], t: &[MultiPoly]) -> Vec<MultiPoly> {
        let r = self.rank();
        let mut out = vec![MultiPoly::zero(); r];
        for (a, f) in s.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (b, g) in t.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let fg = f.mul(g);
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = &self.brackets[a][b][k];
                    if !c.is_zero() {
                        slot.add_assign(&fg.mul(c));
                    }
                }
                // f rho_a(g) e_b
                let rho_a_g = apply_vector_field(&self.anchor[a], g);
                out[b].add_assign(&f.mul(&rho_a_g));
                // -(-1)^{|a||b|} g rho_b(f) e_a
                let rho_b_f = apply_vector_field(&self.anchor[b], f);
                let term = g.mul(&rho_b_f);
                if (self.degree(a) * self.degree(b)).rem_euclid(2) == 1 {
                    out[a].add_assign(&term);
                } else {
                    out[a].add_assign(&term.neg());
                }
            }
        }
        out
    }

    /// Frame section `e_a`.
    pub fn frame_section(&self, a: usize) -> Vec<MultiPoly> {
        let mut s = vec![MultiPoly::zero(); self.rank()];
        s[a] = MultiPoly::one();
        s
    }

    /// Common degree of the nonzero components of a section.
    pub fn section_degree(&self, s: &[MultiPoly]) -> Option<i32> {
        s.iter()
            .enumerate()
            .find(|(_, f)| !f.is_zero())
            .map(|(a, _)| self.degree(a))
    }

    /// Multiplies structure functions by a rational, used to build perturbed fixtures.
    pub fn scaled_brackets(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for m in out.brackets.iter_mut() {
            for row in m.iter_mut() {
                for p in row.iter_mut() {
                    *p = p.scale(c);
                }
            }
        }
        out
    }

    /// True when all structure data vanish.
    pub fn is_zero_structure(&self) -> bool {
        self.anchor.iter().flatten().all(MultiPoly::is_zero)
            && self.brackets.iter().flatten().flatten().all(MultiPoly::is_zero)
            && self.internal_diff.iter().flatten().all(MultiPoly::is_zero)
    }

    pub fn anchor_matrix(&self) -> &Vec<Vec<MultiPoly>> {
        &self.anchor
    }

    pub fn brackets_table(&self) -> &Vec<Vec<Vec<MultiPoly>>> {
        &self.brackets
    }

    pub fn internal_diff_matrix(&self) -> &Vec<Vec<MultiPoly>> {
        &self.internal_diff
    }

    /// Frame indices of a given degree.
    pub fn frames_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.rank()).filter(|&a| self.degree(a) == d).collect()
    }
}

/// `V(f) = sum_i V^i d_i f`.
pub fn apply_vector_field(v: &[MultiPoly], f: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let d = f.differentiate(i);
        if !d.is_zero() {
            out.add_assign(&vi.mul(&d));
        }
    }
    out
}

/// Commutator of vector fields `[V, W]^i = V(W^i) - W(V^i)`.
pub fn vector_field_bracket(v: &[MultiPoly], w: &[MultiPoly]) -> Vec<MultiPoly> {
    v.iter()
        .zip(w)
        .map(|(vi, wi)| apply_vector_field(v, wi).sub(&apply_vector_field(w, vi)))
        .collect()
}
