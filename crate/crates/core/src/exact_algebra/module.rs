use std::collections::BTreeSet;

use super::ExactError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseRing {
    Poly,
    PolyForm,
}

/// Locally free graded module presented by named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeModule {
    generators: Vec<(String, i32, u32)>,
    base: BaseRing,
}

impl GradedFreeModule {
    pub fn new(generators: Vec<(String, i32, u32)>, base: BaseRing) -> Result<Self, ExactError> {
        let mut seen = BTreeSet::new();
        for (n, _, _) in &generators {
            if !seen.insert(n.clone()) {
                return Err(ExactError::DuplicateName(n.clone()));
            }
        }
        Ok(Self { generators, base })
    }

    pub fn generators(&self) -> &[(String, i32, u32)] {
        &self.generators
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Ranks per cohomological degree.
    pub fn ranks_by_degree(&self) -> std::collections::BTreeMap<i32, usize> {
        let mut out = std::collections::BTreeMap::new();
        for (_, d, _) in &self.generators {
            *out.entry(*d).or_insert(0) += 1;
        }
        out
    }

    /// The shifted module `M[k]`: degrees decrease by `k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            generators: self.generators.iter().map(|(n, d, w)| (n.clone(), d - k, *w)).collect(),
            base: self.base,
        }
    }

    /// The graded dual: degrees negate.
    pub fn dual(&self) -> Self {
        Self {
            generators: self
                .generators
                .iter()
                .map(|(n, d, w)| (format!("{}^", n), -d, *w))
                .collect(),
            base: self.base,
        }
    }
}
