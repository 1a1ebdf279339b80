//! Pass/fail verdicts with witnesses, shared by every checking operation.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(name: impl Into<String>, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(name),
            Some(w) => Self::fail(name, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        if self.witness.is_none() {
            self.witness = Some(note.into());
        }
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", if self.pass { "pass" } else { "FAIL" }, self.name)?;
        if let Some(w) = &self.witness {
            write!(f, ": {}", w)?;
        }
        Ok(())
    }
}

/// Ordered list of verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub verdicts: Vec<Verdict>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.verdicts.extend(other.verdicts);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            writeln!(f, "{}", v)?;
        }
        Ok(())
    }
}
