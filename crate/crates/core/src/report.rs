use std::fmt;

use serde::Serialize;

/// A single violated clause together with a human readable witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub detail: String,
}

/// Outcome of a validator: the list of violated clauses (empty iff valid)
/// plus free-form notes about modelling choices used during the check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violate(&mut self, clause: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            clause: clause.into(),
            detail: detail.into(),
        });
    }

    /// Records `detail` under `clause` unless `ok` holds.
    pub fn check(&mut self, ok: bool, clause: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.violate(clause, detail());
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn has(&self, clause: &str) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }

    /// Appends the violations of `other`, prefixing each clause with `prefix`.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for v in other.violations {
            self.violations.push(Violation {
                clause: format!("{prefix}{}", v.clause),
                detail: v.detail,
            });
        }
        self.notes.extend(other.notes);
    }

    pub fn into_result(self, what: &str) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::Invalid {
                what: what.to_string(),
                report: self,
            })
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "valid")?;
        }
        for v in &self.violations {
            writeln!(f, "  {}: {}", v.clause, v.detail)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
