use std::fmt;

use crate::algebra::{ElementId, FiniteAlgebra};

/// One failed law together with the first witness found for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<ElementId>,
}

/// Outcome of an exhaustive law check. Empty means every law held.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: impl Into<String>, witness: Vec<ElementId>) {
        self.violations.push(Violation {
            law: law.into(),
            witness,
        });
    }

    /// Records `law` with the first witness produced by `witnesses` that fails `holds`.
    pub(crate) fn first_failure<I, F>(&mut self, law: &str, witnesses: I, mut holds: F)
    where
        I: IntoIterator<Item = Vec<ElementId>>,
        F: FnMut(&[ElementId]) -> bool,
    {
        if let Some(w) = witnesses.into_iter().find(|w| !holds(w)) {
            self.push(law, w);
        }
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn find(&self, law: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.law == law)
    }

    /// Renders witnesses with element names of `algebra`.
    pub fn display<'a>(&'a self, algebra: &'a FiniteAlgebra) -> impl fmt::Display + 'a {
        Named {
            report: self,
            algebra,
        }
    }
}

struct Named<'a> {
    report: &'a ValidationReport,
    algebra: &'a FiniteAlgebra,
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.report.is_ok() {
            return writeln!(f, "ok");
        }
        for v in &self.report.violations {
            let names: Vec<&str> = v
                .witness
                .iter()
                .map(|&x| self.algebra.element_name(x))
                .collect();
            writeln!(f, "violated {} at ({})", v.law, names.join(", "))?;
        }
        Ok(())
    }
}

/// All tuples of length `arity` over `0..n`, in lexicographic order.
pub(crate) fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<ElementId>> {
    let total = n.checked_pow(arity as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}
