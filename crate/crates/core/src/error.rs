use thiserror::Error;

use crate::algebra::ElementId;

/// Everything that can go wrong in this crate.
///
/// Law violations found by the validators are *not* errors; they come back in a
/// [`ValidationReport`](crate::ValidationReport). The variants here cover bad
/// input and broken expectations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Tables of the wrong shape, entries out of range, unknown element names.
    #[error("malformed algebra: {0}")]
    Structure(String),

    /// The operation needs structure the algebra does not carry (usually a bottom).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A documented precondition does not hold for the given input.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An argument breaks the contract of the callee (wrong filter kind, non-homomorphism, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Two constraints of a Chinese-remainder system disagree on the join of their filters.
    #[error("constraints {0} and {1} are incompatible")]
    Infeasible(usize, usize),

    /// A product-triple operator fails one of its axioms.
    #[error("product triple axiom {axiom} fails: {detail}")]
    ProductAxiom { axiom: &'static str, detail: String },

    /// Something that the theory guarantees did not happen. Always a bug.
    #[error("internal invariant failed: {0}")]
    Invariant(String),

    /// Size caps: enumeration limit, free algebra closure, product assembly.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// Term or equation syntax error. Line and column are 1-based.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// Text file format error. Line is 1-based.
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
}

impl Error {
    pub(crate) fn out_of_range(x: ElementId, size: usize) -> Self {
        Error::Structure(format!("element {x} out of range for algebra of size {size}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
