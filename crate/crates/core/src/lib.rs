//! Finite Stonean residuated lattices and their triples.
//!
//! Algebras are small operation tables ([`FiniteAlgebra`]). On top of them the
//! crate provides filters and quotients, the Stonean toolkit (bottom adjunction,
//! decomposition into Boolean and dense parts), the triple functor with its
//! inverse reconstruction, term equations, free-algebra assembly and an
//! enumerator of small algebras up to isomorphism.

pub mod algebra;
pub mod corpus;
pub mod error;
pub mod filters;
pub mod freealg;
pub mod hom;
pub mod reconstruct;
pub mod report;
pub mod stonean;
pub mod terms;
pub mod triples;

pub use algebra::{ElementId, FiniteAlgebra, Op, Subalgebra, Table};
pub use error::{Error, Result};
pub use filters::{ElementSet, FilterKind, FilterSet};
pub use hom::{are_isomorphic, Hom};
pub use report::{ValidationReport, Violation};
pub use triples::{Triple, TripleMorphism};
