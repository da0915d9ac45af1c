//! Cyclotomic orthomorphisms over finite fields: construction, verification, exact
//! counting, exhaustive search, and export as mutually orthogonal Latin squares.

pub mod cli;
pub mod constructions;
pub mod counting;
pub mod cyclotomy;
pub mod error;
pub mod field;
pub mod latin;
pub mod manifest;
pub mod numtheory;
pub mod orthomorphism;
pub mod search;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, FieldOptions};
pub use orthomorphism::{AnyMap, CyclotomicMap, MapRecord, PermutationMap};
