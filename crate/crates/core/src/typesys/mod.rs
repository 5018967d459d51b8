//! Types, multiplicities, typing contexts, and the structural judgments:
//! well-formedness, subtyping, sharing, substitution, and multiplication.

pub mod substitute;
pub mod types;

pub use substitute::{multiply_type, substitute_schema, substitute_type, TypeOpError};
pub use types::{base_sort, AnnotatedType, BaseType, DataType, Mult, RefinedType, Schema};
