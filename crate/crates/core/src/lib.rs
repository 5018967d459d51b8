//! Verification of resource bounds for functional programs against
//! refinement types carrying potential annotations, including inductive
//! and abstract potentials on user-defined datatypes. Checking generates
//! second-order conditional-linear-arithmetic constraints; a
//! cost-instrumented interpreter serves as an executable soundness oracle.

pub mod kernel;
pub mod potential;
pub mod typesys;
pub mod logic;
pub mod span;

pub use span::{FileId, LineMap, Span};
