//! The refinement logic: sorts, terms, sorting, denotational evaluation,
//! and validity checking.

pub mod cooper;
pub mod eval;
pub mod refinement;
pub mod sort;
pub mod sorting;
pub mod interp;
pub mod validity;

pub use eval::{eval_refinement, Den, EvalError, RefinementEnv, DEFAULT_DOMAIN_BOUND};
pub use refinement::{Refinement, UnknownInfo, UnknownSym, NU};
pub use sort::Sort;
pub use sorting::{sort_of, SortCtx, SortError};
pub use validity::{check_validity_query, ValidityConfig, ValidityQuery, Verdict};
