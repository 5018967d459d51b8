//! The interpretation `I(.)` reflecting interpretable atoms into the
//! refinement logic, and measure evaluation for datatype values.

use super::refinement::Refinement;
use crate::kernel::{SimpAtom, Value};
use crate::potential::{SigTable, SignatureError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterpError {
    #[error("atom is not interpretable")]
    NotInterpretable,
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Reflect a simple atom as its logical refinement: variables map to
/// themselves, literals to literal refinements, and constructor atoms to
/// their (possibly symbolic) measure.
pub fn interpret_atom(table: &SigTable, a: &SimpAtom) -> Result<Refinement, InterpError> {
    match a {
        SimpAtom::Var(x) => Ok(Refinement::var(x.clone())),
        SimpAtom::Nat(n) => Ok(Refinement::Nat(*n)),
        SimpAtom::True => Ok(Refinement::Top),
        SimpAtom::False => Ok(Refinement::ff()),
        SimpAtom::Triv => Ok(Refinement::Star),
        SimpAtom::Pair(x, y) => Ok(Refinement::pair(
            interpret_atom(table, x)?,
            interpret_atom(table, y)?,
        )),
        SimpAtom::Ctor { name, content, children } => {
            let (sig, j) = table
                .ctor(name)
                .ok_or_else(|| InterpError::UnknownConstructor(name.clone()))?;
            let c = interpret_atom(table, content)?;
            let ks = children
                .iter()
                .map(|ch| interpret_atom(table, ch))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(sig.measure_apply(j, &c, &ks)?)
        }
    }
}

/// Structurally evaluate the measure of a constructor value.
pub fn measure_value(table: &SigTable, v: &Value) -> Result<Refinement, InterpError> {
    interpret_value(table, v)
}

/// Interpretation of a closed value; always yields a closed refinement.
pub fn interpret_value(table: &SigTable, v: &Value) -> Result<Refinement, InterpError> {
    match v {
        Value::Nat(n) => Ok(Refinement::Nat(*n)),
        Value::True => Ok(Refinement::Top),
        Value::False => Ok(Refinement::ff()),
        Value::Triv => Ok(Refinement::Star),
        Value::Pair(a, b) => Ok(Refinement::pair(
            interpret_value(table, a)?,
            interpret_value(table, b)?,
        )),
        Value::Ctor { name, content, children } => {
            let (sig, j) = table
                .ctor(name)
                .ok_or_else(|| InterpError::UnknownConstructor(name.clone()))?;
            let c = interpret_value(table, content)?;
            let ks = children
                .iter()
                .map(|ch| interpret_value(table, ch))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(sig.measure_apply(j, &c, &ks)?.normalize())
        }
        Value::Abs { .. } | Value::Fix { .. } => Err(InterpError::NotInterpretable),
    }
}
