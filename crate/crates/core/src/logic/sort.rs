//! Sorts classify terms of the refinement language.

use serde::Serialize;
use std::fmt;

/// Sort of a refinement term: booleans, naturals, unit, an uninterpreted
/// sort tagged by a type variable, products, and arrows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum Sort {
    Bool,
    Nat,
    Unit,
    /// Uninterpreted sort `delta_alpha` for values of type variable `alpha`.
    Param(String),
    Prod(Box<Sort>, Box<Sort>),
    Arrow(Box<Sort>, Box<Sort>),
}

impl Sort {
    pub fn prod(a: Sort, b: Sort) -> Sort {
        Sort::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Sort, b: Sort) -> Sort {
        Sort::Arrow(Box::new(a), Box::new(b))
    }

    /// Right-nested product of a non-empty list of sorts; `Unit` when empty.
    pub fn tuple(sorts: &[Sort]) -> Sort {
        match sorts {
            [] => Sort::Unit,
            [s] => s.clone(),
            [s, rest @ ..] => Sort::prod(s.clone(), Sort::tuple(rest)),
        }
    }

    /// Arrow from an argument tuple to a result sort.
    pub fn fun(args: &[Sort], res: Sort) -> Sort {
        if args.is_empty() {
            res
        } else {
            Sort::arrow(Sort::tuple(args), res)
        }
    }

    /// The scalar (first-order) sorts admit quantification and equality.
    pub fn is_scalar(&self) -> bool {
        match self {
            Sort::Bool | Sort::Nat | Sort::Unit | Sort::Param(_) => true,
            Sort::Prod(a, b) => a.is_scalar() && b.is_scalar(),
            Sort::Arrow(..) => false,
        }
    }

    /// Number of components when viewed as a right-nested tuple.
    pub fn tuple_len(&self) -> usize {
        match self {
            Sort::Prod(_, rest) => 1 + rest.tuple_len(),
            _ => 1,
        }
    }

    /// Component `i` (0-based) of a right-nested tuple sort.
    pub fn tuple_component(&self, i: usize) -> &Sort {
        match (self, i) {
            (_, 0) if !matches!(self, Sort::Prod(..)) => self,
            (Sort::Prod(a, _), 0) => a,
            (Sort::Prod(_, rest), _) => rest.tuple_component(i - 1),
            _ => panic!("tuple_component: index {i} out of range for {self}"),
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Nat => write!(f, "Nat"),
            Sort::Unit => write!(f, "Unit"),
            Sort::Param(a) => write!(f, "@{a}"),
            Sort::Prod(a, b) => {
                let pa = matches!(**a, Sort::Arrow(..) | Sort::Prod(..));
                if pa {
                    write!(f, "({a})*{b}")
                } else {
                    write!(f, "{a}*{b}")
                }
            }
            Sort::Arrow(a, b) => {
                if matches!(**a, Sort::Arrow(..)) {
                    write!(f, "({a}) => {b}")
                } else {
                    write!(f, "{a} => {b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_classification() {
        assert!(Sort::Bool.is_scalar());
        assert!(Sort::Nat.is_scalar());
        assert!(Sort::Unit.is_scalar());
        assert!(Sort::Param("a".into()).is_scalar());
        assert!(Sort::prod(Sort::Nat, Sort::Bool).is_scalar());
        assert!(!Sort::arrow(Sort::Nat, Sort::Nat).is_scalar());
        assert!(!Sort::prod(Sort::arrow(Sort::Nat, Sort::Nat), Sort::Bool).is_scalar());
    }

    #[test]
    fn tuple_components() {
        let s = Sort::tuple(&[Sort::Nat, Sort::Bool, Sort::Unit]);
        assert_eq!(s.tuple_len(), 3);
        assert_eq!(*s.tuple_component(0), Sort::Nat);
        assert_eq!(*s.tuple_component(1), Sort::Bool);
        assert_eq!(*s.tuple_component(2), Sort::Unit);
    }
}
