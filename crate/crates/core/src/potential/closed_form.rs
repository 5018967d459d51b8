//! Closed-form potential functions of the library datatypes, computed
//! directly from instance statistics. Each form is checked against the
//! inductive potential by the library validation suite.

use crate::kernel::Value;
use crate::logic::{eval_refinement, Den, RefinementEnv, Refinement};
use thiserror::Error;

/// Identifies a library datatype with a known closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryShape {
    /// Quadratic list: `sum_{i<j} q(a_i, a_j)`.
    QuadList,
    /// Exponential list: `q * (2^n - 1)`.
    ExpList,
    /// Balanced leaf tree with a power-of-two leaf count: `q * n * log2 n`.
    LogTree,
    /// Pathed tree: `q * |path selected by p|`.
    PathTree,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClosedFormError {
    #[error("value shape does not match the library type")]
    Shape,
    #[error("closed form requires a balanced power-of-two leaf tree")]
    UnsupportedShape,
    #[error("annotation evaluation failed: {0}")]
    Eval(String),
}

fn eval_nat_app(f: &Refinement, args: Vec<Refinement>) -> Result<u64, ClosedFormError> {
    let t = Refinement::app(f.clone(), args).normalize();
    match eval_refinement(&RefinementEnv::new(), &t) {
        Ok(Den::Nat(n)) => Ok(n),
        other => Err(ClosedFormError::Eval(format!("{other:?}"))),
    }
}

fn eval_nat(t: &Refinement) -> Result<u64, ClosedFormError> {
    match eval_refinement(&RefinementEnv::new(), &t.normalize()) {
        Ok(Den::Nat(n)) => Ok(n),
        other => Err(ClosedFormError::Eval(format!("{other:?}"))),
    }
}

fn eval_bool_app(f: &Refinement, args: Vec<Refinement>) -> Result<bool, ClosedFormError> {
    let t = Refinement::app(f.clone(), args).normalize();
    match eval_refinement(&RefinementEnv::new(), &t) {
        Ok(Den::Bool(b)) => Ok(b),
        other => Err(ClosedFormError::Eval(format!("{other:?}"))),
    }
}

/// The closed-form potential of a library value under ground annotation
/// parameters, excluding any potential stored in the element type.
pub fn closed_form_potential(
    shape: LibraryShape,
    v: &Value,
    theta: &[Refinement],
) -> Result<u64, ClosedFormError> {
    match shape {
        LibraryShape::QuadList => {
            let elems = list_elems(v, ("Nil", "Cons"))?;
            let q = theta.first().ok_or(ClosedFormError::Shape)?;
            let mut total = 0u64;
            for i in 0..elems.len() {
                for j in (i + 1)..elems.len() {
                    total += eval_nat_app(
                        q,
                        vec![Refinement::Nat(elems[i]), Refinement::Nat(elems[j])],
                    )?;
                }
            }
            Ok(total)
        }
        LibraryShape::ExpList => {
            let elems = list_elems(v, ("ENil", "ECons"))?;
            let q = eval_nat(theta.first().ok_or(ClosedFormError::Shape)?)?;
            let n = u32::try_from(elems.len()).map_err(|_| ClosedFormError::Shape)?;
            let pow = 2u64.checked_pow(n).ok_or(ClosedFormError::Shape)?;
            Ok(q * (pow - 1))
        }
        LibraryShape::LogTree => {
            let q = eval_nat(theta.first().ok_or(ClosedFormError::Shape)?)?;
            let (leaves, depth) = balanced_stats(v)?;
            if !leaves.is_power_of_two() {
                return Err(ClosedFormError::UnsupportedShape);
            }
            debug_assert_eq!(1u64 << depth, leaves);
            Ok(q * leaves * depth)
        }
        LibraryShape::PathTree => {
            let p = theta.first().ok_or(ClosedFormError::Shape)?;
            let q = eval_nat(theta.get(1).ok_or(ClosedFormError::Shape)?)?;
            let len = path_length(v, p)?;
            Ok(q * len)
        }
    }
}

fn list_elems(v: &Value, ctors: (&str, &str)) -> Result<Vec<u64>, ClosedFormError> {
    let mut out = Vec::new();
    let mut cur = v;
    loop {
        match cur {
            Value::Ctor { name, .. } if name == ctors.0 => return Ok(out),
            Value::Ctor { name, content, children } if name == ctors.1 => {
                match **content {
                    Value::Nat(n) => out.push(n),
                    _ => return Err(ClosedFormError::Shape),
                }
                cur = children.first().ok_or(ClosedFormError::Shape)?;
            }
            _ => return Err(ClosedFormError::Shape),
        }
    }
}

/// Leaf count and uniform depth; errors unless all leaves share a depth.
fn balanced_stats(v: &Value) -> Result<(u64, u64), ClosedFormError> {
    match v {
        Value::Ctor { name, .. } if name == "Leaf" => Ok((1, 0)),
        Value::Ctor { name, children, .. } if name == "Node" => {
            let (nl, dl) = balanced_stats(children.first().ok_or(ClosedFormError::Shape)?)?;
            let (nr, dr) = balanced_stats(children.get(1).ok_or(ClosedFormError::Shape)?)?;
            if dl != dr {
                return Err(ClosedFormError::UnsupportedShape);
            }
            Ok((nl + nr, dl + 1))
        }
        _ => Err(ClosedFormError::Shape),
    }
}

/// Length of the root-to-leaf path selected by the predicate.
fn path_length(v: &Value, p: &Refinement) -> Result<u64, ClosedFormError> {
    match v {
        Value::Ctor { name, .. } if name == "PLeaf" => Ok(0),
        Value::Ctor { name, content, children } if name == "PNode" => {
            let x = match **content {
                Value::Nat(n) => n,
                _ => return Err(ClosedFormError::Shape),
            };
            let go_left = eval_bool_app(p, vec![Refinement::Nat(x)])?;
            let child = if go_left {
                children.first()
            } else {
                children.get(1)
            }
            .ok_or(ClosedFormError::Shape)?;
            Ok(1 + path_length(child, p)?)
        }
        _ => Err(ClosedFormError::Shape),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::test_values::*;

    #[test]
    fn elist_closed_form_small() {
        // q=2, n=3: 2 * (2^3 - 1) = 14
        let v = elist(&[5, 6, 7]);
        let got =
            closed_form_potential(LibraryShape::ExpList, &v, &[Refinement::Nat(2)]).unwrap();
        assert_eq!(got, 14);
    }

    #[test]
    fn ltree_closed_form_power_of_two() {
        // q=1, n=4 balanced: 1 * 4 * 2 = 8
        let v = balanced_ltree(&[1, 2, 3, 4]);
        let got =
            closed_form_potential(LibraryShape::LogTree, &v, &[Refinement::Nat(1)]).unwrap();
        assert_eq!(got, 8);
    }

    #[test]
    fn unbalanced_ltree_rejected() {
        let v = Value::ctor(
            "Node",
            Value::Triv,
            vec![
                balanced_ltree(&[1]),
                Value::ctor(
                    "Node",
                    Value::Triv,
                    vec![balanced_ltree(&[2]), balanced_ltree(&[3])],
                ),
            ],
        );
        assert_eq!(
            closed_form_potential(LibraryShape::LogTree, &v, &[Refinement::Nat(1)]),
            Err(ClosedFormError::UnsupportedShape)
        );
    }

    #[test]
    fn ptree_leaf_has_zero_path() {
        let p = Refinement::lambda(&["x"], crate::logic::Sort::Nat, Refinement::Top);
        let got = closed_form_potential(
            LibraryShape::PathTree,
            &ptree_leaf(),
            &[p, Refinement::Nat(1)],
        )
        .unwrap();
        assert_eq!(got, 0);
    }

    #[test]
    fn quad_list_counts_inversions() {
        // q = ite(x1 > x2, 1, 0) on [2,1]: one inversion
        let q = Refinement::lambda(
            &["x1", "x2"],
            crate::logic::Sort::Nat,
            Refinement::ite(
                Refinement::gt(Refinement::var("x1"), Refinement::var("x2")),
                Refinement::Nat(1),
                Refinement::Nat(0),
            ),
        );
        let v = lib_list(&[2, 1]);
        assert_eq!(
            closed_form_potential(LibraryShape::QuadList, &v, &[q]).unwrap(),
            1
        );
    }
}
