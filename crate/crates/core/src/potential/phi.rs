//! The inductive potential function over values: the ground oracle every
//! closed-form and constraint-level claim is checked against.

use crate::kernel::Value;
use crate::logic::interp::{interpret_value, InterpError};
use crate::logic::{eval_refinement, Den, EvalError, RefinementEnv, Refinement, NU};
use crate::potential::{SigTable, SignatureError};
use crate::typesys::substitute::substitute_type;
use crate::typesys::types::{AnnotatedType, BaseType, DataType, RefinedType};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhiError {
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("value does not inhabit the given type: {0}")]
    Shape(String),
    #[error("potential of a value at an uninstantiated type variable")]
    Abstract,
}

/// Evaluate a ground annotation at `_v := I(v)`.
fn eval_at(table: &SigTable, phi: &Refinement, v: &Value) -> Result<u64, PhiError> {
    let iv = interpret_value(table, v)?;
    let grounded = phi.subst(NU, &iv).normalize();
    let env = RefinementEnv::new();
    match eval_refinement(&env, &grounded)? {
        Den::Nat(n) => Ok(n),
        d => Err(PhiError::Shape(format!("annotation evaluated to {d}"))),
    }
}

/// Total potential of a closed value with respect to a ground annotated
/// type: the top-level annotation evaluated at the value, plus the
/// inductively defined structural potential.
pub fn potential_of_value(
    table: &SigTable,
    v: &Value,
    t: &AnnotatedType,
) -> Result<u64, PhiError> {
    let top = eval_at(table, &t.potential, v)?;
    let inner = match &t.shape {
        RefinedType::Subset { base, .. } => potential_of_base(table, v, base)?,
        RefinedType::Arrow { .. } => 0,
    };
    Ok(top + inner)
}

fn potential_of_base(table: &SigTable, v: &Value, b: &BaseType) -> Result<u64, PhiError> {
    match b {
        BaseType::Nat | BaseType::Bool | BaseType::Unit => Ok(0),
        BaseType::TVar { .. } => Err(PhiError::Abstract),
        BaseType::Prod(b1, b2) => match v {
            Value::Pair(v1, v2) => {
                Ok(potential_of_base(table, v1, b1)? + potential_of_base(table, v2, b2)?)
            }
            _ => Err(PhiError::Shape("pair type, non-pair value".into())),
        },
        BaseType::Data(dt) => potential_of_data(table, v, dt),
    }
}

fn potential_of_data(table: &SigTable, v: &Value, dt: &DataType) -> Result<u64, PhiError> {
    let Value::Ctor { name, content, children } = v else {
        return Err(PhiError::Shape("datatype, non-constructor value".into()));
    };
    let sig = &dt.sig;
    let j = sig.index_of(name)?;
    let ctor = sig.ctor(j);
    if children.len() != ctor.arity {
        return Err(PhiError::Shape(format!("constructor {name} arity")));
    }

    let content_ty = instantiate_content(dt, j)?;
    let content_phi = potential_of_value(table, content, &content_ty)?;

    let content_ref = interpret_value(table, content)?;
    let pi = sig.extract_constructor_potential(j, &content_ref, &dt.theta)?;
    let pi_val = eval_nat(&pi)?;

    let shifted = sig.shift_children(j, &content_ref, &dt.theta)?;
    let mut total = content_phi + pi_val;
    for (i, child) in children.iter().enumerate() {
        let child_dt = child_instance(dt, j, i, &content_ref, &shifted)?;
        total += potential_of_data(table, child, &child_dt)?;
    }
    Ok(total)
}

fn eval_nat(r: &Refinement) -> Result<u64, PhiError> {
    let env = RefinementEnv::new();
    match eval_refinement(&env, &r.normalize())? {
        Den::Nat(n) => Ok(n),
        d => Err(PhiError::Shape(format!("expected Nat, got {d}"))),
    }
}

/// Content type of constructor `j` with the element parameter and the
/// annotation parameters instantiated.
pub fn instantiate_content(dt: &DataType, j: usize) -> Result<AnnotatedType, PhiError> {
    let tpl = &dt.sig.ctor(j).content;
    let mut map = std::collections::BTreeMap::new();
    for ((p, _), t) in dt.sig.logic_params.iter().zip(&dt.theta) {
        map.insert(p.clone(), t.clone());
    }
    let tpl = crate::typesys::substitute::subst_type_refs(&map, tpl);
    match (&dt.sig.elem_param, &dt.elem) {
        (Some(alpha), Some(elem)) => Ok(substitute_type(elem, alpha, &tpl)
            .map_err(|e| PhiError::Shape(e.to_string()))?),
        (None, _) => Ok(tpl),
        (Some(_), None) => Err(PhiError::Abstract),
    }
}

/// The datatype instance at which child `i` of constructor `j` is typed:
/// shifted annotation parameters and element potential bumped by the
/// increment for that child.
pub fn child_instance(
    dt: &DataType,
    j: usize,
    i: usize,
    content_ref: &Refinement,
    shifted: &[Vec<Refinement>],
) -> Result<DataType, PhiError> {
    let bump = dt.sig.elem_bump(j, i, content_ref, &dt.theta)?;
    let elem = match &dt.elem {
        Some(e) => {
            let bumped = (**e).clone().add_potential(bump);
            Some(Box::new(bumped))
        }
        None => {
            if !bump.is_zero() {
                return Err(PhiError::Shape(
                    "element increment on a monomorphic datatype".into(),
                ));
            }
            None
        }
    };
    Ok(DataType { sig: dt.sig.clone(), elem, theta: shifted[i].clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::builtin;
    use crate::potential::test_values::nat_list;
    use crate::logic::Refinement as R;
    use crate::logic::Sort;

    /// NatList with dependent annotations (theta1, theta2): the running
    /// example signature with pi_Cons = theta1(y) and the dependent shift.
    #[test]
    fn natlist_measure_counts_length() {
        let (table, _) = builtin::natlist_dependent();
        let v = nat_list(&[7]);
        assert_eq!(measure(&table, &v), R::Nat(1));
        let v0 = nat_list(&[]);
        assert_eq!(measure(&table, &v0), R::Nat(0));
        let v3 = nat_list(&[1, 2, 3]);
        assert_eq!(measure(&table, &v3), R::Nat(3));
    }

    fn measure(table: &SigTable, v: &Value) -> Refinement {
        crate::logic::interp::measure_value(table, v).unwrap()
    }

    #[test]
    fn nil_has_zero_potential() {
        let (table, sig) = builtin::natlist_dependent();
        let theta = vec![
            R::lambda(&["x"], Sort::Nat, R::Nat(5)),
            R::lambda(&["x1", "x2"], Sort::Nat, R::Nat(7)),
        ];
        let t = AnnotatedType::data(DataType { sig, elem: None, theta });
        assert_eq!(potential_of_value(&table, &nat_list(&[]), &t).unwrap(), 0);
    }

    #[test]
    fn dependent_shift_matches_example() {
        // lhd_Cons(y)(theta1, theta2) = (\x. theta1(x) + theta2(y, x), theta2)
        let (_, sig) = builtin::natlist_dependent();
        let theta = vec![R::var("t1"), R::var("t2")];
        let shifted = sig
            .shift_children(1, &R::var("y"), &theta)
            .unwrap();
        assert_eq!(shifted.len(), 1);
        let first = &shifted[0][0];
        // applying the shifted first component at x gives t1(x) + t2(y, x)
        let applied = R::app(first.clone(), vec![R::var("x")]).normalize();
        let expected = R::add(
            R::app(R::var("t1"), vec![R::var("x")]),
            R::app(R::var("t2"), vec![R::var("y"), R::var("x")]).normalize(),
        )
        .normalize();
        assert_eq!(applied, expected);
        assert_eq!(shifted[0][1], R::var("t2"));
    }

    #[test]
    fn extract_picks_theta1_at_head() {
        // pi_Cons(y)(theta) = theta1(y)
        let (_, sig) = builtin::natlist_dependent();
        let theta = vec![
            R::lambda(&["x"], Sort::Nat, R::add(R::var("x"), R::Nat(1))),
            R::lambda(&["x1", "x2"], Sort::Nat, R::Nat(0)),
        ];
        let pi = sig
            .extract_constructor_potential(1, &R::Nat(4), &theta)
            .unwrap();
        assert_eq!(pi, R::Nat(5));
        // pi_Nil = 0
        let pi0 = sig
            .extract_constructor_potential(0, &R::Star, &theta)
            .unwrap();
        assert_eq!(pi0, R::Nat(0));
    }

    #[test]
    fn inversion_counting_potential() {
        // theta2 = ite(x1 > x2, 1, 0), theta1 = 0: potential of [2,1] is
        // the number of out-of-order pairs, here 1.
        let (table, sig) = builtin::natlist_dependent();
        let theta = vec![
            R::lambda(&["x"], Sort::Nat, R::Nat(0)),
            R::lambda(
                &["x1", "x2"],
                Sort::Nat,
                R::ite(R::gt(R::var("x1"), R::var("x2")), R::Nat(1), R::Nat(0)),
            ),
        ];
        let t = AnnotatedType::data(DataType { sig, elem: None, theta });
        assert_eq!(
            potential_of_value(&table, &nat_list(&[2, 1]), &t).unwrap(),
            1
        );
        // sorted list carries none
        assert_eq!(
            potential_of_value(&table, &nat_list(&[1, 2, 3]), &t).unwrap(),
            0
        );
        // reverse-sorted [3,2,1] has all 3 pairs out of order
        assert_eq!(
            potential_of_value(&table, &nat_list(&[3, 2, 1]), &t).unwrap(),
            3
        );
    }
}
