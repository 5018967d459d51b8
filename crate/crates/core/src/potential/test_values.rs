//! Builders for datatype values used by oracles and tests.

use crate::kernel::Value;

/// A list value `Cons(x1, <Cons(x2, <..Nil>)>)` using the given
/// constructor names.
pub fn list_with(ctors: (&str, &str), elems: &[u64]) -> Value {
    let (nil, cons) = ctors;
    let mut v = Value::ctor(nil, Value::Triv, vec![]);
    for x in elems.iter().rev() {
        v = Value::ctor(cons, Value::Nat(*x), vec![v]);
    }
    v
}

/// Dependent-annotation natural list value.
pub fn nat_list(elems: &[u64]) -> Value {
    list_with(("DNil", "DCons"), elems)
}

/// Vector-annotation natural list value.
pub fn vec_list(elems: &[u64]) -> Value {
    list_with(("VNil", "VCons"), elems)
}

/// Library quadratic list value.
pub fn lib_list(elems: &[u64]) -> Value {
    list_with(("Nil", "Cons"), elems)
}

/// Library exponential list value.
pub fn elist(elems: &[u64]) -> Value {
    list_with(("ENil", "ECons"), elems)
}

/// A balanced leaf tree over the given elements; panics unless the element
/// count is a power of two.
pub fn balanced_ltree(elems: &[u64]) -> Value {
    assert!(elems.len().is_power_of_two() && !elems.is_empty());
    if elems.len() == 1 {
        return Value::ctor("Leaf", Value::Nat(elems[0]), vec![]);
    }
    let mid = elems.len() / 2;
    Value::ctor(
        "Node",
        Value::Triv,
        vec![balanced_ltree(&elems[..mid]), balanced_ltree(&elems[mid..])],
    )
}

/// An arbitrary-shape leaf tree driven by a shape oracle: `split(n)`
/// returns how many of `n` leaves go left.
pub fn ltree_with_shape(elems: &[u64], split: &mut impl FnMut(usize) -> usize) -> Value {
    if elems.len() == 1 {
        return Value::ctor("Leaf", Value::Nat(elems[0]), vec![]);
    }
    let k = split(elems.len()).clamp(1, elems.len() - 1);
    Value::ctor(
        "Node",
        Value::Triv,
        vec![
            ltree_with_shape(&elems[..k], split),
            ltree_with_shape(&elems[k..], split),
        ],
    )
}

/// A binary search tree as a pathed tree (`PNode`/`PLeaf`).
pub fn ptree_leaf() -> Value {
    Value::ctor("PLeaf", Value::Triv, vec![])
}

pub fn ptree_node(x: u64, l: Value, r: Value) -> Value {
    Value::ctor("PNode", Value::Nat(x), vec![l, r])
}

/// Insert into a BST-shaped pathed tree (left = smaller).
pub fn ptree_insert(t: Value, x: u64) -> Value {
    match t {
        Value::Ctor { ref name, .. } if name == "PLeaf" => {
            ptree_node(x, ptree_leaf(), ptree_leaf())
        }
        Value::Ctor { name, content, mut children } if name == "PNode" => {
            let y = match *content {
                Value::Nat(y) => y,
                _ => unreachable!(),
            };
            if x < y {
                let l = children.remove(0);
                let r = children.remove(0);
                ptree_node(y, ptree_insert(l, x), r)
            } else {
                let l = children.remove(0);
                let r = children.remove(0);
                ptree_node(y, l, ptree_insert(r, x))
            }
        }
        _ => unreachable!(),
    }
}

pub fn ptree_from(elems: &[u64]) -> Value {
    elems.iter().fold(ptree_leaf(), |t, x| ptree_insert(t, *x))
}
