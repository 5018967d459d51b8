//! Programmatic constructions of the annotated datatypes used throughout:
//! natural-number lists with numeric-vector and dependent annotations, and
//! the reusable library types (quadratic and exponential lists, leaf trees,
//! pathed trees). The surface elaborator independently reproduces the
//! library signatures from source; tests compare the two routes.

use super::signature::{child_slot, CtorSig, InductiveSignature, SigTable, CONTENT_SLOT};
use crate::logic::{Refinement as R, Sort};
use crate::typesys::types::{AnnotatedType, BaseType};
use std::rc::Rc;

fn slot() -> R {
    R::var(CONTENT_SLOT)
}

fn length_measure_nil() -> R {
    R::Nat(0)
}

fn length_measure_cons() -> R {
    R::add(R::var(child_slot(0)), R::Nat(1))
}

/// `NatList` with a numeric annotation vector `(q1, .., qk)`: the head
/// frees `q1` and the tail is annotated with the shifted vector
/// `(q1+q2, .., qk-1+qk, qk)`.
pub fn natlist_vector(k: usize) -> (SigTable, Rc<InductiveSignature>) {
    assert!(k >= 1);
    let params: Vec<(String, Sort)> =
        (1..=k).map(|i| (format!("q{i}"), Sort::Nat)).collect();
    let nil = CtorSig::plain("VNil", AnnotatedType::unit(), 0, &params)
        .with_measure(length_measure_nil());
    let shift: Vec<R> = (1..=k)
        .map(|i| {
            if i < k {
                R::add(R::var(format!("q{i}")), R::var(format!("q{}", i + 1)))
            } else {
                R::var(format!("q{k}"))
            }
        })
        .collect();
    let cons = CtorSig::plain("VCons", AnnotatedType::nat(), 1, &params)
        .with_measure(length_measure_cons())
        .with_extract(R::var("q1"))
        .with_shift(vec![shift]);
    let sig = Rc::new(InductiveSignature {
        name: format!("NatListV{k}"),
        elem_param: None,
        logic_params: params,
        measure_sort: Sort::Nat,
        ctors: vec![nil, cons],
    });
    let mut table = SigTable::new();
    table.insert(sig.clone());
    (table, sig)
}

/// `NatList` with dependent annotations `(theta1 : Nat => Nat,
/// theta2 : Nat*Nat => Nat)`: the head frees `theta1(y)` and the tail is
/// annotated with `(\x. theta1(x) + theta2(y, x), theta2)`.
pub fn natlist_dependent() -> (SigTable, Rc<InductiveSignature>) {
    let t1 = Sort::arrow(Sort::Nat, Sort::Nat);
    let t2 = Sort::arrow(Sort::prod(Sort::Nat, Sort::Nat), Sort::Nat);
    let params = vec![("theta1".to_string(), t1), ("theta2".to_string(), t2)];
    let nil = CtorSig::plain("DNil", AnnotatedType::unit(), 0, &params)
        .with_measure(length_measure_nil());
    let shifted_first = R::lambda(
        &["x"],
        Sort::Nat,
        R::add(
            R::app(R::var("theta1"), vec![R::var("x")]),
            R::app(R::var("theta2"), vec![slot(), R::var("x")]),
        ),
    );
    let cons = CtorSig::plain("DCons", AnnotatedType::nat(), 1, &params)
        .with_measure(length_measure_cons())
        .with_extract(R::app(R::var("theta1"), vec![slot()]))
        .with_shift(vec![vec![shifted_first, R::var("theta2")]]);
    let sig = Rc::new(InductiveSignature {
        name: "NatListD".into(),
        elem_param: None,
        logic_params: params,
        measure_sort: Sort::Nat,
        ctors: vec![nil, cons],
    });
    let mut table = SigTable::new();
    table.insert(sig.clone());
    (table, sig)
}

/// Polymorphic quadratic list: `List a <q :: a -> a -> Nat>` where the
/// tail's elements each gain `q(x, _v)` with `x` the head. The annotation
/// itself passes through unchanged and matches free no potential.
pub fn quad_list() -> Rc<InductiveSignature> {
    let elem = "t".to_string();
    let qs = Sort::arrow(
        Sort::prod(Sort::Param(elem.clone()), Sort::Param(elem.clone())),
        Sort::Nat,
    );
    let params = vec![("q".to_string(), qs)];
    let nil = CtorSig::plain("Nil", AnnotatedType::unit(), 0, &params)
        .with_measure(length_measure_nil());
    let cons = CtorSig::plain("Cons", AnnotatedType::tvar(&elem), 1, &params)
        .with_measure(length_measure_cons())
        .with_elem_bumps(vec![R::app(R::var("q"), vec![slot(), R::nu()])]);
    Rc::new(InductiveSignature {
        name: "List".into(),
        elem_param: Some(elem),
        logic_params: params,
        measure_sort: Sort::Nat,
        ctors: vec![nil, cons],
    })
}

/// Exponential list: `EList a <q :: Nat>`; the head carries `q` and the
/// tail's annotation doubles.
pub fn exp_list() -> Rc<InductiveSignature> {
    let elem = "t".to_string();
    let params = vec![("q".to_string(), Sort::Nat)];
    let nil = CtorSig::plain("ENil", AnnotatedType::unit(), 0, &params)
        .with_measure(length_measure_nil());
    let cons = CtorSig::plain(
        "ECons",
        AnnotatedType::tvar(&elem).with_potential(R::var("q")),
        1,
        &params,
    )
    .with_measure(length_measure_cons())
    .with_shift(vec![vec![R::add(R::var("q"), R::var("q"))]]);
    Rc::new(InductiveSignature {
        name: "EList".into(),
        elem_param: Some(elem),
        logic_params: params,
        measure_sort: Sort::Nat,
        ctors: vec![nil, cons],
    })
}

/// Leaf tree: `LTree a <q :: Nat>`; each level adds `q` to every element
/// below it, so a leaf at depth `d` carries `q*d`. The measure counts
/// leaves.
pub fn log_tree() -> Rc<InductiveSignature> {
    let elem = "t".to_string();
    let params = vec![("q".to_string(), Sort::Nat)];
    let leaf = CtorSig::plain("Leaf", AnnotatedType::tvar(&elem), 0, &params)
        .with_measure(R::Nat(1));
    let node = CtorSig::plain("Node", AnnotatedType::unit(), 2, &params)
        .with_measure(R::add(R::var(child_slot(0)), R::var(child_slot(1))))
        .with_elem_bumps(vec![R::var("q"), R::var("q")]);
    Rc::new(InductiveSignature {
        name: "LTree".into(),
        elem_param: Some(elem),
        logic_params: params,
        measure_sort: Sort::Nat,
        ctors: vec![leaf, node],
    })
}

/// Pathed tree: `PTree a <p :: a -> Bool, q :: Nat>`; the node's element
/// carries `q`, and the predicate routes the annotation to exactly one
/// subtree. The measure counts nodes.
pub fn path_tree() -> Rc<InductiveSignature> {
    let elem = "t".to_string();
    let ps = Sort::arrow(Sort::Param(elem.clone()), Sort::Bool);
    let params = vec![("p".to_string(), ps), ("q".to_string(), Sort::Nat)];
    let leaf = CtorSig::plain("PLeaf", AnnotatedType::unit(), 0, &params)
        .with_measure(R::Nat(0));
    let guard = R::app(R::var("p"), vec![slot()]);
    let node = CtorSig::plain(
        "PNode",
        AnnotatedType::tvar(&elem).with_potential(R::var("q")),
        2,
        &params,
    )
    .with_measure(R::add(
        R::add(R::var(child_slot(0)), R::var(child_slot(1))),
        R::Nat(1),
    ))
    .with_shift(vec![
        vec![R::var("p"), R::ite(guard.clone(), R::var("q"), R::Nat(0))],
        vec![R::var("p"), R::ite(guard, R::Nat(0), R::var("q"))],
    ]);
    Rc::new(InductiveSignature {
        name: "PTree".into(),
        elem_param: Some(elem),
        logic_params: params,
        measure_sort: Sort::Nat,
        ctors: vec![leaf, node],
    })
}

/// Table holding all four library datatypes.
pub fn library_table() -> SigTable {
    let mut t = SigTable::new();
    t.insert(quad_list());
    t.insert(exp_list());
    t.insert(log_tree());
    t.insert(path_tree());
    t
}

/// A plain monomorphic natural-number list (no annotations), convenient
/// for interpretation examples.
pub fn plain_natlist() -> (SigTable, Rc<InductiveSignature>) {
    let nil = CtorSig::plain("Nil", AnnotatedType::unit(), 0, &[])
        .with_measure(length_measure_nil());
    let cons = CtorSig::plain("Cons", AnnotatedType::nat(), 1, &[])
        .with_measure(length_measure_cons());
    let sig = Rc::new(InductiveSignature {
        name: "NatList".into(),
        elem_param: None,
        logic_params: vec![],
        measure_sort: Sort::Nat,
        ctors: vec![nil, cons],
    });
    let mut table = SigTable::new();
    table.insert(sig.clone());
    (table, sig)
}

/// Base type `List elem <q>` over the library quadratic list.
pub fn quad_list_ty(elem: AnnotatedType, q: R) -> BaseType {
    BaseType::Data(crate::typesys::types::DataType {
        sig: quad_list(),
        elem: Some(Box::new(elem)),
        theta: vec![q],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_sorts_check_out() {
        natlist_vector(3).1.check_operator_sorts().unwrap();
        natlist_dependent().1.check_operator_sorts().unwrap();
        quad_list().check_operator_sorts().unwrap();
        exp_list().check_operator_sorts().unwrap();
        log_tree().check_operator_sorts().unwrap();
        path_tree().check_operator_sorts().unwrap();
    }

    #[test]
    fn vector_shift_is_pairwise_sum() {
        // lhd((2,3)) = (5,3)
        let (_, sig) = natlist_vector(2);
        let shifted = sig
            .shift_children(1, &R::var("y"), &[R::Nat(2), R::Nat(3)])
            .unwrap();
        assert_eq!(shifted[0], vec![R::Nat(5), R::Nat(3)]);
    }

    #[test]
    fn ptree_routes_annotation_by_predicate() {
        // with p(x) true the left child keeps q and the right gets 0
        let sig = path_tree();
        let p_true = R::lambda(&["x"], Sort::Param("t".into()), R::Top);
        let shifted = sig
            .shift_children(1, &R::var("x0"), &[p_true, R::var("q")])
            .unwrap();
        assert_eq!(shifted[0][1], R::var("q"));
        assert_eq!(shifted[1][1], R::Nat(0));
    }

    #[test]
    fn intrinsic_potential_detection() {
        // the library types route everything through parameters
        assert!(!quad_list().has_intrinsic_potential());
        assert!(!exp_list().has_intrinsic_potential());
        // a QList-style hard-coded bump is intrinsic
        let params: Vec<(String, Sort)> = vec![];
        let cons = CtorSig::plain("QCons", AnnotatedType::tvar("a"), 1, &params)
            .with_elem_bumps(vec![R::Nat(1)]);
        let sig = InductiveSignature {
            name: "QList".into(),
            elem_param: Some("a".into()),
            logic_params: params,
            measure_sort: Sort::Nat,
            ctors: vec![cons],
        };
        assert!(sig.has_intrinsic_potential());
    }
}
