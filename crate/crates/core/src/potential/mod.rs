//! Inductive and abstract potential machinery: datatype signatures with
//! annotation parameters, shift and extraction operators, the inductive
//! potential function over values, and closed forms for the library types.

pub mod builtin;
pub mod closed_form;
pub mod phi;
pub mod signature;
pub mod test_values;

pub use closed_form::{closed_form_potential, ClosedFormError, LibraryShape};
pub use phi::{child_instance, instantiate_content, potential_of_value, PhiError};
pub use signature::{child_slot, CtorSig, InductiveSignature, SigTable, SignatureError, CONTENT_SLOT};

/// Binomial coefficient, exact in `u64` for the small instances used here.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Independent oracle for numeric-vector potential: `sum_i q_i * C(n, i)`.
pub fn binomial_potential(q: &[u64], n: u64) -> u64 {
    q.iter()
        .enumerate()
        .map(|(i, qi)| qi * binomial(n, i as u64 + 1))
        .sum()
}

/// Independent oracle for dependent potential with a pair of annotation
/// functions: `sum_j t1(v_j) + sum_{j1<j2} t2(v_{j1}, v_{j2})`.
pub fn dependent_double_sum(
    t1: impl Fn(u64) -> u64,
    t2: impl Fn(u64, u64) -> u64,
    elems: &[u64],
) -> u64 {
    let mut total = 0;
    for (i, &a) in elems.iter().enumerate() {
        total += t1(a);
        for &b in &elems[i + 1..] {
            total += t2(a, b);
        }
    }
    total
}

#[cfg(test)]
mod prop_tests {
    use super::builtin::*;
    use super::test_values::*;
    use super::*;
    use crate::logic::{Refinement as R, Sort};
    use crate::typesys::types::{AnnotatedType, DataType};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vector_potential_equals_binomial_sum() {
        // shift-based inductive potential vs the closed binomial form
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let k = rng.gen_range(1..=3usize);
            let (table, sig) = natlist_vector(k);
            let q: Vec<u64> = (0..k).map(|_| rng.gen_range(0..=5)).collect();
            let n = rng.gen_range(0..=10usize);
            let elems: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
            let ty = AnnotatedType::data(DataType {
                sig: sig.clone(),
                elem: None,
                theta: q.iter().map(|v| R::Nat(*v)).collect(),
            });
            let inductive = potential_of_value(&table, &vec_list(&elems), &ty).unwrap();
            assert_eq!(inductive, binomial_potential(&q, n as u64));
        }
    }

    #[test]
    fn dependent_potential_equals_double_sum() {
        // random ground annotations from a small conditional-linear grammar
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..60 {
            let (table, sig) = natlist_dependent();
            let c1 = rng.gen_range(0..=2u64);
            let c2 = rng.gen_range(0..=2u64);
            let flip = rng.gen_bool(0.5);
            // theta1 = \x. c1 * x-ish; keep linear: c1 + x or constant
            let use_x = rng.gen_bool(0.5);
            let t1_ref = if use_x {
                R::lambda(&["x"], Sort::Nat, R::add(R::var("x"), R::Nat(c1)))
            } else {
                R::lambda(&["x"], Sort::Nat, R::Nat(c1))
            };
            let t2_ref = R::lambda(
                &["x1", "x2"],
                Sort::Nat,
                if flip {
                    R::ite(R::gt(R::var("x1"), R::var("x2")), R::Nat(c2), R::Nat(0))
                } else {
                    R::Nat(c2)
                },
            );
            let n = rng.gen_range(0..=8usize);
            let elems: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
            let ty = AnnotatedType::data(DataType {
                sig: sig.clone(),
                elem: None,
                theta: vec![t1_ref, t2_ref],
            });
            let inductive = potential_of_value(&table, &nat_list(&elems), &ty).unwrap();
            let t1 = |x: u64| if use_x { x + c1 } else { c1 };
            let t2 = |a: u64, b: u64| if flip { if a > b { c2 } else { 0 } } else { c2 };
            assert_eq!(inductive, dependent_double_sum(t1, t2, &elems));
        }
    }

    #[test]
    fn phi_nonnegative_and_zero_at_nil() {
        let (table, sig) = natlist_vector(2);
        let ty = AnnotatedType::data(DataType {
            sig,
            elem: None,
            theta: vec![R::Nat(3), R::Nat(1)],
        });
        assert_eq!(potential_of_value(&table, &vec_list(&[]), &ty).unwrap(), 0);
    }

    #[test]
    fn elist_inductive_matches_closed_form() {
        let mut table = SigTable::new();
        table.insert(exp_list());
        let sig = table.datatype("EList").unwrap().clone();
        let ty = AnnotatedType::data(DataType {
            sig,
            elem: Some(Box::new(AnnotatedType::nat())),
            theta: vec![R::Nat(2)],
        });
        let v = elist(&[4, 5, 6]);
        let inductive = potential_of_value(&table, &v, &ty).unwrap();
        assert_eq!(inductive, 14);
        assert_eq!(
            closed_form_potential(LibraryShape::ExpList, &v, &[R::Nat(2)]).unwrap(),
            inductive
        );
    }

    #[test]
    fn ltree_inductive_matches_closed_form_when_balanced() {
        let mut table = SigTable::new();
        table.insert(log_tree());
        let sig = table.datatype("LTree").unwrap().clone();
        let ty = AnnotatedType::data(DataType {
            sig,
            elem: Some(Box::new(AnnotatedType::nat())),
            theta: vec![R::Nat(1)],
        });
        let v = balanced_ltree(&[1, 2, 3, 4]);
        let inductive = potential_of_value(&table, &v, &ty).unwrap();
        assert_eq!(inductive, 8);
        assert_eq!(
            closed_form_potential(LibraryShape::LogTree, &v, &[R::Nat(1)]).unwrap(),
            inductive
        );
    }

    #[test]
    fn quad_list_inductive_matches_pairwise_sum() {
        let mut table = SigTable::new();
        table.insert(quad_list());
        let sig = table.datatype("List").unwrap().clone();
        let q = R::lambda(
            &["x1", "x2"],
            Sort::Nat,
            R::ite(R::gt(R::var("x1"), R::var("x2")), R::Nat(1), R::Nat(0)),
        );
        let ty = AnnotatedType::data(DataType {
            sig,
            elem: Some(Box::new(AnnotatedType::nat())),
            theta: vec![q.clone()],
        });
        let v = lib_list(&[2, 1]);
        let inductive = potential_of_value(&table, &v, &ty).unwrap();
        assert_eq!(inductive, 1);
        assert_eq!(
            closed_form_potential(LibraryShape::QuadList, &v, &[q]).unwrap(),
            inductive
        );
    }

    #[test]
    fn ptree_inductive_matches_path_length() {
        let mut table = SigTable::new();
        table.insert(path_tree());
        let sig = table.datatype("PTree").unwrap().clone();
        // p = \x. 3 < x routes toward values greater than 3
        let p = R::lambda(&["x"], Sort::Nat, R::lt(R::Nat(3), R::var("x")));
        let ty = AnnotatedType::data(DataType {
            sig,
            elem: Some(Box::new(AnnotatedType::nat())),
            theta: vec![p.clone(), R::Nat(1)],
        });
        let v = ptree_from(&[5, 2, 8, 1]);
        let inductive = potential_of_value(&table, &v, &ty).unwrap();
        let closed =
            closed_form_potential(LibraryShape::PathTree, &v, &[p, R::Nat(1)]).unwrap();
        assert_eq!(inductive, closed);
    }
}
