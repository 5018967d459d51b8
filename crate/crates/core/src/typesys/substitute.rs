//! Type substitution and multiplication. Substitution is restricted to
//! resource-annotated subset types; annotations from the substituted type
//! and the occurrence site are added together.

use super::types::{AnnotatedType, BaseType, DataType, Mult, RefinedType, Schema};
use crate::logic::{Refinement, Sort, NU};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypeOpError {
    #[error("type variables may only be instantiated with scalar types")]
    NonScalarSubstitution,
    #[error("cannot scale a nonzero potential by an infinite multiplicity")]
    InfiniteScaling,
    #[error("unsupported scaling: {0}")]
    UnsupportedScaling(String),
}

/// `[U/alpha]T` for a scalar `U = {B|psi}^phi`.
pub fn substitute_type(
    u: &AnnotatedType,
    alpha: &str,
    t: &AnnotatedType,
) -> Result<AnnotatedType, TypeOpError> {
    if !u.is_scalar() {
        return Err(TypeOpError::NonScalarSubstitution);
    }
    match &t.shape {
        RefinedType::Subset { base, refinement } => {
            let hit = subst_base(u, alpha, base)?;
            let (hb, hpsi) = hit.as_subset().expect("subst_base yields subset");
            let shape = RefinedType::Subset {
                base: hb.clone(),
                refinement: Refinement::and(refinement.clone(), hpsi.clone()).normalize(),
            };
            Ok(AnnotatedType {
                shape,
                potential: Refinement::add(t.potential.clone(), hit.potential.clone())
                    .normalize(),
            })
        }
        RefinedType::Arrow { param, dom, cod, mult } => Ok(AnnotatedType {
            shape: RefinedType::Arrow {
                param: param.clone(),
                dom: Box::new(substitute_type(u, alpha, dom)?),
                cod: Box::new(substitute_type(u, alpha, cod)?),
                mult: *mult,
            },
            potential: t.potential.clone(),
        }),
    }
}

pub fn substitute_schema(
    u: &AnnotatedType,
    alpha: &str,
    s: &Schema,
) -> Result<Schema, TypeOpError> {
    if s.tvars.iter().any(|a| a == alpha) {
        return Ok(s.clone());
    }
    Ok(Schema { tvars: s.tvars.clone(), body: substitute_type(u, alpha, &s.body)? })
}

/// Substitution on a base type produces an annotated subset type: an
/// `alpha` occurrence contributes the substituted type's refinement and a
/// multiplicity-scaled copy of its potential.
fn subst_base(
    u: &AnnotatedType,
    alpha: &str,
    b: &BaseType,
) -> Result<AnnotatedType, TypeOpError> {
    match b {
        BaseType::Nat | BaseType::Bool | BaseType::Unit => Ok(AnnotatedType::base(b.clone())),
        BaseType::TVar { mult, name } if name == alpha => multiply_type(*mult, u),
        BaseType::TVar { .. } => Ok(AnnotatedType::base(b.clone())),
        BaseType::Prod(b1, b2) => {
            let h1 = subst_base(u, alpha, b1)?;
            let h2 = subst_base(u, alpha, b2)?;
            let (base1, psi1) = h1.as_subset().unwrap();
            let (base2, psi2) = h2.as_subset().unwrap();
            let nl = Refinement::projl(Refinement::nu());
            let nr = Refinement::projr(Refinement::nu());
            let refinement = Refinement::and(
                psi1.subst(NU, &nl),
                psi2.subst(NU, &nr),
            )
            .normalize();
            let potential = Refinement::add(
                h1.potential.subst(NU, &nl),
                h2.potential.subst(NU, &nr),
            )
            .normalize();
            Ok(AnnotatedType {
                shape: RefinedType::Subset {
                    base: BaseType::prod(base1.clone(), base2.clone()),
                    refinement,
                },
                potential,
            })
        }
        BaseType::Data(dt) => {
            let elem = match &dt.elem {
                Some(e) => Some(Box::new(substitute_type(u, alpha, e)?)),
                None => None,
            };
            Ok(AnnotatedType::base(BaseType::Data(DataType {
                sig: dt.sig.clone(),
                elem,
                theta: dt.theta.clone(),
            })))
        }
    }
}

/// Apply a refinement-level substitution to every annotation, refinement,
/// and datatype parameter embedded in a type.
pub fn subst_type_refs(
    map: &std::collections::BTreeMap<String, Refinement>,
    t: &AnnotatedType,
) -> AnnotatedType {
    let shape = match &t.shape {
        RefinedType::Subset { base, refinement } => RefinedType::Subset {
            base: subst_base_refs(map, base),
            refinement: refinement.subst_map(map).normalize(),
        },
        RefinedType::Arrow { param, dom, cod, mult } => {
            // the bound program variable shadows any mapping of that name
            let mut inner = map.clone();
            inner.remove(param);
            RefinedType::Arrow {
                param: param.clone(),
                dom: Box::new(subst_type_refs(map, dom)),
                cod: Box::new(subst_type_refs(&inner, cod)),
                mult: *mult,
            }
        }
    };
    AnnotatedType { shape, potential: t.potential.subst_map(map).normalize() }
}

fn subst_base_refs(
    map: &std::collections::BTreeMap<String, Refinement>,
    b: &BaseType,
) -> BaseType {
    match b {
        BaseType::Nat | BaseType::Bool | BaseType::Unit | BaseType::TVar { .. } => b.clone(),
        BaseType::Prod(a, c) => {
            BaseType::prod(subst_base_refs(map, a), subst_base_refs(map, c))
        }
        BaseType::Data(dt) => BaseType::Data(DataType {
            sig: dt.sig.clone(),
            elem: dt.elem.as_ref().map(|e| Box::new(subst_type_refs(map, e))),
            theta: dt.theta.iter().map(|t| t.subst_map(map).normalize()).collect(),
        }),
    }
}

/// `[r/x]T` on a single refinement variable.
pub fn subst_type_var(x: &str, r: &Refinement, t: &AnnotatedType) -> AnnotatedType {
    let mut map = std::collections::BTreeMap::new();
    map.insert(x.to_string(), r.clone());
    subst_type_refs(&map, t)
}

/// `m x T`: scale potentials and multiplicities throughout.
pub fn multiply_type(m: Mult, t: &AnnotatedType) -> Result<AnnotatedType, TypeOpError> {
    if m == Mult::Fin(1) {
        return Ok(t.clone());
    }
    let potential = scale_potential(m, &t.potential)?;
    let shape = match &t.shape {
        RefinedType::Subset { base, refinement } => RefinedType::Subset {
            base: multiply_base(m, base)?,
            refinement: refinement.clone(),
        },
        RefinedType::Arrow { param, dom, cod, mult } => RefinedType::Arrow {
            param: param.clone(),
            dom: dom.clone(),
            cod: cod.clone(),
            mult: m.mul(*mult),
        },
    };
    Ok(AnnotatedType { shape, potential })
}

fn multiply_base(m: Mult, b: &BaseType) -> Result<BaseType, TypeOpError> {
    match b {
        BaseType::Nat | BaseType::Bool | BaseType::Unit => Ok(b.clone()),
        BaseType::Prod(b1, b2) => Ok(BaseType::prod(
            multiply_base(m, b1)?,
            multiply_base(m, b2)?,
        )),
        BaseType::TVar { mult, name } => Ok(BaseType::TVar {
            mult: m.mul(*mult),
            name: name.clone(),
        }),
        BaseType::Data(dt) => {
            if dt.sig.has_intrinsic_potential() {
                if let Mult::Fin(k) = m {
                    if k != 1 {
                        return Err(TypeOpError::UnsupportedScaling(format!(
                            "datatype {} embeds fixed potential increments",
                            dt.sig.name
                        )));
                    }
                }
            }
            let elem = match &dt.elem {
                Some(e) => Some(Box::new(multiply_type(m, e)?)),
                None => None,
            };
            let theta = dt
                .theta
                .iter()
                .zip(dt.sig.theta_sorts())
                .map(|(t, s)| scale_annotation(m, t, &s))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(BaseType::Data(DataType { sig: dt.sig.clone(), elem, theta }))
        }
    }
}

fn scale_potential(m: Mult, phi: &Refinement) -> Result<Refinement, TypeOpError> {
    match m {
        Mult::Fin(k) => Ok(Refinement::times(k, phi.clone()).normalize()),
        Mult::Inf => {
            if phi.is_zero() {
                Ok(Refinement::Nat(0))
            } else {
                Err(TypeOpError::InfiniteScaling)
            }
        }
    }
}

/// Scale an annotation parameter by its sort: numeric parameters scale
/// directly, function-sorted ones pointwise, boolean ones are untouched
/// (they carry no potential).
fn scale_annotation(m: Mult, t: &Refinement, sort: &Sort) -> Result<Refinement, TypeOpError> {
    match sort {
        Sort::Nat => scale_potential(m, t),
        Sort::Bool | Sort::Unit | Sort::Param(_) => Ok(t.clone()),
        Sort::Arrow(dom, _) => {
            let k = match m {
                Mult::Fin(k) => k,
                Mult::Inf => return Err(TypeOpError::InfiniteScaling),
            };
            let p = "sc#a";
            let body = Refinement::times(
                k,
                Refinement::app(t.clone(), vec![Refinement::var(p)]),
            );
            Ok(Refinement::abs(vec![(p.to_string(), (**dom).clone())], body).normalize())
        }
        Sort::Prod(..) => Err(TypeOpError::UnsupportedScaling(
            "product-sorted annotation".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Refinement as R;

    #[test]
    fn identity_on_types_without_the_variable() {
        let u = AnnotatedType::nat().with_potential(R::Nat(1));
        let t = AnnotatedType::bool_();
        assert_eq!(substitute_type(&u, "a", &t).unwrap(), t);
    }

    #[test]
    fn potentials_add_on_hit() {
        // [nat^1/a] (a^1) = nat^2: annotations are added together
        let u = AnnotatedType::nat().with_potential(R::Nat(1));
        let t = AnnotatedType::tvar("a").with_potential(R::Nat(1));
        let out = substitute_type(&u, "a", &t).unwrap();
        assert_eq!(out.potential, R::Nat(2));
        assert!(matches!(
            out.as_subset().unwrap().0,
            BaseType::Nat
        ));
    }

    #[test]
    fn multiplicity_scales_substituted_potential() {
        // [nat^phi/a](2*a) = nat^{2 x phi}
        let u = AnnotatedType::nat().with_potential(R::var("phi"));
        let t = AnnotatedType::base(BaseType::TVar { mult: Mult::Fin(2), name: "a".into() });
        let out = substitute_type(&u, "a", &t).unwrap();
        assert_eq!(out.potential, R::add(R::var("phi"), R::var("phi")));
    }

    #[test]
    fn multiply_scales_annotation_and_arrows() {
        // 2 x nat^3 = nat^6
        let t = AnnotatedType::nat().with_potential(R::Nat(3));
        assert_eq!(
            multiply_type(Mult::Fin(2), &t).unwrap().potential,
            R::Nat(6)
        );
        // 1 x T = T
        assert_eq!(multiply_type(Mult::Fin(1), &t).unwrap(), t);
        // 3 x (x:Tx ->/2 T) multiplies the arrow multiplicity
        let arrow = AnnotatedType {
            shape: RefinedType::Arrow {
                param: "x".into(),
                dom: Box::new(AnnotatedType::nat()),
                cod: Box::new(AnnotatedType::nat()),
                mult: Mult::Fin(2),
            },
            potential: R::Nat(0),
        };
        let out = multiply_type(Mult::Fin(3), &arrow).unwrap();
        match out.shape {
            RefinedType::Arrow { mult, .. } => assert_eq!(mult, Mult::Fin(6)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn infinite_multiplicity_absorbs_zero_only() {
        let zero = AnnotatedType::nat();
        assert!(multiply_type(Mult::Inf, &zero).is_ok());
        let one = AnnotatedType::nat().with_potential(R::Nat(1));
        assert_eq!(
            multiply_type(Mult::Inf, &one).unwrap_err(),
            TypeOpError::InfiniteScaling
        );
    }

    #[test]
    fn refinements_conjoin_on_subset_hit() {
        // [{nat | _v > 0}/a] {a | _v = 3} has both refinements
        let u = AnnotatedType::subset(BaseType::Nat, R::gt(R::nu(), R::Nat(0)));
        let t = AnnotatedType::subset(BaseType::tvar("a"), R::eq(R::nu(), R::Nat(3)));
        let out = substitute_type(&u, "a", &t).unwrap();
        let (_, psi) = out.as_subset().unwrap();
        assert_eq!(
            *psi,
            R::and(R::eq(R::nu(), R::Nat(3)), R::gt(R::nu(), R::Nat(0)))
        );
    }
}
