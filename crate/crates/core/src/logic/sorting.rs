//! The sorting judgment: assigns sorts to refinement terms under a context.

use super::refinement::Refinement;
use super::sort::Sort;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SortError {
    #[error("unbound variable `{0}` in refinement")]
    UnboundVariable(String),
    #[error("sort mismatch in `{term}`: expected {expected}, found {found}")]
    Mismatch { term: String, expected: String, found: String },
    #[error("quantification requires a scalar sort, found {0}")]
    NotScalar(String),
    #[error("cannot apply non-function of sort {0}")]
    NotAFunction(String),
    #[error("projection from non-product sort {0}")]
    NotAProduct(String),
}

/// Context binding refinement-level variables to their sorts. Program
/// variables enter through the base-type-to-sort reflection performed by
/// the type layer.
#[derive(Debug, Clone, Default)]
pub struct SortCtx {
    vars: BTreeMap<String, Sort>,
}

impl SortCtx {
    pub fn new() -> SortCtx {
        SortCtx::default()
    }

    pub fn bind(&self, name: impl Into<String>, sort: Sort) -> SortCtx {
        let mut next = self.clone();
        next.vars.insert(name.into(), sort);
        next
    }

    pub fn bind_mut(&mut self, name: impl Into<String>, sort: Sort) {
        self.vars.insert(name.into(), sort);
    }

    pub fn lookup(&self, name: &str) -> Option<&Sort> {
        self.vars.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Sort)> {
        self.vars.iter()
    }
}

fn expect(term: &Refinement, expected: &Sort, found: &Sort) -> Result<(), SortError> {
    if expected == found {
        Ok(())
    } else {
        Err(SortError::Mismatch {
            term: term.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

/// Comparisons are admitted on naturals and on uninterpreted element sorts,
/// which the solver embeds into the naturals as an ordered domain.
fn orderable(s: &Sort) -> bool {
    matches!(s, Sort::Nat | Sort::Param(_))
}

/// Compute the sort of a refinement term.
pub fn sort_of(ctx: &SortCtx, r: &Refinement) -> Result<Sort, SortError> {
    use Refinement as R;
    match r {
        R::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| SortError::UnboundVariable(x.clone())),
        R::Nat(_) => Ok(Sort::Nat),
        R::Star => Ok(Sort::Unit),
        R::Top => Ok(Sort::Bool),
        R::Not(a) => {
            let s = sort_of(ctx, a)?;
            expect(r, &Sort::Bool, &s)?;
            Ok(Sort::Bool)
        }
        R::And(a, b) => {
            expect(r, &Sort::Bool, &sort_of(ctx, a)?)?;
            expect(r, &Sort::Bool, &sort_of(ctx, b)?)?;
            Ok(Sort::Bool)
        }
        R::Le(a, b) | R::Lt(a, b) => {
            let sa = sort_of(ctx, a)?;
            let sb = sort_of(ctx, b)?;
            if !orderable(&sa) {
                return Err(SortError::Mismatch {
                    term: r.to_string(),
                    expected: "Nat".into(),
                    found: sa.to_string(),
                });
            }
            expect(r, &sa, &sb)?;
            Ok(Sort::Bool)
        }
        R::Eq(a, b) => {
            let sa = sort_of(ctx, a)?;
            let sb = sort_of(ctx, b)?;
            expect(r, &sa, &sb)?;
            if !sa.is_scalar() {
                return Err(SortError::NotScalar(sa.to_string()));
            }
            Ok(Sort::Bool)
        }
        R::Add(a, b) | R::Sub(a, b) => {
            expect(r, &Sort::Nat, &sort_of(ctx, a)?)?;
            expect(r, &Sort::Nat, &sort_of(ctx, b)?)?;
            Ok(Sort::Nat)
        }
        R::Ite(c, t, e) => {
            expect(r, &Sort::Bool, &sort_of(ctx, c)?)?;
            let st = sort_of(ctx, t)?;
            let se = sort_of(ctx, e)?;
            expect(r, &st, &se)?;
            Ok(st)
        }
        R::Forall(x, s, body) => {
            if !s.is_scalar() {
                return Err(SortError::NotScalar(s.to_string()));
            }
            let inner = ctx.bind(x.clone(), s.clone());
            expect(r, &Sort::Bool, &sort_of(&inner, body)?)?;
            Ok(Sort::Bool)
        }
        R::Abs(params, body) => {
            let mut inner = ctx.clone();
            for (p, s) in params {
                inner.bind_mut(p.clone(), s.clone());
            }
            let res = sort_of(&inner, body)?;
            let doms: Vec<Sort> = params.iter().map(|(_, s)| s.clone()).collect();
            Ok(Sort::fun(&doms, res))
        }
        R::App(f, args) => {
            let sf = sort_of(ctx, f)?;
            let Sort::Arrow(dom, res) = sf else {
                return Err(SortError::NotAFunction(sf.to_string()));
            };
            let arg_sorts = args
                .iter()
                .map(|a| sort_of(ctx, a))
                .collect::<Result<Vec<_>, _>>()?;
            let supplied = Sort::tuple(&arg_sorts);
            expect(r, &dom, &supplied)?;
            Ok(*res)
        }
        R::Pair(a, b) => Ok(Sort::prod(sort_of(ctx, a)?, sort_of(ctx, b)?)),
        R::ProjL(a) => match sort_of(ctx, a)? {
            Sort::Prod(l, _) => Ok(*l),
            s => Err(SortError::NotAProduct(s.to_string())),
        },
        R::ProjR(a) => match sort_of(ctx, a)? {
            Sort::Prod(_, r) => Ok(*r),
            s => Err(SortError::NotAProduct(s.to_string())),
        },
        R::Unknown(u) => Ok(u.sort().clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::refinement::Refinement as R;

    #[test]
    fn sorts_successor_under_nu() {
        let ctx = SortCtx::new().bind(crate::logic::NU, Sort::Nat);
        let t = R::add(R::nu(), R::Nat(1));
        assert_eq!(sort_of(&ctx, &t).unwrap(), Sort::Nat);
    }

    #[test]
    fn sorts_comparison_abstraction() {
        // \(a:Nat). a <= 3  :  Nat => Bool
        let t = R::lambda(&["a"], Sort::Nat, R::le(R::var("a"), R::Nat(3)));
        assert_eq!(
            sort_of(&SortCtx::new(), &t).unwrap(),
            Sort::arrow(Sort::Nat, Sort::Bool)
        );
    }

    #[test]
    fn sorts_dependent_annotation() {
        // \(x1:Nat, x2:Nat). ite(x1 > x2, 1, 0)  :  Nat*Nat => Nat
        let t = R::lambda(
            &["x1", "x2"],
            Sort::Nat,
            R::ite(R::gt(R::var("x1"), R::var("x2")), R::Nat(1), R::Nat(0)),
        );
        assert_eq!(
            sort_of(&SortCtx::new(), &t).unwrap(),
            Sort::arrow(Sort::prod(Sort::Nat, Sort::Nat), Sort::Nat)
        );
    }

    #[test]
    fn rejects_sum_of_booleans() {
        let t = R::add(R::Top, R::Top);
        assert!(matches!(
            sort_of(&SortCtx::new(), &t),
            Err(SortError::Mismatch { .. })
        ));
    }

    #[test]
    fn rejects_unbound_variable() {
        assert!(matches!(
            sort_of(&SortCtx::new(), &R::var("ghost")),
            Err(SortError::UnboundVariable(_))
        ));
    }

    #[test]
    fn rejects_forall_over_arrow() {
        let t = R::forall("f", Sort::arrow(Sort::Nat, Sort::Nat), R::Top);
        assert!(matches!(
            sort_of(&SortCtx::new(), &t),
            Err(SortError::NotScalar(_))
        ));
    }
}
