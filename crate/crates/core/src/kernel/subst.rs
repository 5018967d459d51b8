//! Capture-avoiding substitution of closed values into expressions.

use super::expr::{Atom, Expr, ExprKind, MatchArm, SimpAtom, Value};

/// `[v/x]e`. The value is closed, so no renaming is ever needed; binders
/// shadowing `x` stop the substitution.
pub fn substitute_value(v: &Value, x: &str, e: &Expr) -> Expr {
    Expr::new(subst_kind(v, x, &e.kind), e.span)
}

fn subst_kind(v: &Value, x: &str, kind: &ExprKind) -> ExprKind {
    match kind {
        ExprKind::Atom(a) => ExprKind::Atom(subst_atom(v, x, a)),
        ExprKind::Cond { scrutinee, then_branch, else_branch } => ExprKind::Cond {
            scrutinee: subst_simp(v, x, scrutinee),
            then_branch: Box::new(substitute_value(v, x, then_branch)),
            else_branch: Box::new(substitute_value(v, x, else_branch)),
        },
        ExprKind::MatP { scrutinee, left, right, body } => {
            let body = if left == x || right == x {
                (**body).clone()
            } else {
                substitute_value(v, x, body)
            };
            ExprKind::MatP {
                scrutinee: subst_simp(v, x, scrutinee),
                left: left.clone(),
                right: right.clone(),
                body: Box::new(body),
            }
        }
        ExprKind::MatD { scrutinee, arms } => ExprKind::MatD {
            scrutinee: subst_simp(v, x, scrutinee),
            arms: arms
                .iter()
                .map(|arm| {
                    let shadowed =
                        arm.content_var == x || arm.child_vars.iter().any(|c| c == x);
                    MatchArm {
                        ctor: arm.ctor.clone(),
                        content_var: arm.content_var.clone(),
                        child_vars: arm.child_vars.clone(),
                        body: if shadowed {
                            arm.body.clone()
                        } else {
                            substitute_value(v, x, &arm.body)
                        },
                    }
                })
                .collect(),
        },
        ExprKind::App { func, arg } => ExprKind::App {
            func: Box::new(subst_atom(v, x, func)),
            arg: Box::new(subst_atom(v, x, arg)),
        },
        ExprKind::Let { bound, name, body } => ExprKind::Let {
            bound: Box::new(substitute_value(v, x, bound)),
            name: name.clone(),
            body: if name == x {
                body.clone()
            } else {
                Box::new(substitute_value(v, x, body))
            },
        },
        ExprKind::Impossible => ExprKind::Impossible,
        ExprKind::Tick { cost, body } => ExprKind::Tick {
            cost: *cost,
            body: Box::new(substitute_value(v, x, body)),
        },
    }
}

fn subst_atom(v: &Value, x: &str, a: &Atom) -> Atom {
    match a {
        Atom::Simp(s) => match subst_simp_or_value(v, x, s) {
            Ok(s) => Atom::Simp(s),
            Err(atom) => atom,
        },
        Atom::Abs { param, body } => Atom::Abs {
            param: param.clone(),
            body: if param == x {
                body.clone()
            } else {
                Box::new(substitute_value(v, x, body))
            },
        },
        Atom::Fix { fun, param, body } => Atom::Fix {
            fun: fun.clone(),
            param: param.clone(),
            body: if fun == x || param == x {
                body.clone()
            } else {
                Box::new(substitute_value(v, x, body))
            },
        },
    }
}

/// Substituting into a simple atom can produce a non-simple atom when a
/// variable is replaced by an abstraction; that is only legal at the top
/// of an atom position, so nested positions panic (values of function
/// type cannot be constructor contents in well-typed programs, and the
/// checker rejects them before evaluation).
fn subst_simp_or_value(v: &Value, x: &str, s: &SimpAtom) -> Result<SimpAtom, Atom> {
    match s {
        SimpAtom::Var(y) if y == x => match v.to_atom() {
            Atom::Simp(sa) => Ok(sa),
            other => Err(other),
        },
        _ => Ok(subst_simp(v, x, s)),
    }
}

fn subst_simp(v: &Value, x: &str, s: &SimpAtom) -> SimpAtom {
    match s {
        SimpAtom::Var(y) if y == x => match v.to_atom() {
            Atom::Simp(sa) => sa,
            _ => panic!("function value substituted into interpretable position"),
        },
        SimpAtom::Var(_)
        | SimpAtom::Nat(_)
        | SimpAtom::True
        | SimpAtom::False
        | SimpAtom::Triv => s.clone(),
        SimpAtom::Pair(a, b) => SimpAtom::pair(subst_simp(v, x, a), subst_simp(v, x, b)),
        SimpAtom::Ctor { name, content, children } => SimpAtom::ctor(
            name.clone(),
            subst_simp(v, x, content),
            children.iter().map(|c| subst_simp(v, x, c)).collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::Span;

    fn var(x: &str) -> Expr {
        Expr::synthetic(ExprKind::Atom(Atom::Simp(SimpAtom::Var(x.into()))))
    }

    #[test]
    fn substitutes_variable() {
        // [5/x] x => 5
        let e = substitute_value(&Value::Nat(5), "x", &var("x"));
        assert_eq!(e.as_value(), Some(Value::Nat(5)));
    }

    #[test]
    fn substitutes_under_binder() {
        // [5/x] \y. x  =>  \y. 5
        let lam = Expr::synthetic(ExprKind::Atom(Atom::Abs {
            param: "y".into(),
            body: Box::new(var("x")),
        }));
        let e = substitute_value(&Value::Nat(5), "x", &lam);
        match e.kind {
            ExprKind::Atom(Atom::Abs { body, .. }) => {
                assert_eq!(body.as_value(), Some(Value::Nat(5)));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn shadowing_stops_substitution() {
        // [5/x] \x. x  is unchanged
        let lam = Expr::synthetic(ExprKind::Atom(Atom::Abs {
            param: "x".into(),
            body: Box::new(var("x")),
        }));
        let e = substitute_value(&Value::Nat(5), "x", &lam);
        assert_eq!(e, lam);
    }

    #[test]
    fn fix_unrolls_via_substitution() {
        // applying fix f x. f unrolls one level: [fix.., v / f, x] f = the fix
        let body = var("f");
        let fix = Expr::new(
            ExprKind::Atom(Atom::Fix {
                fun: "f".into(),
                param: "x".into(),
                body: Box::new(body),
            }),
            Span::synthetic(),
        );
        let app = Expr::synthetic(ExprKind::App {
            func: Box::new(match &fix.kind {
                ExprKind::Atom(a) => a.clone(),
                _ => unreachable!(),
            }),
            arg: Box::new(Atom::Simp(SimpAtom::Nat(0))),
        });
        let out = crate::kernel::eval::step(&crate::kernel::eval::MachineState::new(app, 0))
            .unwrap();
        match out {
            crate::kernel::eval::StepOutcome::Next(s) => {
                assert_eq!(s.expr.as_value(), fix.as_value());
            }
            other => panic!("unexpected: {other:?}"),
        }
    }
}
