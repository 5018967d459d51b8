//! Random closed expressions for the randomized semantics suite. The
//! grammar avoids unbounded recursion so every generated term terminates.

use super::expr::{Atom, Expr, ExprKind, MatchArm, SimpAtom};
use rand::Rng;

/// Generate a closed expression of bounded depth. Ticks may be negative;
/// generated programs never get stuck.
pub fn closed_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    gen_expr(rng, depth, &mut Vec::new())
}

fn gen_expr(rng: &mut impl Rng, depth: u32, nat_scope: &mut Vec<String>) -> Expr {
    if depth == 0 {
        return Expr::synthetic(ExprKind::Atom(Atom::Simp(gen_leaf(rng, nat_scope))));
    }
    match rng.gen_range(0..8) {
        0 => Expr::synthetic(ExprKind::Tick {
            cost: rng.gen_range(-3..=3),
            body: Box::new(gen_expr(rng, depth - 1, nat_scope)),
        }),
        1 => Expr::synthetic(ExprKind::Cond {
            scrutinee: if rng.gen() { SimpAtom::True } else { SimpAtom::False },
            then_branch: Box::new(gen_expr(rng, depth - 1, nat_scope)),
            else_branch: Box::new(gen_expr(rng, depth - 1, nat_scope)),
        }),
        2 => {
            // let of a nested computation
            let name = format!("v{}", nat_scope.len());
            let bound = gen_nat_expr(rng, depth - 1, nat_scope);
            nat_scope.push(name.clone());
            let body = gen_expr(rng, depth - 1, nat_scope);
            nat_scope.pop();
            Expr::synthetic(ExprKind::Let { bound: Box::new(bound), name, body: Box::new(body) })
        }
        3 => {
            let l = format!("p{}l", nat_scope.len());
            let r = format!("p{}r", nat_scope.len());
            let scrutinee = SimpAtom::pair(gen_leaf(rng, nat_scope), gen_leaf(rng, nat_scope));
            nat_scope.push(l.clone());
            nat_scope.push(r.clone());
            let body = gen_expr(rng, depth - 1, nat_scope);
            nat_scope.pop();
            nat_scope.pop();
            Expr::synthetic(ExprKind::MatP {
                scrutinee,
                left: l,
                right: r,
                body: Box::new(body),
            })
        }
        4 => {
            // single-application beta redex
            let param = format!("a{}", nat_scope.len());
            nat_scope.push(param.clone());
            let body = gen_expr(rng, depth - 1, nat_scope);
            nat_scope.pop();
            Expr::synthetic(ExprKind::App {
                func: Box::new(Atom::Abs { param, body: Box::new(body) }),
                arg: Box::new(Atom::Simp(gen_leaf(rng, nat_scope))),
            })
        }
        5 => {
            // match on a small inline list value
            let n = rng.gen_range(0..3u32);
            let mut list = SimpAtom::ctor("Nil", SimpAtom::Triv, vec![]);
            for _ in 0..n {
                list = SimpAtom::ctor(
                    "Cons",
                    SimpAtom::Nat(rng.gen_range(0..5)),
                    vec![list],
                );
            }
            let hd = format!("h{}", nat_scope.len());
            let tl = format!("t{}", nat_scope.len());
            let nil_body = gen_expr(rng, depth - 1, nat_scope);
            nat_scope.push(hd.clone());
            let cons_body = gen_expr(rng, depth - 1, nat_scope);
            nat_scope.pop();
            Expr::synthetic(ExprKind::MatD {
                scrutinee: list,
                arms: vec![
                    MatchArm {
                        ctor: "Nil".into(),
                        content_var: "u".into(),
                        child_vars: vec![],
                        body: nil_body,
                    },
                    MatchArm {
                        ctor: "Cons".into(),
                        content_var: hd,
                        child_vars: vec![tl],
                        body: cons_body,
                    },
                ],
            })
        }
        _ => Expr::synthetic(ExprKind::Atom(Atom::Simp(gen_leaf(rng, nat_scope)))),
    }
}

/// An expression guaranteed to evaluate to an interpretable value, used in
/// let bindings so the body may reference the bound variable.
fn gen_nat_expr(rng: &mut impl Rng, depth: u32, nat_scope: &mut Vec<String>) -> Expr {
    if depth == 0 || rng.gen_bool(0.5) {
        return Expr::synthetic(ExprKind::Atom(Atom::Simp(gen_leaf(rng, nat_scope))));
    }
    Expr::synthetic(ExprKind::Tick {
        cost: rng.gen_range(-2..=2),
        body: Box::new(gen_nat_expr(rng, depth - 1, nat_scope)),
    })
}

fn gen_leaf(rng: &mut impl Rng, nat_scope: &[String]) -> SimpAtom {
    if !nat_scope.is_empty() && rng.gen_bool(0.4) {
        let i = rng.gen_range(0..nat_scope.len());
        return SimpAtom::Var(nat_scope[i].clone());
    }
    match rng.gen_range(0..4) {
        0 => SimpAtom::Nat(rng.gen_range(0..8)),
        1 => SimpAtom::True,
        2 => SimpAtom::Triv,
        _ => SimpAtom::pair(SimpAtom::Nat(rng.gen_range(0..4)), SimpAtom::Triv),
    }
}
