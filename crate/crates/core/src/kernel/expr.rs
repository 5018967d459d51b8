//! The core calculus: a-normal-form expressions and values.

use crate::span::Span;
use std::fmt;

/// Interpretable atoms: irreducible terms whose values reflect into the
/// refinement logic.
#[derive(Debug, Clone, PartialEq)]
pub enum SimpAtom {
    Var(String),
    Nat(u64),
    True,
    False,
    Triv,
    Pair(Box<SimpAtom>, Box<SimpAtom>),
    /// Constructor application `C(a0, <a1, .., am>)`: stored content plus
    /// child nodes of the same datatype.
    Ctor { name: String, content: Box<SimpAtom>, children: Vec<SimpAtom> },
}

/// Atoms: interpretable atoms plus abstractions and fixpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum Atom {
    Simp(SimpAtom),
    Abs { param: String, body: Box<Expr> },
    Fix { fun: String, param: String, body: Box<Expr> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchArm {
    pub ctor: String,
    pub content_var: String,
    pub child_vars: Vec<String>,
    pub body: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Atom(Atom),
    Cond { scrutinee: SimpAtom, then_branch: Box<Expr>, else_branch: Box<Expr> },
    /// Pair elimination `matp(a0, x1.x2.e1)`.
    MatP { scrutinee: SimpAtom, left: String, right: String, body: Box<Expr> },
    /// Datatype elimination with one arm per constructor.
    MatD { scrutinee: SimpAtom, arms: Vec<MatchArm> },
    App { func: Box<Atom>, arg: Box<Atom> },
    Let { bound: Box<Expr>, name: String, body: Box<Expr> },
    Impossible,
    /// Consume `cost` units of resource, then evaluate the body. Negative
    /// costs free resources.
    Tick { cost: i64, body: Box<Expr> },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Expr {
        Expr { kind, span }
    }

    pub fn synthetic(kind: ExprKind) -> Expr {
        Expr { kind, span: Span::synthetic() }
    }

    pub fn atom(a: Atom, span: Span) -> Expr {
        Expr::new(ExprKind::Atom(a), span)
    }

    pub fn simp(a: SimpAtom, span: Span) -> Expr {
        Expr::atom(Atom::Simp(a), span)
    }

    /// True when the expression is an atom that is a value.
    pub fn as_value(&self) -> Option<Value> {
        match &self.kind {
            ExprKind::Atom(a) => a.as_value(),
            _ => None,
        }
    }
}

/// Values of the core calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Nat(u64),
    True,
    False,
    Triv,
    Pair(Box<Value>, Box<Value>),
    Ctor { name: String, content: Box<Value>, children: Vec<Value> },
    Abs { param: String, body: Expr },
    Fix { fun: String, param: String, body: Expr },
}

impl SimpAtom {
    pub fn pair(a: SimpAtom, b: SimpAtom) -> SimpAtom {
        SimpAtom::Pair(Box::new(a), Box::new(b))
    }

    pub fn ctor(name: impl Into<String>, content: SimpAtom, children: Vec<SimpAtom>) -> SimpAtom {
        SimpAtom::Ctor { name: name.into(), content: Box::new(content), children }
    }

    pub fn as_value(&self) -> Option<Value> {
        match self {
            SimpAtom::Var(_) => None,
            SimpAtom::Nat(n) => Some(Value::Nat(*n)),
            SimpAtom::True => Some(Value::True),
            SimpAtom::False => Some(Value::False),
            SimpAtom::Triv => Some(Value::Triv),
            SimpAtom::Pair(a, b) => Some(Value::Pair(
                Box::new(a.as_value()?),
                Box::new(b.as_value()?),
            )),
            SimpAtom::Ctor { name, content, children } => Some(Value::Ctor {
                name: name.clone(),
                content: Box::new(content.as_value()?),
                children: children.iter().map(|c| c.as_value()).collect::<Option<Vec<_>>>()?,
            }),
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            SimpAtom::Var(x) => out.push(x.clone()),
            SimpAtom::Nat(_) | SimpAtom::True | SimpAtom::False | SimpAtom::Triv => {}
            SimpAtom::Pair(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            SimpAtom::Ctor { content, children, .. } => {
                content.free_vars(out);
                for c in children {
                    c.free_vars(out);
                }
            }
        }
    }
}

impl Atom {
    pub fn as_value(&self) -> Option<Value> {
        match self {
            Atom::Simp(a) => a.as_value(),
            Atom::Abs { param, body } => Some(Value::Abs {
                param: param.clone(),
                body: (**body).clone(),
            }),
            Atom::Fix { fun, param, body } => Some(Value::Fix {
                fun: fun.clone(),
                param: param.clone(),
                body: (**body).clone(),
            }),
        }
    }
}

impl Value {
    pub fn ctor(name: impl Into<String>, content: Value, children: Vec<Value>) -> Value {
        Value::Ctor { name: name.into(), content: Box::new(content), children }
    }

    /// Embed a value back into the atom grammar.
    pub fn to_atom(&self) -> Atom {
        match self {
            Value::Nat(n) => Atom::Simp(SimpAtom::Nat(*n)),
            Value::True => Atom::Simp(SimpAtom::True),
            Value::False => Atom::Simp(SimpAtom::False),
            Value::Triv => Atom::Simp(SimpAtom::Triv),
            Value::Pair(a, b) => match (a.to_atom(), b.to_atom()) {
                (Atom::Simp(sa), Atom::Simp(sb)) => Atom::Simp(SimpAtom::pair(sa, sb)),
                _ => panic!("pair of non-interpretable values"),
            },
            Value::Ctor { name, content, children } => {
                let Atom::Simp(c) = content.to_atom() else {
                    panic!("constructor content must be interpretable");
                };
                let kids = children
                    .iter()
                    .map(|k| match k.to_atom() {
                        Atom::Simp(s) => s,
                        _ => panic!("constructor child must be interpretable"),
                    })
                    .collect();
                Atom::Simp(SimpAtom::ctor(name.clone(), c, kids))
            }
            Value::Abs { param, body } => {
                Atom::Abs { param: param.clone(), body: Box::new(body.clone()) }
            }
            Value::Fix { fun, param, body } => Atom::Fix {
                fun: fun.clone(),
                param: param.clone(),
                body: Box::new(body.clone()),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// ANF well-formedness

/// Machine-checkable a-normal-form predicate: the grammar types above make
/// most of it structural; what remains is that `matd` arms do not repeat
/// constructors (coverage is checked against signatures by the type layer).
pub fn is_anf(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Atom(a) => atom_is_anf(a),
        ExprKind::Cond { then_branch, else_branch, .. } => {
            is_anf(then_branch) && is_anf(else_branch)
        }
        ExprKind::MatP { body, .. } => is_anf(body),
        ExprKind::MatD { arms, .. } => {
            let mut seen = std::collections::BTreeSet::new();
            arms.iter().all(|a| seen.insert(a.ctor.clone()) && is_anf(&a.body))
        }
        ExprKind::App { func, arg } => atom_is_anf(func) && atom_is_anf(arg),
        ExprKind::Let { bound, body, .. } => is_anf(bound) && is_anf(body),
        ExprKind::Impossible => true,
        ExprKind::Tick { body, .. } => is_anf(body),
    }
}

fn atom_is_anf(a: &Atom) -> bool {
    match a {
        Atom::Simp(_) => true,
        Atom::Abs { body, .. } | Atom::Fix { body, .. } => is_anf(body),
    }
}

// ---------------------------------------------------------------------------
// Pretty printing

impl fmt::Display for SimpAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpAtom::Var(x) => write!(f, "{x}"),
            SimpAtom::Nat(n) => write!(f, "{n}"),
            SimpAtom::True => write!(f, "true"),
            SimpAtom::False => write!(f, "false"),
            SimpAtom::Triv => write!(f, "()"),
            SimpAtom::Pair(a, b) => write!(f, "({a}, {b})"),
            SimpAtom::Ctor { name, content, children } => {
                write!(f, "{name}({content}")?;
                for c in children {
                    write!(f, ", {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Simp(a) => write!(f, "{a}"),
            Atom::Abs { param, body } => write!(f, "\\{param}. {body}"),
            Atom::Fix { fun, param, body } => write!(f, "fix {fun} {param}. {body}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Atom(a) => write!(f, "{a}"),
            ExprKind::Cond { scrutinee, then_branch, else_branch } => {
                write!(f, "if {scrutinee} then {then_branch} else {else_branch}")
            }
            ExprKind::MatP { scrutinee, left, right, body } => {
                write!(f, "matp {scrutinee} with ({left}, {right}) -> {body}")
            }
            ExprKind::MatD { scrutinee, arms } => {
                write!(f, "match {scrutinee} with")?;
                for arm in arms {
                    write!(f, " | {}({}", arm.ctor, arm.content_var)?;
                    for c in &arm.child_vars {
                        write!(f, ", {c}")?;
                    }
                    write!(f, ") -> {}", arm.body)?;
                }
                Ok(())
            }
            ExprKind::App { func, arg } => {
                match &**func {
                    Atom::Simp(a) => write!(f, "{a}")?,
                    other => write!(f, "({other})")?,
                }
                match &**arg {
                    Atom::Simp(a) => write!(f, " {a}"),
                    other => write!(f, " ({other})"),
                }
            }
            ExprKind::Let { bound, name, body } => {
                write!(f, "let {name} = {bound} in {body}")
            }
            ExprKind::Impossible => write!(f, "impossible"),
            ExprKind::Tick { cost, body } => write!(f, "tick {cost} ({body})"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_atom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_atom_round_trip() {
        let v = Value::ctor(
            "Cons",
            Value::Nat(1),
            vec![Value::ctor("Nil", Value::Triv, vec![])],
        );
        let a = v.to_atom();
        assert_eq!(a.as_value(), Some(v));
    }

    #[test]
    fn variables_are_not_values() {
        assert!(SimpAtom::Var("x".into()).as_value().is_none());
        let p = SimpAtom::pair(SimpAtom::Nat(1), SimpAtom::Var("x".into()));
        assert!(p.as_value().is_none());
    }

    #[test]
    fn duplicate_arms_fail_anf() {
        let arm = MatchArm {
            ctor: "Nil".into(),
            content_var: "u".into(),
            child_vars: vec![],
            body: Expr::synthetic(ExprKind::Atom(Atom::Simp(SimpAtom::Triv))),
        };
        let e = Expr::synthetic(ExprKind::MatD {
            scrutinee: SimpAtom::Var("xs".into()),
            arms: vec![arm.clone(), arm],
        });
        assert!(!is_anf(&e));
    }
}
