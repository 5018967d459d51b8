//! Set-based denotational evaluation of refinements. Universal
//! quantification over scalar sorts is evaluated by enumeration of a
//! bounded subdomain; the validity checker treats the bound explicitly.

use super::refinement::{Refinement, UnknownSym};
use super::sort::Sort;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Default bound of the enumerable subdomain for naturals and element sorts.
pub const DEFAULT_DOMAIN_BOUND: u64 = 16;

/// Hard cap on points visited by one quantifier enumeration.
const ENUM_CAP: u64 = 2_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound variable `{0}` during evaluation")]
    UnboundVariable(String),
    #[error("no valuation supplied for unknown `{0}`")]
    UnboundSymbol(String),
    #[error("quantified domain too large to enumerate")]
    DomainTooLarge,
    #[error("ill-sorted term reached evaluation: {0}")]
    IllSorted(String),
}

/// A denotation: an element of the set a sort denotes.
#[derive(Debug, Clone, PartialEq)]
pub enum Den {
    Bool(bool),
    Nat(u64),
    Star,
    Pair(Box<Den>, Box<Den>),
    Fun(Closure),
}

/// Defunctionalized function value.
#[derive(Debug, Clone, PartialEq)]
pub struct Closure {
    pub params: Vec<(String, Sort)>,
    pub body: Refinement,
    pub env: BTreeMap<String, Den>,
}

impl Den {
    pub fn as_bool(&self) -> Result<bool, EvalError> {
        match self {
            Den::Bool(b) => Ok(*b),
            d => Err(EvalError::IllSorted(format!("expected Bool, got {d}"))),
        }
    }

    pub fn as_nat(&self) -> Result<u64, EvalError> {
        match self {
            Den::Nat(n) => Ok(*n),
            d => Err(EvalError::IllSorted(format!("expected Nat, got {d}"))),
        }
    }

    fn proj(&self, left: bool) -> Result<Den, EvalError> {
        match self {
            Den::Pair(a, b) => Ok(if left { (**a).clone() } else { (**b).clone() }),
            d => Err(EvalError::IllSorted(format!("expected pair, got {d}"))),
        }
    }

    /// Right-nested tuple of denotations.
    pub fn tuple(mut items: Vec<Den>) -> Den {
        match items.len() {
            0 => Den::Star,
            1 => items.pop().unwrap(),
            _ => {
                let first = items.remove(0);
                Den::Pair(Box::new(first), Box::new(Den::tuple(items)))
            }
        }
    }
}

impl fmt::Display for Den {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Den::Bool(b) => write!(f, "{b}"),
            Den::Nat(n) => write!(f, "{n}"),
            Den::Star => write!(f, "unit"),
            Den::Pair(a, b) => write!(f, "({a}, {b})"),
            Den::Fun(_) => write!(f, "<fun>"),
        }
    }
}

/// An environment mapping variables (and unknown symbols) to denotations.
#[derive(Debug, Clone, Default)]
pub struct RefinementEnv {
    pub vars: BTreeMap<String, Den>,
    pub unknowns: BTreeMap<u32, Den>,
    pub bound: Option<u64>,
}

impl RefinementEnv {
    pub fn new() -> RefinementEnv {
        RefinementEnv { vars: BTreeMap::new(), unknowns: BTreeMap::new(), bound: None }
    }

    pub fn with_bound(bound: u64) -> RefinementEnv {
        RefinementEnv { bound: Some(bound), ..RefinementEnv::new() }
    }

    pub fn bind(mut self, name: impl Into<String>, d: Den) -> RefinementEnv {
        self.vars.insert(name.into(), d);
        self
    }

    pub fn bind_unknown(mut self, sym: &UnknownSym, d: Den) -> RefinementEnv {
        self.unknowns.insert(sym.id(), d);
        self
    }

    fn domain_bound(&self) -> u64 {
        self.bound.unwrap_or(DEFAULT_DOMAIN_BOUND)
    }
}

/// Enumerate the bounded subdomain of a scalar sort.
pub fn enumerate_sort(sort: &Sort, bound: u64) -> Result<Vec<Den>, EvalError> {
    match sort {
        Sort::Bool => Ok(vec![Den::Bool(false), Den::Bool(true)]),
        Sort::Unit => Ok(vec![Den::Star]),
        Sort::Nat | Sort::Param(_) => Ok((0..=bound).map(Den::Nat).collect()),
        Sort::Prod(a, b) => {
            let xs = enumerate_sort(a, bound)?;
            let ys = enumerate_sort(b, bound)?;
            if (xs.len() as u64).saturating_mul(ys.len() as u64) > ENUM_CAP {
                return Err(EvalError::DomainTooLarge);
            }
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(Den::Pair(Box::new(x.clone()), Box::new(y.clone())));
                }
            }
            Ok(out)
        }
        Sort::Arrow(..) => Err(EvalError::DomainTooLarge),
    }
}

/// Evaluate a refinement under an environment covering its free variables.
pub fn eval_refinement(env: &RefinementEnv, r: &Refinement) -> Result<Den, EvalError> {
    eval(env, &env.vars, r)
}

fn eval(
    root: &RefinementEnv,
    vars: &BTreeMap<String, Den>,
    r: &Refinement,
) -> Result<Den, EvalError> {
    use Refinement as R;
    match r {
        R::Var(x) => vars
            .get(x)
            .cloned()
            .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
        R::Nat(n) => Ok(Den::Nat(*n)),
        R::Star => Ok(Den::Star),
        R::Top => Ok(Den::Bool(true)),
        R::Not(a) => Ok(Den::Bool(!eval(root, vars, a)?.as_bool()?)),
        R::And(a, b) => {
            if !eval(root, vars, a)?.as_bool()? {
                return Ok(Den::Bool(false));
            }
            Ok(Den::Bool(eval(root, vars, b)?.as_bool()?))
        }
        R::Le(a, b) => Ok(Den::Bool(
            eval(root, vars, a)?.as_nat()? <= eval(root, vars, b)?.as_nat()?,
        )),
        R::Lt(a, b) => Ok(Den::Bool(
            eval(root, vars, a)?.as_nat()? < eval(root, vars, b)?.as_nat()?,
        )),
        R::Eq(a, b) => Ok(Den::Bool(eval(root, vars, a)? == eval(root, vars, b)?)),
        R::Add(a, b) => Ok(Den::Nat(
            eval(root, vars, a)?.as_nat()? + eval(root, vars, b)?.as_nat()?,
        )),
        R::Sub(a, b) => Ok(Den::Nat(
            eval(root, vars, a)?
                .as_nat()?
                .saturating_sub(eval(root, vars, b)?.as_nat()?),
        )),
        R::Ite(c, t, e) => {
            if eval(root, vars, c)?.as_bool()? {
                eval(root, vars, t)
            } else {
                eval(root, vars, e)
            }
        }
        R::Forall(x, sort, body) => {
            let domain = enumerate_sort(sort, root.domain_bound())?;
            for d in domain {
                let mut inner = vars.clone();
                inner.insert(x.clone(), d);
                if !eval(root, &inner, body)?.as_bool()? {
                    return Ok(Den::Bool(false));
                }
            }
            Ok(Den::Bool(true))
        }
        R::Abs(params, body) => Ok(Den::Fun(Closure {
            params: params.clone(),
            body: (**body).clone(),
            env: vars.clone(),
        })),
        R::App(f, args) => {
            let fd = eval(root, vars, f)?;
            let arg_dens = args
                .iter()
                .map(|a| eval(root, vars, a))
                .collect::<Result<Vec<_>, _>>()?;
            apply(root, fd, arg_dens)
        }
        R::Pair(a, b) => Ok(Den::Pair(
            Box::new(eval(root, vars, a)?),
            Box::new(eval(root, vars, b)?),
        )),
        R::ProjL(a) => eval(root, vars, a)?.proj(true),
        R::ProjR(a) => eval(root, vars, a)?.proj(false),
        R::Unknown(u) => root
            .unknowns
            .get(&u.id())
            .cloned()
            .ok_or_else(|| EvalError::UnboundSymbol(u.name().to_string())),
    }
}

fn apply(root: &RefinementEnv, f: Den, args: Vec<Den>) -> Result<Den, EvalError> {
    let Den::Fun(clo) = f else {
        return Err(EvalError::IllSorted(format!("applied non-function {f}")));
    };
    let mut inner = clo.env.clone();
    if args.len() == clo.params.len() {
        for ((p, _), a) in clo.params.iter().zip(args) {
            inner.insert(p.clone(), a);
        }
    } else if args.len() == 1 {
        // distribute a tuple argument over the parameters
        let mut arg = args.into_iter().next().unwrap();
        let n = clo.params.len();
        for (i, (p, _)) in clo.params.iter().enumerate() {
            if i + 1 == n {
                inner.insert(p.clone(), arg);
                break;
            }
            let Den::Pair(l, r) = arg else {
                return Err(EvalError::IllSorted("arity mismatch in application".into()));
            };
            inner.insert(p.clone(), *l);
            arg = *r;
        }
    } else if clo.params.len() == 1 {
        inner.insert(clo.params[0].0.clone(), Den::tuple(args));
    } else {
        return Err(EvalError::IllSorted("arity mismatch in application".into()));
    }
    eval(root, &inner, &clo.body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::refinement::Refinement as R;

    #[test]
    fn beta_in_the_logic() {
        // ((\a. a + 1) 2) => 3
        let env = RefinementEnv::new();
        let t = R::app(
            R::lambda(&["a"], Sort::Nat, R::add(R::var("a"), R::Nat(1))),
            vec![R::Nat(2)],
        );
        assert_eq!(eval_refinement(&env, &t).unwrap(), Den::Nat(3));
    }

    #[test]
    fn pair_projection() {
        let env = RefinementEnv::new();
        let t = R::projl(R::pair(R::Nat(1), R::Nat(2)));
        assert_eq!(eval_refinement(&env, &t).unwrap(), Den::Nat(1));
    }

    #[test]
    fn ite_abbreviation_selects_branch() {
        // env{y -> 3, _v -> 1} |= ite(y > _v, 1, 0) => 1
        let env = RefinementEnv::new()
            .bind("y", Den::Nat(3))
            .bind(crate::logic::NU, Den::Nat(1));
        let t = R::ite(R::gt(R::var("y"), R::nu()), R::Nat(1), R::Nat(0));
        assert_eq!(eval_refinement(&env, &t).unwrap(), Den::Nat(1));
    }

    #[test]
    fn forall_enumerates_bounded_naturals() {
        let env = RefinementEnv::with_bound(8);
        // forall a:Nat. a <= 8 holds on the bounded subdomain
        let t = R::forall("a", Sort::Nat, R::le(R::var("a"), R::Nat(8)));
        assert_eq!(eval_refinement(&env, &t).unwrap(), Den::Bool(true));
        let t2 = R::forall("a", Sort::Nat, R::le(R::var("a"), R::Nat(7)));
        assert_eq!(eval_refinement(&env, &t2).unwrap(), Den::Bool(false));
    }

    #[test]
    fn unknown_requires_valuation() {
        let sym = UnknownSym::new(0, "p", vec![]);
        let t = R::Unknown(sym.clone());
        let env = RefinementEnv::new();
        assert!(matches!(
            eval_refinement(&env, &t),
            Err(EvalError::UnboundSymbol(_))
        ));
        let env = env.bind_unknown(&sym, Den::Nat(4));
        assert_eq!(eval_refinement(&env, &t).unwrap(), Den::Nat(4));
    }

    #[test]
    fn monus_saturates() {
        let env = RefinementEnv::new();
        let t = R::sub(R::Nat(1), R::Nat(3));
        assert_eq!(eval_refinement(&env, &t).unwrap(), Den::Nat(0));
    }
}
