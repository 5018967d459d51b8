//! Small-step operational cost semantics. A machine state pairs an
//! expression with a nonnegative resource budget; only `tick` changes the
//! budget, and the budget may never go negative.

use super::expr::{Atom, Expr, ExprKind, Value};
use super::subst::substitute_value;
use crate::span::Span;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default fuel for evaluation; the semantics permits divergence.
pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MachineState {
    pub expr: Expr,
    /// Available resources; invariant: nonnegative (enforced by type).
    pub budget: u64,
}

impl MachineState {
    pub fn new(expr: Expr, budget: u64) -> MachineState {
        MachineState { expr, budget }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("insufficient resources: tick {cost} with budget {budget}")]
    InsufficientResources { cost: i64, budget: u64, span: Span },
    #[error("stuck: {reason}")]
    Stuck { reason: String, span: Span },
    #[error("resource counter overflow")]
    CostOverflow,
}

/// Result of one step: a successor state, or the observation that the
/// expression is already a value.
#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Next(MachineState),
    Finished(Value),
}

/// Take a single step of the cost semantics.
pub fn step(state: &MachineState) -> Result<StepOutcome, StepError> {
    let q = state.budget;
    let span = state.expr.span;
    let stuck = |reason: &str| StepError::Stuck { reason: reason.to_string(), span };
    match &state.expr.kind {
        ExprKind::Atom(a) => match a.as_value() {
            Some(v) => Ok(StepOutcome::Finished(v)),
            None => Err(stuck("free variable in evaluation position")),
        },
        ExprKind::Cond { scrutinee, then_branch, else_branch } => {
            match scrutinee.as_value() {
                Some(Value::True) => {
                    Ok(StepOutcome::Next(MachineState::new((**then_branch).clone(), q)))
                }
                Some(Value::False) => {
                    Ok(StepOutcome::Next(MachineState::new((**else_branch).clone(), q)))
                }
                _ => Err(stuck("conditional scrutinee is not a boolean value")),
            }
        }
        ExprKind::MatP { scrutinee, left, right, body } => match scrutinee.as_value() {
            Some(Value::Pair(v1, v2)) => {
                let mut vals = BTreeMap::new();
                vals.insert(left.clone(), *v1);
                vals.insert(right.clone(), *v2);
                Ok(StepOutcome::Next(MachineState::new(
                    substitute_value_many(&vals, body),
                    q,
                )))
            }
            _ => Err(stuck("matp scrutinee is not a pair value")),
        },
        ExprKind::MatD { scrutinee, arms } => match scrutinee.as_value() {
            Some(Value::Ctor { name, content, children }) => {
                let arm = arms
                    .iter()
                    .find(|a| a.ctor == name)
                    .ok_or_else(|| stuck(&format!("no arm for constructor {name}")))?;
                if arm.child_vars.len() != children.len() {
                    return Err(stuck("constructor arity mismatch"));
                }
                let mut vals = BTreeMap::new();
                vals.insert(arm.content_var.clone(), *content);
                for (x, v) in arm.child_vars.iter().zip(children) {
                    vals.insert(x.clone(), v);
                }
                Ok(StepOutcome::Next(MachineState::new(
                    substitute_value_many(&vals, &arm.body),
                    q,
                )))
            }
            _ => Err(stuck("matd scrutinee is not a constructor value")),
        },
        ExprKind::App { func, arg } => {
            let Some(v2) = arg.as_value() else {
                return Err(stuck("application argument is not a value"));
            };
            match &**func {
                Atom::Abs { param, body } => Ok(StepOutcome::Next(MachineState::new(
                    substitute_value(&v2, param, body),
                    q,
                ))),
                Atom::Fix { fun, param, body } => {
                    let fix_val = Value::Fix {
                        fun: fun.clone(),
                        param: param.clone(),
                        body: (**body).clone(),
                    };
                    let mut vals = BTreeMap::new();
                    vals.insert(fun.clone(), fix_val);
                    vals.insert(param.clone(), v2);
                    Ok(StepOutcome::Next(MachineState::new(
                        substitute_value_many(&vals, body),
                        q,
                    )))
                }
                Atom::Simp(_) => Err(stuck("application of a non-function")),
            }
        }
        ExprKind::Let { bound, name, body } => {
            if let Some(v1) = bound.as_value() {
                return Ok(StepOutcome::Next(MachineState::new(
                    substitute_value(&v1, name, body),
                    q,
                )));
            }
            // congruence: reduce inside the binding
            let inner = MachineState::new((**bound).clone(), q);
            match step(&inner)? {
                StepOutcome::Next(next) => Ok(StepOutcome::Next(MachineState::new(
                    Expr::new(
                        ExprKind::Let {
                            bound: Box::new(next.expr),
                            name: name.clone(),
                            body: body.clone(),
                        },
                        state.expr.span,
                    ),
                    next.budget,
                ))),
                StepOutcome::Finished(_) => {
                    Err(stuck("let binding finished without being a value"))
                }
            }
        }
        ExprKind::Impossible => Err(stuck("impossible reached")),
        ExprKind::Tick { cost, body } => {
            let next_budget = if *cost >= 0 {
                q.checked_sub(*cost as u64).ok_or(StepError::InsufficientResources {
                    cost: *cost,
                    budget: q,
                    span,
                })?
            } else {
                let gain = cost
                    .checked_neg()
                    .and_then(|g| u64::try_from(g).ok())
                    .ok_or(StepError::CostOverflow)?;
                q.checked_add(gain).ok_or(StepError::CostOverflow)?
            };
            Ok(StepOutcome::Next(MachineState::new((**body).clone(), next_budget)))
        }
    }
}

fn substitute_value_many(vals: &BTreeMap<String, Value>, e: &Expr) -> Expr {
    let mut out = e.clone();
    for (x, v) in vals {
        out = substitute_value(v, x, &out);
    }
    out
}

/// Outcome of running the multi-step relation.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalOutcome {
    /// Terminated at a value with leftover resources.
    Finished(Value, u64),
    /// A tick could not be paid.
    ResourceExhausted(MachineState),
    /// The step bound ran out.
    FuelExhausted(MachineState, u64),
    /// A non-redex non-value was reached.
    Stuck(MachineState, String),
}

impl EvalOutcome {
    pub fn finished(&self) -> Option<(&Value, u64)> {
        match self {
            EvalOutcome::Finished(v, q) => Some((v, *q)),
            _ => None,
        }
    }
}

/// Iterate the single-step relation at most `fuel` times.
pub fn evaluate(e: &Expr, budget: u64, fuel: u64) -> EvalOutcome {
    let mut state = MachineState::new(e.clone(), budget);
    for _ in 0..fuel {
        match step(&state) {
            Ok(StepOutcome::Finished(v)) => return EvalOutcome::Finished(v, state.budget),
            Ok(StepOutcome::Next(next)) => state = next,
            Err(StepError::InsufficientResources { .. }) => {
                return EvalOutcome::ResourceExhausted(state)
            }
            Err(StepError::Stuck { reason, .. }) => return EvalOutcome::Stuck(state, reason),
            Err(StepError::CostOverflow) => {
                return EvalOutcome::Stuck(state, "resource counter overflow".into())
            }
        }
    }
    let steps = fuel;
    EvalOutcome::FuelExhausted(state, steps)
}

/// Run with a per-step observer; used by the trace command.
pub fn evaluate_traced(
    e: &Expr,
    budget: u64,
    fuel: u64,
    mut observe: impl FnMut(u64, &MachineState),
) -> EvalOutcome {
    let mut state = MachineState::new(e.clone(), budget);
    observe(0, &state);
    for k in 0..fuel {
        match step(&state) {
            Ok(StepOutcome::Finished(v)) => return EvalOutcome::Finished(v, state.budget),
            Ok(StepOutcome::Next(next)) => {
                state = next;
                observe(k + 1, &state);
            }
            Err(StepError::InsufficientResources { .. }) => {
                return EvalOutcome::ResourceExhausted(state)
            }
            Err(StepError::Stuck { reason, .. }) => return EvalOutcome::Stuck(state, reason),
            Err(StepError::CostOverflow) => {
                return EvalOutcome::Stuck(state, "resource counter overflow".into())
            }
        }
    }
    EvalOutcome::FuelExhausted(state, fuel)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HwmError {
    #[error("evaluation did not terminate within fuel")]
    Nonterminating,
    #[error("evaluation stuck: {0}")]
    Stuck(String),
    #[error("high-water mark self-check failed")]
    SelfCheck,
}

/// Least budget under which evaluation finishes: run once at a virtually
/// unbounded budget and track the running minimum of the counter, then
/// verify success at the result and failure one below it.
pub fn high_water_mark(e: &Expr, fuel: u64) -> Result<u64, HwmError> {
    const BIG: u64 = u64::MAX / 4;
    let mut state = MachineState::new(e.clone(), BIG);
    let mut min_budget = BIG;
    let mut remaining = fuel;
    loop {
        if remaining == 0 {
            return Err(HwmError::Nonterminating);
        }
        remaining -= 1;
        match step(&state) {
            Ok(StepOutcome::Finished(_)) => break,
            Ok(StepOutcome::Next(next)) => {
                min_budget = min_budget.min(next.budget);
                state = next;
            }
            Err(StepError::InsufficientResources { .. }) | Err(StepError::CostOverflow) => {
                return Err(HwmError::Stuck("budget bookkeeping overflow".into()))
            }
            Err(StepError::Stuck { reason, .. }) => return Err(HwmError::Stuck(reason)),
        }
    }
    let hwm = BIG - min_budget;
    // verification pass
    if evaluate(e, hwm, fuel).finished().is_none() {
        return Err(HwmError::SelfCheck);
    }
    if hwm > 0 && evaluate(e, hwm - 1, fuel).finished().is_some() {
        return Err(HwmError::SelfCheck);
    }
    Ok(hwm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::expr::SimpAtom;

    fn triv() -> Expr {
        Expr::synthetic(ExprKind::Atom(Atom::Simp(SimpAtom::Triv)))
    }

    fn tick(cost: i64, body: Expr) -> Expr {
        Expr::synthetic(ExprKind::Tick { cost, body: Box::new(body) })
    }

    #[test]
    fn tick_decrements_budget() {
        // <tick 2 e0, q=5> -> <e0, 3>
        let e = tick(2, triv());
        let s = MachineState::new(e, 5);
        match step(&s).unwrap() {
            StepOutcome::Next(next) => assert_eq!(next.budget, 3),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn cond_true_keeps_budget() {
        let e = Expr::synthetic(ExprKind::Cond {
            scrutinee: SimpAtom::True,
            then_branch: Box::new(triv()),
            else_branch: Box::new(tick(1, triv())),
        });
        let s = MachineState::new(e, 7);
        match step(&s).unwrap() {
            StepOutcome::Next(next) => {
                assert_eq!(next.budget, 7);
                assert_eq!(next.expr, triv());
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn tick_without_budget_fails() {
        // <tick 3 e0, q=2> -> InsufficientResources
        let e = tick(3, triv());
        let s = MachineState::new(e, 2);
        assert!(matches!(
            step(&s),
            Err(StepError::InsufficientResources { cost: 3, budget: 2, .. })
        ));
    }

    #[test]
    fn two_unit_ticks() {
        let e = tick(1, tick(1, triv()));
        assert_eq!(evaluate(&e, 2, 100), EvalOutcome::Finished(Value::Triv, 0));
        assert!(matches!(
            evaluate(&tick(1, triv()), 0, 100),
            EvalOutcome::ResourceExhausted(_)
        ));
    }

    #[test]
    fn negative_cost_frees_resources() {
        // evaluate(tick (-2) (tick 1 triv), 0) -> Finished(triv, 1)
        let e = tick(-2, tick(1, triv()));
        assert_eq!(evaluate(&e, 0, 100), EvalOutcome::Finished(Value::Triv, 1));
    }

    #[test]
    fn high_water_mark_net_bookkeeping() {
        // tick 2 (tick (-1) (tick 1 triv)) has hwm 2
        let e = tick(2, tick(-1, tick(1, triv())));
        assert_eq!(high_water_mark(&e, 100).unwrap(), 2);
        assert_eq!(high_water_mark(&triv(), 100).unwrap(), 0);
    }

    #[test]
    fn impossible_is_stuck() {
        let e = Expr::synthetic(ExprKind::Impossible);
        assert!(matches!(evaluate(&e, 0, 10), EvalOutcome::Stuck(..)));
    }

    #[test]
    fn let_congruence_reduces_binding() {
        // let x = tick 1 () in x  at q=1 finishes with 0 left
        let e = Expr::synthetic(ExprKind::Let {
            bound: Box::new(tick(1, triv())),
            name: "x".into(),
            body: Box::new(Expr::synthetic(ExprKind::Atom(Atom::Simp(SimpAtom::Var(
                "x".into(),
            ))))),
        });
        assert_eq!(evaluate(&e, 1, 100), EvalOutcome::Finished(Value::Triv, 0));
    }
}
