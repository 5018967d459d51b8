//! The resource-instrumented core calculus and its small-step semantics,
//! used as the executable soundness oracle.

pub mod arbitrary;
pub mod eval;
pub mod expr;
pub mod subst;

pub use eval::{
    evaluate, evaluate_traced, high_water_mark, step, EvalOutcome, HwmError, MachineState,
    StepError, StepOutcome, DEFAULT_FUEL,
};
pub use expr::{is_anf, Atom, Expr, ExprKind, MatchArm, SimpAtom, Value};
pub use subst::substitute_value;

#[cfg(test)]
mod metatheory_tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Run a state for `m` steps or until it cannot continue.
    fn trace(e: &Expr, budget: u64, max: u64) -> Vec<MachineState> {
        let mut out = vec![MachineState::new(e.clone(), budget)];
        for _ in 0..max {
            match step(out.last().unwrap()) {
                Ok(StepOutcome::Next(s)) => out.push(s),
                _ => break,
            }
        }
        out
    }

    #[test]
    fn net_cost_invariance_on_random_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let e = arbitrary::closed_expr(&mut rng, 4);
            let p = 40u64;
            let q = 55u64;
            let tp = trace(&e, p, 500);
            let tq = trace(&e, q, 500);
            let m = tp.len().min(tq.len());
            for i in 0..m {
                // p - p' = q - q' after the same number of steps
                let dp = p as i64 - tp[i].budget as i64;
                let dq = q as i64 - tq[i].budget as i64;
                assert_eq!(dp, dq, "net cost diverged on {e}");
            }
        }
    }

    #[test]
    fn budget_monotonicity_on_random_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let e = arbitrary::closed_expr(&mut rng, 4);
            let s = MachineState::new(e.clone(), 10);
            if let Ok(StepOutcome::Next(next)) = step(&s) {
                let c = 5u64;
                let s2 = MachineState::new(e.clone(), 10 + c);
                match step(&s2) {
                    Ok(StepOutcome::Next(next2)) => {
                        assert_eq!(next2.expr, next.expr);
                        assert_eq!(next2.budget, next.budget + c);
                    }
                    other => panic!("monotonicity broken: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn determinism_on_random_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let e = arbitrary::closed_expr(&mut rng, 4);
            let a = evaluate(&e, 30, 1000);
            let b = evaluate(&e, 30, 1000);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn hwm_is_tight_on_random_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let e = arbitrary::closed_expr(&mut rng, 4);
            // generated terms always terminate; hwm must verify its own result
            let hwm = high_water_mark(&e, 10_000).expect("terminating term");
            assert!(evaluate(&e, hwm, 10_000).finished().is_some());
            if hwm > 0 {
                assert!(evaluate(&e, hwm - 1, 10_000).finished().is_none());
            }
        }
    }
}
