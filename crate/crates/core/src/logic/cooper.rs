//! Decision procedure for linear integer arithmetic by quantifier
//! elimination. Sentences are decided exactly; a work cap bounds blowup,
//! reporting an inconclusive result instead of running away.

use std::collections::BTreeMap;

pub type VarId = u32;

/// Linear term `constant + sum coeff_i * x_i` over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinTerm {
    pub coeffs: BTreeMap<VarId, i64>,
    pub constant: i64,
}

impl LinTerm {
    pub fn constant(c: i64) -> LinTerm {
        LinTerm { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(v: VarId) -> LinTerm {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(v, 1);
        LinTerm { coeffs, constant: 0 }
    }

    pub fn add(&self, other: &LinTerm) -> LinTerm {
        let mut out = self.clone();
        out.constant += other.constant;
        for (v, c) in &other.coeffs {
            let e = out.coeffs.entry(*v).or_insert(0);
            *e += c;
            if *e == 0 {
                out.coeffs.remove(v);
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> LinTerm {
        if k == 0 {
            return LinTerm::constant(0);
        }
        LinTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: self.constant * k,
        }
    }

    pub fn sub(&self, other: &LinTerm) -> LinTerm {
        self.add(&other.scale(-1))
    }

    pub fn coeff_of(&self, v: VarId) -> i64 {
        self.coeffs.get(&v).copied().unwrap_or(0)
    }

    pub fn without(&self, v: VarId) -> LinTerm {
        let mut out = self.clone();
        out.coeffs.remove(&v);
        out
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, env: &BTreeMap<VarId, i64>) -> Option<i64> {
        let mut acc = self.constant;
        for (v, c) in &self.coeffs {
            acc = acc.checked_add(c.checked_mul(*env.get(v)?)?)?;
        }
        Some(acc)
    }
}

/// Atoms after negation-normalization: `t <= 0`, `d | t`, `!(d | t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Le(LinTerm),
    Dvd(u64, LinTerm),
    NotDvd(u64, LinTerm),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn le(t: LinTerm) -> Formula {
        if t.is_constant() {
            return Formula::from_bool(t.constant <= 0);
        }
        Formula::Atom(Atom::Le(t))
    }

    /// `t = 0` as a conjunction of two inequalities.
    pub fn eq_zero(t: LinTerm) -> Formula {
        if t.is_constant() {
            return Formula::from_bool(t.constant == 0);
        }
        Formula::And(vec![Formula::le(t.clone()), Formula::le(t.scale(-1))])
    }

    pub fn from_bool(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    pub fn and(items: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for i in items {
            match i {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(items: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for i in items {
            match i {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    /// Push negations down to atoms; eliminates `Not` nodes entirely.
    fn nnf(self, negate: bool) -> Formula {
        match self {
            Formula::True => Formula::from_bool(!negate),
            Formula::False => Formula::from_bool(negate),
            Formula::Not(inner) => inner.nnf(!negate),
            Formula::And(items) => {
                let mapped: Vec<Formula> = items.into_iter().map(|i| i.nnf(negate)).collect();
                if negate {
                    Formula::or(mapped)
                } else {
                    Formula::and(mapped)
                }
            }
            Formula::Or(items) => {
                let mapped: Vec<Formula> = items.into_iter().map(|i| i.nnf(negate)).collect();
                if negate {
                    Formula::and(mapped)
                } else {
                    Formula::or(mapped)
                }
            }
            Formula::Atom(a) => {
                if !negate {
                    return Formula::Atom(a);
                }
                match a {
                    // !(t <= 0)  <=>  -t + 1 <= 0
                    Atom::Le(t) => {
                        let mut u = t.scale(-1);
                        u.constant += 1;
                        Formula::le(u)
                    }
                    Atom::Dvd(d, t) => Formula::Atom(Atom::NotDvd(d, t)),
                    Atom::NotDvd(d, t) => Formula::Atom(Atom::Dvd(d, t)),
                }
            }
        }
    }

    fn eval(&self, env: &BTreeMap<VarId, i64>) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Not(f) => f.eval(env).map(|b| !b),
            Formula::And(items) => {
                for i in items {
                    if !i.eval(env)? {
                        return Some(false);
                    }
                }
                Some(true)
            }
            Formula::Or(items) => {
                for i in items {
                    if i.eval(env)? {
                        return Some(true);
                    }
                }
                Some(false)
            }
            Formula::Atom(a) => match a {
                Atom::Le(t) => Some(t.eval(env)? <= 0),
                Atom::Dvd(d, t) => Some(t.eval(env)?.rem_euclid(*d as i64) == 0),
                Atom::NotDvd(d, t) => Some(t.eval(env)?.rem_euclid(*d as i64) != 0),
            },
        }
    }

    fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(items) | Formula::Or(items) => {
                1 + items.iter().map(Formula::size).sum::<usize>()
            }
        }
    }

    fn subst_var(&self, v: VarId, t: &LinTerm) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Not(f) => Formula::not(f.subst_var(v, t)),
            Formula::And(items) => {
                Formula::and(items.iter().map(|i| i.subst_var(v, t)).collect())
            }
            Formula::Or(items) => Formula::or(items.iter().map(|i| i.subst_var(v, t)).collect()),
            Formula::Atom(a) => {
                let replace = |u: &LinTerm| -> LinTerm {
                    let c = u.coeff_of(v);
                    if c == 0 {
                        u.clone()
                    } else {
                        u.without(v).add(&t.scale(c))
                    }
                };
                match a {
                    Atom::Le(u) => Formula::le(replace(u)),
                    Atom::Dvd(d, u) => normalize_dvd(false, *d, replace(u)),
                    Atom::NotDvd(d, u) => normalize_dvd(true, *d, replace(u)),
                }
            }
        }
    }
}

fn normalize_dvd(negated: bool, d: u64, t: LinTerm) -> Formula {
    if d == 1 {
        return Formula::from_bool(!negated);
    }
    if t.is_constant() {
        let holds = t.constant.rem_euclid(d as i64) == 0;
        return Formula::from_bool(if negated { !holds } else { holds });
    }
    if negated {
        Formula::Atom(Atom::NotDvd(d, t))
    } else {
        Formula::Atom(Atom::Dvd(d, t))
    }
}

/// Outcome of a decision: `None` means the work cap was exceeded.
pub type Decision = Option<bool>;

/// Work caps keep elimination from exploding on adversarial inputs.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_formula_size: usize,
    pub max_delta: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits { max_formula_size: 600_000, max_delta: 4096 }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Eliminate `exists v. f` where `f` is in NNF. Returns `None` on blowup.
fn eliminate_exists(v: VarId, f: Formula, limits: &Limits) -> Option<Formula> {
    // Scale so every occurrence of v has coefficient +-1.
    let mut m: u64 = 1;
    let mut occurs = false;
    collect_coeffs(&f, v, &mut m, &mut occurs)?;
    if !occurs {
        return Some(f);
    }
    let scaled = scale_var(&f, v, m as i64);
    let scaled = if m > 1 {
        Formula::and(vec![scaled, Formula::Atom(Atom::Dvd(m, LinTerm::var(v)))])
    } else {
        scaled
    };

    // delta: lcm of divisibility moduli mentioning v.
    let mut delta: u64 = 1;
    collect_delta(&scaled, v, &mut delta);
    if delta > limits.max_delta {
        return None;
    }

    // Lower bounds b with atoms "b < v" (from -v + r <= 0: r <= v, b = r - 1).
    let mut lower = Vec::new();
    collect_lower_bounds(&scaled, v, &mut lower);

    let minus_inf = build_minus_inf(&scaled, v);
    let mut disjuncts = Vec::new();
    for j in 1..=delta {
        let jt = LinTerm::constant(j as i64);
        disjuncts.push(minus_inf.subst_var(v, &jt));
        for b in &lower {
            let bj = b.add(&jt);
            disjuncts.push(scaled.subst_var(v, &bj));
        }
        if disjuncts.iter().map(Formula::size).sum::<usize>() > limits.max_formula_size {
            return None;
        }
    }
    Some(Formula::or(disjuncts))
}

fn collect_coeffs(f: &Formula, v: VarId, m: &mut u64, occurs: &mut bool) -> Option<()> {
    match f {
        Formula::True | Formula::False => Some(()),
        Formula::Not(inner) => collect_coeffs(inner, v, m, occurs),
        Formula::And(items) | Formula::Or(items) => {
            for i in items {
                collect_coeffs(i, v, m, occurs)?;
            }
            Some(())
        }
        Formula::Atom(a) => {
            let t = match a {
                Atom::Le(t) | Atom::Dvd(_, t) | Atom::NotDvd(_, t) => t,
            };
            let c = t.coeff_of(v);
            if c != 0 {
                *occurs = true;
                *m = lcm(*m, c.unsigned_abs());
                if *m > 1 << 20 {
                    return None;
                }
            }
            Some(())
        }
    }
}

/// Multiply atoms through so the coefficient of `v` becomes +-m, then
/// reinterpret `m*v` as `v` (coefficient +-1).
fn scale_var(f: &Formula, v: VarId, m: i64) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Not(inner) => Formula::not(scale_var(inner, v, m)),
        Formula::And(items) => Formula::and(items.iter().map(|i| scale_var(i, v, m)).collect()),
        Formula::Or(items) => Formula::or(items.iter().map(|i| scale_var(i, v, m)).collect()),
        Formula::Atom(a) => {
            let rescale = |t: &LinTerm| -> LinTerm {
                let c = t.coeff_of(v);
                if c == 0 {
                    return t.clone();
                }
                let k = m / c.abs();
                let mut scaled = t.scale(k);
                // coefficient of v is now +-m; normalize to +-1
                let sign = if c > 0 { 1 } else { -1 };
                scaled.coeffs.insert(v, sign);
                scaled
            };
            match a {
                Atom::Le(t) => {
                    if t.coeff_of(v) == 0 {
                        Formula::Atom(a.clone())
                    } else {
                        Formula::le(rescale(t))
                    }
                }
                Atom::Dvd(d, t) => {
                    let c = t.coeff_of(v);
                    if c == 0 {
                        Formula::Atom(a.clone())
                    } else {
                        let k = (m / c.abs()) as u64;
                        normalize_dvd(false, d * k, rescale(t))
                    }
                }
                Atom::NotDvd(d, t) => {
                    let c = t.coeff_of(v);
                    if c == 0 {
                        Formula::Atom(a.clone())
                    } else {
                        let k = (m / c.abs()) as u64;
                        normalize_dvd(true, d * k, rescale(t))
                    }
                }
            }
        }
    }
}

fn collect_delta(f: &Formula, v: VarId, delta: &mut u64) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Not(inner) => collect_delta(inner, v, delta),
        Formula::And(items) | Formula::Or(items) => {
            for i in items {
                collect_delta(i, v, delta);
            }
        }
        Formula::Atom(Atom::Dvd(d, t)) | Formula::Atom(Atom::NotDvd(d, t)) => {
            if t.coeff_of(v) != 0 {
                *delta = lcm(*delta, *d);
            }
        }
        Formula::Atom(_) => {}
    }
}

/// Atoms `-v + r <= 0` assert `r <= v`; the boundary term is `r - 1`.
fn collect_lower_bounds(f: &Formula, v: VarId, out: &mut Vec<LinTerm>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Not(inner) => collect_lower_bounds(inner, v, out),
        Formula::And(items) | Formula::Or(items) => {
            for i in items {
                collect_lower_bounds(i, v, out);
            }
        }
        Formula::Atom(Atom::Le(t)) => {
            if t.coeff_of(v) == -1 {
                let mut b = t.without(v);
                b.constant -= 1;
                if !out.contains(&b) {
                    out.push(b);
                }
            }
        }
        Formula::Atom(_) => {}
    }
}

/// The limit of the formula as `v -> -infinity`.
fn build_minus_inf(f: &Formula, v: VarId) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Not(inner) => Formula::not(build_minus_inf(inner, v)),
        Formula::And(items) => {
            Formula::and(items.iter().map(|i| build_minus_inf(i, v)).collect())
        }
        Formula::Or(items) => Formula::or(items.iter().map(|i| build_minus_inf(i, v)).collect()),
        Formula::Atom(Atom::Le(t)) => match t.coeff_of(v) {
            0 => f.clone(),
            1 => Formula::True,   // v <= r holds at -infinity
            -1 => Formula::False, // r <= v fails at -infinity
            _ => unreachable!("unscaled coefficient"),
        },
        Formula::Atom(_) => f.clone(),
    }
}

/// Eliminate a single existential variable from an arbitrary formula,
/// returning an equivalent formula without it.
pub fn eliminate_one(v: VarId, f: Formula, limits: &Limits) -> Option<Formula> {
    let g = eliminate_exists(v, f.nnf(false), limits)?.nnf(false);
    if g.size() > limits.max_formula_size {
        return None;
    }
    Some(g)
}

/// Evaluate a ground formula.
pub fn eval_ground(f: &Formula) -> Option<bool> {
    f.eval(&BTreeMap::new())
}

/// Decide `exists vars. f` exactly. Variables not listed must not occur.
pub fn decide_exists(vars: &[VarId], f: Formula, limits: &Limits) -> Decision {
    let mut cur = f.nnf(false);
    for v in vars.iter().rev() {
        cur = eliminate_exists(*v, cur, limits)?.nnf(false);
        if cur.size() > limits.max_formula_size {
            return None;
        }
    }
    cur.eval(&BTreeMap::new())
}

/// Decide `forall vars. f` exactly, via the dual existential.
pub fn decide_forall(vars: &[VarId], f: Formula, limits: &Limits) -> Decision {
    decide_exists(vars, Formula::not(f), limits).map(|b| !b)
}

/// Search for a satisfying assignment with all variables in `0..=bound`,
/// visiting small-sum assignments first. Deterministic.
pub fn find_model_bounded(
    vars: &[VarId],
    f: &Formula,
    bound: u64,
) -> Option<BTreeMap<VarId, i64>> {
    if vars.is_empty() {
        return match f.eval(&BTreeMap::new()) {
            Some(true) => Some(BTreeMap::new()),
            _ => None,
        };
    }
    let k = vars.len();
    let max_sum = bound as usize * k;
    let mut assignment = vec![0i64; k];
    for target in 0..=max_sum {
        if search_sum(vars, f, bound, target, 0, &mut assignment) {
            return Some(vars.iter().copied().zip(assignment).collect());
        }
    }
    None
}

fn search_sum(
    vars: &[VarId],
    f: &Formula,
    bound: u64,
    remaining: usize,
    idx: usize,
    assignment: &mut Vec<i64>,
) -> bool {
    if idx == vars.len() {
        if remaining != 0 {
            return false;
        }
        let env: BTreeMap<VarId, i64> =
            vars.iter().copied().zip(assignment.iter().copied()).collect();
        return f.eval(&env) == Some(true);
    }
    let hi = (bound as usize).min(remaining);
    for val in 0..=hi {
        assignment[idx] = val as i64;
        if search_sum(vars, f, bound, remaining - val, idx + 1, assignment) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: VarId) -> Formula {
        // 0 <= v  i.e.  -v <= 0
        Formula::le(LinTerm::var(v).scale(-1))
    }

    #[test]
    fn decides_simple_existential() {
        // exists x >= 0. x + -3 = 0
        let f = Formula::and(vec![
            nat(0),
            Formula::eq_zero(LinTerm::var(0).add(&LinTerm::constant(-3))),
        ]);
        assert_eq!(decide_exists(&[0], f, &Limits::default()), Some(true));
    }

    #[test]
    fn refutes_pigeonhole_split_of_one() {
        // exists p1 p2 >= 0. p1 + p2 = 1 and p1 >= 1 and p2 >= 1
        let p1 = LinTerm::var(0);
        let p2 = LinTerm::var(1);
        let f = Formula::and(vec![
            nat(0),
            nat(1),
            Formula::eq_zero(p1.add(&p2).add(&LinTerm::constant(-1))),
            Formula::le(LinTerm::constant(1).sub(&p1)),
            Formula::le(LinTerm::constant(1).sub(&p2)),
        ]);
        assert_eq!(decide_exists(&[0, 1], f, &Limits::default()), Some(false));
    }

    #[test]
    fn decides_universal_with_coefficients() {
        // forall x >= 0. 2x >= x  (trivially true over naturals)
        let x = LinTerm::var(0);
        let body = Formula::le(x.clone().sub(&x.scale(2)));
        let f = Formula::or(vec![
            Formula::not(nat(0)),
            body,
        ]);
        assert_eq!(decide_forall(&[0], f, &Limits::default()), Some(true));
    }

    #[test]
    fn divisibility_through_scaling() {
        // exists x. 2x = 5 is false over the integers
        let f = Formula::eq_zero(LinTerm::var(0).scale(2).add(&LinTerm::constant(-5)));
        assert_eq!(decide_exists(&[0], f, &Limits::default()), Some(false));
        // exists x. 2x = 6 is true
        let g = Formula::eq_zero(LinTerm::var(0).scale(2).add(&LinTerm::constant(-6)));
        assert_eq!(decide_exists(&[0], g, &Limits::default()), Some(true));
    }

    #[test]
    fn nested_alternation() {
        // forall x >= 0. exists y >= 0. y = x + 1 — eliminate y, then x.
        let inner = Formula::and(vec![
            nat(1),
            Formula::eq_zero(
                LinTerm::var(1).sub(&LinTerm::var(0)).add(&LinTerm::constant(-1)),
            ),
        ]);
        let limits = Limits::default();
        let no_y = eliminate_exists(1, inner.nnf(false), &limits).unwrap();
        let f = Formula::or(vec![Formula::not(nat(0)), no_y]);
        assert_eq!(decide_forall(&[0], f, &limits), Some(true));
    }

    #[test]
    fn bounded_model_prefers_small_sums() {
        // x + y = 2 with x, y in 0..=4: first model in graded order is (0, 2)
        let f = Formula::eq_zero(
            LinTerm::var(0).add(&LinTerm::var(1)).add(&LinTerm::constant(-2)),
        );
        let m = find_model_bounded(&[0, 1], &f, 4).unwrap();
        assert_eq!(m[&0] + m[&1], 2);
        assert_eq!(m[&0], 0);
    }
}
