//! Validity checking of boolean refinements: `assumptions => goal` must
//! hold for every instantiation of the query variables.
//!
//! Scalar queries are decided exactly by quantifier elimination over the
//! integers, with naturals encoded by nonnegativity guards and element
//! sorts embedded as an ordered numeric domain. Queries quantifying over
//! function-sorted variables fall back to bounded function-space
//! enumeration at two sizes; a verdict that depends on the bound is
//! reported as `Unknown`.

use super::cooper::{self, Formula, LinTerm, Limits, VarId};
use super::eval::{enumerate_sort, eval_refinement, Den, RefinementEnv};
use super::refinement::Refinement;
use super::sort::Sort;
use super::sorting::SortError;
use std::collections::BTreeMap;
use thiserror::Error;

/// A validity query: `forall vars. conj(assumptions) => goal`.
#[derive(Debug, Clone)]
pub struct ValidityQuery {
    pub vars: Vec<(String, Sort)>,
    pub assumptions: Vec<Refinement>,
    pub goal: Refinement,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Valid,
    /// A counterexample environment when one was found within the bounded
    /// search domain; may be empty for closed refutations.
    Invalid(BTreeMap<String, Den>),
    Unknown(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidityConfig {
    /// Bound of the enumerable subdomain used for counterexample search
    /// and residual quantification.
    pub domain_bound: u64,
    pub limits: Limits,
}

impl Default for ValidityConfig {
    fn default() -> ValidityConfig {
        ValidityConfig {
            domain_bound: super::eval::DEFAULT_DOMAIN_BOUND,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
enum LowerError {
    #[error("unsupported construct for the linear decision procedure: {0}")]
    Unsupported(String),
    #[error("conditional branch explosion")]
    BranchExplosion,
}

/// Check a validity query.
pub fn check_validity_query(
    q: &ValidityQuery,
    cfg: &ValidityConfig,
) -> Result<Verdict, SortError> {
    // Reject ground unknowns early: valuations must be substituted first.
    if q.goal.has_unknowns() || q.assumptions.iter().any(|a| a.has_unknowns()) {
        return Ok(Verdict::Unknown("query contains unvaluated unknowns".into()));
    }

    let full = Refinement::implies(
        Refinement::conj(q.assumptions.clone()),
        q.goal.clone(),
    );

    // Unit-sorted variables are inhabited only by the unit witness.
    let mut formula = full;
    let mut vars: Vec<(String, Sort)> = Vec::new();
    for (name, sort) in &q.vars {
        if matches!(sort, Sort::Unit) {
            formula = formula.subst(name, &Refinement::Star);
        } else {
            vars.push((name.clone(), sort.clone()));
        }
    }

    // Split product-sorted variables into components.
    let mut scalar_vars: Vec<(String, Sort)> = Vec::new();
    let mut fun_vars: Vec<(String, Sort)> = Vec::new();
    for (name, sort) in vars {
        if let Sort::Arrow(..) = sort {
            fun_vars.push((name, sort));
        } else {
            explode_var(&name, &sort, &mut formula, &mut scalar_vars);
        }
    }
    let formula = formula.normalize();

    if !fun_vars.is_empty() {
        return Ok(bounded_function_verdict(&scalar_vars, &fun_vars, &formula, cfg));
    }

    // Exact path.
    let mut lowerer = Lowerer::new();
    let qf = match lowerer.lower_bool(&formula) {
        Ok(qf) => qf,
        Err(e) => return Ok(Verdict::Unknown(e.to_string())),
    };
    let mut prefix: Vec<(bool, VarId, Formula)> = Vec::new();
    for (name, sort) in &scalar_vars {
        let vid = lowerer.var_id(name);
        prefix.push((true, vid, domain_guard(sort, vid)));
    }
    let (inner_prefix, matrix) = prenex(qf);
    prefix.extend(inner_prefix);

    match decide_prefixed(&prefix, matrix, &cfg.limits) {
        Some(true) => Ok(Verdict::Valid),
        Some(false) => Ok(Verdict::Invalid(search_counterexample(
            &scalar_vars,
            &q.vars,
            q,
            cfg,
        ))),
        None => Ok(Verdict::Unknown("quantifier elimination exceeded limits".into())),
    }
}

/// Convenience wrapper for queries with no assumptions.
pub fn check_validity_closed(
    goal: &Refinement,
    cfg: &ValidityConfig,
) -> Result<Verdict, SortError> {
    check_validity_query(
        &ValidityQuery { vars: vec![], assumptions: vec![], goal: goal.clone() },
        cfg,
    )
}

fn explode_var(
    name: &str,
    sort: &Sort,
    formula: &mut Refinement,
    out: &mut Vec<(String, Sort)>,
) {
    match sort {
        Sort::Prod(a, b) => {
            let ln = format!("{name}#l");
            let rn = format!("{name}#r");
            *formula = formula.subst(
                name,
                &Refinement::pair(Refinement::var(ln.clone()), Refinement::var(rn.clone())),
            );
            explode_var(&ln, a, formula, out);
            explode_var(&rn, b, formula, out);
        }
        Sort::Unit => {
            *formula = formula.subst(name, &Refinement::Star);
        }
        _ => out.push((name.to_string(), sort.clone())),
    }
}

fn domain_guard(sort: &Sort, vid: VarId) -> Formula {
    match sort {
        // 0 <= v
        Sort::Nat | Sort::Param(_) => Formula::le(LinTerm::var(vid).scale(-1)),
        // 0 <= v <= 1
        Sort::Bool => Formula::and(vec![
            Formula::le(LinTerm::var(vid).scale(-1)),
            Formula::le(LinTerm::var(vid).add(&LinTerm::constant(-1))),
        ]),
        _ => Formula::True,
    }
}

// ---------------------------------------------------------------------------
// Lowering to the linear fragment

/// Quantified formula over lowered atoms.
enum Qf {
    F(Formula),
    And(Vec<Qf>),
    Or(Vec<Qf>),
    Not(Box<Qf>),
    Forall(VarId, Formula, Box<Qf>),
}

struct Lowerer {
    ids: BTreeMap<String, VarId>,
    next: VarId,
}

type Branches = Vec<(Vec<Formula>, LinTerm)>;

const MAX_BRANCHES: usize = 256;

impl Lowerer {
    fn new() -> Lowerer {
        Lowerer { ids: BTreeMap::new(), next: 0 }
    }

    fn var_id(&mut self, name: &str) -> VarId {
        if let Some(v) = self.ids.get(name) {
            return *v;
        }
        let v = self.next;
        self.next += 1;
        self.ids.insert(name.to_string(), v);
        v
    }

    fn lower_bool(&mut self, r: &Refinement) -> Result<Qf, LowerError> {
        use Refinement as R;
        match r {
            R::Top => Ok(Qf::F(Formula::True)),
            R::Var(x) => {
                let vid = self.var_id(x);
                // boolean variable encoded as v = 1
                Ok(Qf::F(Formula::eq_zero(
                    LinTerm::var(vid).add(&LinTerm::constant(-1)),
                )))
            }
            R::Not(a) => Ok(Qf::Not(Box::new(self.lower_bool(a)?))),
            R::And(a, b) => Ok(Qf::And(vec![self.lower_bool(a)?, self.lower_bool(b)?])),
            R::Le(a, b) | R::Lt(a, b) => {
                let strict = matches!(r, R::Lt(..));
                let la = self.lower_nat(a)?;
                let lb = self.lower_nat(b)?;
                Ok(Qf::F(combine_atom(&la, &lb, move |ta, tb| {
                    // a <= b  <=>  a - b <= 0 ; a < b  <=>  a - b + 1 <= 0
                    let mut t = ta.sub(tb);
                    if strict {
                        t.constant += 1;
                    }
                    Formula::le(t)
                })?))
            }
            R::Eq(a, b) => self.lower_eq(a, b),
            R::Ite(c, t, e) => {
                // boolean-sorted conditional
                let qc = self.lower_bool(c)?;
                let qt = self.lower_bool(t)?;
                let qe = self.lower_bool(e)?;
                let (nc, nt, ne) = (qf_to_formula(qc)?, qf_to_formula(qt)?, qf_to_formula(qe)?);
                Ok(Qf::F(Formula::or(vec![
                    Formula::and(vec![nc.clone(), nt]),
                    Formula::and(vec![Formula::not(nc), ne]),
                ])))
            }
            R::Forall(x, sort, body) => match sort {
                Sort::Nat | Sort::Param(_) | Sort::Bool => {
                    let vid = self.var_id(x);
                    let guard = domain_guard(sort, vid);
                    Ok(Qf::Forall(vid, guard, Box::new(self.lower_bool(body)?)))
                }
                Sort::Unit => self.lower_bool(&body.subst(x, &Refinement::Star)),
                Sort::Prod(..) => {
                    // exploded on the fly
                    let mut f = (**body).clone();
                    let mut comps = Vec::new();
                    explode_var(x, sort, &mut f, &mut comps);
                    let mut qf = self.lower_bool(&f.normalize())?;
                    for (name, s) in comps.into_iter().rev() {
                        let vid = self.var_id(&name);
                        qf = Qf::Forall(vid, domain_guard(&s, vid), Box::new(qf));
                    }
                    Ok(qf)
                }
                Sort::Arrow(..) => Err(LowerError::Unsupported(
                    "quantification over functions".into(),
                )),
            },
            other => Err(LowerError::Unsupported(other.to_string())),
        }
    }

    fn lower_eq(&mut self, a: &Refinement, b: &Refinement) -> Result<Qf, LowerError> {
        use Refinement as R;
        // structural equality on pairs splits componentwise
        if let (R::Pair(a1, a2), R::Pair(b1, b2)) = (a, b) {
            return Ok(Qf::And(vec![self.lower_eq(a1, b1)?, self.lower_eq(a2, b2)?]));
        }
        if matches!(a, R::Star) || matches!(b, R::Star) {
            return Ok(Qf::F(Formula::True));
        }
        // boolean equality when either side is manifestly boolean
        if is_boolish(a) || is_boolish(b) {
            let fa = qf_to_formula(self.lower_bool(a)?)?;
            let fb = qf_to_formula(self.lower_bool(b)?)?;
            return Ok(Qf::F(Formula::or(vec![
                Formula::and(vec![fa.clone(), fb.clone()]),
                Formula::and(vec![Formula::not(fa), Formula::not(fb)]),
            ])));
        }
        let la = self.lower_nat(a)?;
        let lb = self.lower_nat(b)?;
        Ok(Qf::F(combine_atom(&la, &lb, |ta, tb| {
            Formula::eq_zero(ta.sub(tb))
        })?))
    }

    /// Lower a numeric term to guarded linear branches.
    fn lower_nat(&mut self, r: &Refinement) -> Result<Branches, LowerError> {
        use Refinement as R;
        match r {
            R::Nat(n) => {
                let v = i64::try_from(*n)
                    .map_err(|_| LowerError::Unsupported("literal too large".into()))?;
                Ok(vec![(vec![], LinTerm::constant(v))])
            }
            R::Var(x) => {
                let vid = self.var_id(x);
                Ok(vec![(vec![], LinTerm::var(vid))])
            }
            R::Add(a, b) => {
                let la = self.lower_nat(a)?;
                let lb = self.lower_nat(b)?;
                product_branches(&la, &lb, |ta, tb| ta.add(tb))
            }
            R::Sub(a, b) => {
                // monus: the subtrahend saturates at zero
                let la = self.lower_nat(a)?;
                let lb = self.lower_nat(b)?;
                let mut out = Branches::new();
                for (ca, ta) in &la {
                    for (cb, tb) in &lb {
                        let diff = ta.sub(tb);
                        let mut conds_pos = ca.clone();
                        conds_pos.extend(cb.clone());
                        // b <= a: result a - b
                        conds_pos.push(Formula::le(tb.sub(ta)));
                        out.push((conds_pos, diff.clone()));
                        // a < b: result 0
                        let mut conds_zero = ca.clone();
                        conds_zero.extend(cb.clone());
                        let mut strict = ta.sub(tb);
                        strict.constant += 1;
                        conds_zero.push(Formula::le(strict));
                        out.push((conds_zero, LinTerm::constant(0)));
                    }
                }
                if out.len() > MAX_BRANCHES {
                    return Err(LowerError::BranchExplosion);
                }
                Ok(out)
            }
            R::Ite(c, t, e) => {
                let fc = qf_to_formula(self.lower_bool(c)?)?;
                let lt = self.lower_nat(t)?;
                let le = self.lower_nat(e)?;
                let mut out = Branches::new();
                for (cs, term) in lt {
                    let mut cs2 = cs;
                    cs2.push(fc.clone());
                    out.push((cs2, term));
                }
                for (cs, term) in le {
                    let mut cs2 = cs;
                    cs2.push(Formula::not(fc.clone()));
                    out.push((cs2, term));
                }
                if out.len() > MAX_BRANCHES {
                    return Err(LowerError::BranchExplosion);
                }
                Ok(out)
            }
            other => Err(LowerError::Unsupported(other.to_string())),
        }
    }
}

fn is_boolish(r: &Refinement) -> bool {
    use Refinement as R;
    matches!(
        r,
        R::Top | R::Not(_) | R::And(..) | R::Le(..) | R::Lt(..) | R::Eq(..) | R::Forall(..)
    )
}

fn product_branches(
    la: &Branches,
    lb: &Branches,
    mut f: impl FnMut(&LinTerm, &LinTerm) -> LinTerm,
) -> Result<Branches, LowerError> {
    let mut out = Branches::new();
    for (ca, ta) in la {
        for (cb, tb) in lb {
            let mut conds = ca.clone();
            conds.extend(cb.clone());
            out.push((conds, f(ta, tb)));
        }
    }
    if out.len() > MAX_BRANCHES {
        return Err(LowerError::BranchExplosion);
    }
    Ok(out)
}

/// Combine two branch sets into a single formula via an atom constructor:
/// the atom holds iff the branch conditions select terms satisfying it.
fn combine_atom(
    la: &Branches,
    lb: &Branches,
    mut atom: impl FnMut(&LinTerm, &LinTerm) -> Formula,
) -> Result<Formula, LowerError> {
    let mut cases = Vec::new();
    for (ca, ta) in la {
        for (cb, tb) in lb {
            let mut conds: Vec<Formula> = ca.clone();
            conds.extend(cb.clone());
            conds.push(atom(ta, tb));
            cases.push(Formula::and(conds));
        }
    }
    if cases.len() > MAX_BRANCHES {
        return Err(LowerError::BranchExplosion);
    }
    Ok(Formula::or(cases))
}

fn qf_to_formula(qf: Qf) -> Result<Formula, LowerError> {
    match qf {
        Qf::F(f) => Ok(f),
        Qf::Not(inner) => Ok(Formula::not(qf_to_formula(*inner)?)),
        Qf::And(items) => Ok(Formula::and(
            items.into_iter().map(qf_to_formula).collect::<Result<Vec<_>, _>>()?,
        )),
        Qf::Or(items) => Ok(Formula::or(
            items.into_iter().map(qf_to_formula).collect::<Result<Vec<_>, _>>()?,
        )),
        Qf::Forall(..) => Err(LowerError::Unsupported(
            "quantifier in term position".into(),
        )),
    }
}

/// Prenex a quantified formula: returns the prefix outermost-first and the
/// quantifier-free matrix. Variable ids are globally unique, so no renaming
/// is required when hoisting.
fn prenex(qf: Qf) -> (Vec<(bool, VarId, Formula)>, Formula) {
    fn go(qf: Qf, negate: bool, prefix: &mut Vec<(bool, VarId, Formula)>) -> Formula {
        match qf {
            Qf::F(f) => {
                if negate {
                    Formula::not(f)
                } else {
                    f
                }
            }
            Qf::Not(inner) => go(*inner, !negate, prefix),
            Qf::And(items) => {
                let parts: Vec<Formula> =
                    items.into_iter().map(|i| go(i, negate, prefix)).collect();
                if negate {
                    Formula::or(parts)
                } else {
                    Formula::and(parts)
                }
            }
            Qf::Or(items) => {
                let parts: Vec<Formula> =
                    items.into_iter().map(|i| go(i, negate, prefix)).collect();
                if negate {
                    Formula::and(parts)
                } else {
                    Formula::or(parts)
                }
            }
            Qf::Forall(v, guard, body) => {
                // under negation a universal becomes an existential
                prefix.push((!negate, v, guard));
                go(*body, negate, prefix)
            }
        }
    }
    let mut prefix = Vec::new();
    let matrix = go(qf, false, &mut prefix);
    (prefix, matrix)
}

/// Decide `Q1 v1. Q2 v2. ... matrix` with per-variable domain guards.
fn decide_prefixed(
    prefix: &[(bool, VarId, Formula)],
    matrix: Formula,
    limits: &Limits,
) -> Option<bool> {
    let mut cur = matrix;
    for (is_forall, v, guard) in prefix.iter().rev() {
        cur = if *is_forall {
            // forall v. guard => cur  ===  not exists v. guard and not cur
            let body = Formula::and(vec![guard.clone(), Formula::not(cur)]);
            Formula::not(cooper::eliminate_one(*v, body, limits)?)
        } else {
            cooper::eliminate_one(*v, Formula::and(vec![guard.clone(), cur]), limits)?
        };
    }
    cooper::eval_ground(&cur)
}

// ---------------------------------------------------------------------------
// Bounded fallback for function-sorted quantification

fn bounded_function_verdict(
    scalar_vars: &[(String, Sort)],
    fun_vars: &[(String, Sort)],
    formula: &Refinement,
    cfg: &ValidityConfig,
) -> Verdict {
    // Two sizes; a verdict that differs between them depends on the bound.
    // Pick the largest pair whose enumeration fits the work budget.
    let fits = |bound: u64| -> bool {
        let mut total: u64 = 1;
        for (_, sort) in fun_vars {
            let Some(n) = function_space_size(sort, bound) else {
                return false;
            };
            total = match total.checked_mul(n) {
                Some(t) => t,
                None => return false,
            };
        }
        total <= 500_000
    };
    let (lo, hi) = if fits(3) {
        (2, 3)
    } else if fits(2) {
        (1, 2)
    } else if fits(1) {
        (1, 1)
    } else {
        return Verdict::Unknown("function-space enumeration too large".into());
    };
    let small = enumerate_verdict(scalar_vars, fun_vars, formula, lo, cfg);
    let large = enumerate_verdict(scalar_vars, fun_vars, formula, hi, cfg);
    match (small, large) {
        (Some(a), Some(b)) if a == b => {
            if a {
                Verdict::Valid
            } else {
                // rerun to extract a witness environment
                match find_function_counterexample(scalar_vars, fun_vars, formula, 2, cfg) {
                    Some(env) => Verdict::Invalid(env),
                    None => Verdict::Invalid(BTreeMap::new()),
                }
            }
        }
        (Some(_), Some(_)) => {
            Verdict::Unknown("verdict depends on the function-space bound".into())
        }
        _ => Verdict::Unknown("function-space enumeration too large".into()),
    }
}

/// Enumerate all functions with domain and codomain bounded by `bound`
/// for the function variables, and all scalar points, and evaluate.
fn enumerate_verdict(
    scalar_vars: &[(String, Sort)],
    fun_vars: &[(String, Sort)],
    formula: &Refinement,
    bound: u64,
    cfg: &ValidityConfig,
) -> Option<bool> {
    let mut fun_spaces: Vec<(String, Vec<Den>)> = Vec::new();
    for (name, sort) in fun_vars {
        let space = enumerate_function_space(sort, bound)?;
        fun_spaces.push((name.clone(), space));
    }
    let scalar_domains: Vec<(String, Vec<Den>)> = scalar_vars
        .iter()
        .map(|(n, s)| Some((n.clone(), enumerate_sort(s, bound.min(cfg.domain_bound)).ok()?)))
        .collect::<Option<Vec<_>>>()?;

    let mut total: u64 = 1;
    for (_, sp) in &fun_spaces {
        total = total.checked_mul(sp.len() as u64)?;
    }
    for (_, d) in &scalar_domains {
        total = total.checked_mul(d.len() as u64)?;
    }
    if total > 500_000 {
        return None;
    }

    let mut all = true;
    let mut stack_env = RefinementEnv::with_bound(bound);
    enumerate_assignments(&fun_spaces, 0, &mut stack_env, &mut |env| {
        enumerate_assignments(&scalar_domains, 0, env, &mut |env2| {
            match eval_refinement(env2, formula) {
                Ok(Den::Bool(true)) => true,
                _ => {
                    all = false;
                    false
                }
            }
        })
    });
    Some(all)
}

fn find_function_counterexample(
    scalar_vars: &[(String, Sort)],
    fun_vars: &[(String, Sort)],
    formula: &Refinement,
    bound: u64,
    cfg: &ValidityConfig,
) -> Option<BTreeMap<String, Den>> {
    let mut fun_spaces: Vec<(String, Vec<Den>)> = Vec::new();
    for (name, sort) in fun_vars {
        fun_spaces.push((name.clone(), enumerate_function_space(sort, bound)?));
    }
    let scalar_domains: Vec<(String, Vec<Den>)> = scalar_vars
        .iter()
        .map(|(n, s)| Some((n.clone(), enumerate_sort(s, bound.min(cfg.domain_bound)).ok()?)))
        .collect::<Option<Vec<_>>>()?;
    let mut witness = None;
    let mut env = RefinementEnv::with_bound(bound);
    enumerate_assignments(&fun_spaces, 0, &mut env, &mut |env| {
        enumerate_assignments(&scalar_domains, 0, env, &mut |env2| {
            match eval_refinement(env2, formula) {
                Ok(Den::Bool(true)) => true,
                _ => {
                    witness = Some(env2.vars.clone());
                    false
                }
            }
        })
    });
    witness
}

/// Visit assignments of the given domains; the callback returns `false`
/// to stop the enumeration.
fn enumerate_assignments(
    domains: &[(String, Vec<Den>)],
    idx: usize,
    env: &mut RefinementEnv,
    visit: &mut impl FnMut(&mut RefinementEnv) -> bool,
) -> bool {
    if idx == domains.len() {
        return visit(env);
    }
    let (name, dens) = &domains[idx];
    for d in dens {
        env.vars.insert(name.clone(), d.clone());
        if !enumerate_assignments(domains, idx + 1, env, visit) {
            env.vars.remove(name);
            return false;
        }
    }
    env.vars.remove(name);
    true
}

fn function_space_size(sort: &Sort, bound: u64) -> Option<u64> {
    let Sort::Arrow(dom, cod) = sort else {
        return None;
    };
    let points = enumerate_sort(dom, bound).ok()?.len() as u64;
    let values = enumerate_sort(cod, bound).ok()?.len() as u64;
    let total = values.checked_pow(u32::try_from(points).ok()?)?;
    if total > 500_000 {
        None
    } else {
        Some(total)
    }
}

/// All functions from the bounded domain of `dom` to the bounded codomain.
fn enumerate_function_space(sort: &Sort, bound: u64) -> Option<Vec<Den>> {
    let Sort::Arrow(dom, cod) = sort else {
        return None;
    };
    let points = enumerate_sort(dom, bound).ok()?;
    let values = enumerate_sort(cod, bound).ok()?;
    let total = (values.len() as u64).checked_pow(points.len() as u32)?;
    if total > 100_000 {
        return None;
    }
    // A function is a table; encode as a closure whose body is a nested
    // conditional over the domain points.
    let mut out = Vec::with_capacity(total as usize);
    let mut table = vec![0usize; points.len()];
    loop {
        out.push(table_closure(&points, &table, &values, dom));
        // odometer increment
        let mut i = 0;
        loop {
            if i == table.len() {
                return Some(out);
            }
            table[i] += 1;
            if table[i] < values.len() {
                break;
            }
            table[i] = 0;
            i += 1;
        }
    }
}

fn table_closure(points: &[Den], table: &[usize], values: &[Den], dom: &Sort) -> Den {
    // Build ite(x = p0, v0, ite(x = p1, v1, ... default))
    let x = "x#tab";
    let mut body = den_to_refinement(&values[*table.last().unwrap_or(&0)]);
    for (i, p) in points.iter().enumerate().rev().skip(1) {
        body = Refinement::ite(
            Refinement::eq(Refinement::var(x), den_to_refinement(p)),
            den_to_refinement(&values[table[i]]),
            body,
        );
    }
    Den::Fun(super::eval::Closure {
        params: vec![(x.to_string(), dom.clone())],
        body,
        env: BTreeMap::new(),
    })
}

fn den_to_refinement(d: &Den) -> Refinement {
    match d {
        Den::Bool(true) => Refinement::Top,
        Den::Bool(false) => Refinement::ff(),
        Den::Nat(n) => Refinement::Nat(*n),
        Den::Star => Refinement::Star,
        Den::Pair(a, b) => Refinement::pair(den_to_refinement(a), den_to_refinement(b)),
        Den::Fun(_) => panic!("cannot reify a closure"),
    }
}

// ---------------------------------------------------------------------------
// Counterexample search over the bounded scalar domain

fn search_counterexample(
    scalar_vars: &[(String, Sort)],
    original_vars: &[(String, Sort)],
    q: &ValidityQuery,
    cfg: &ValidityConfig,
) -> BTreeMap<String, Den> {
    let _ = scalar_vars;
    let domains: Vec<(String, Vec<Den>)> = match original_vars
        .iter()
        .map(|(n, s)| Some((n.clone(), enumerate_sort(s, cfg.domain_bound).ok()?)))
        .collect::<Option<Vec<_>>>()
    {
        Some(d) => d,
        None => return BTreeMap::new(),
    };
    let mut count: u64 = 1;
    for (_, d) in &domains {
        count = count.saturating_mul(d.len() as u64);
        if count > 2_000_000 {
            return BTreeMap::new();
        }
    }
    let formula = Refinement::implies(
        Refinement::conj(q.assumptions.clone()),
        q.goal.clone(),
    );
    let mut witness = BTreeMap::new();
    let mut env = RefinementEnv::with_bound(cfg.domain_bound);
    enumerate_assignments(&domains, 0, &mut env, &mut |env2| {
        match eval_refinement(env2, &formula) {
            Ok(Den::Bool(true)) => true,
            Ok(Den::Bool(false)) => {
                witness = env2.vars.clone();
                false
            }
            _ => true,
        }
    });
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::refinement::Refinement as R;

    fn cfg() -> ValidityConfig {
        ValidityConfig::default()
    }

    #[test]
    fn top_is_valid_in_any_context() {
        let q = ValidityQuery {
            vars: vec![("x".into(), Sort::Nat)],
            assumptions: vec![],
            goal: R::Top,
        };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
    }

    #[test]
    fn bottom_is_invalid_in_empty_context() {
        let q = ValidityQuery { vars: vec![], assumptions: vec![], goal: R::ff() };
        assert!(matches!(
            check_validity_query(&q, &cfg()).unwrap(),
            Verdict::Invalid(_)
        ));
    }

    #[test]
    fn conditional_under_path_constraint() {
        // y:nat, h:nat, b:bool with b = (y > h), path b |= ite(y > h, 1, 0) = 1
        let b_def = R::eq(R::var("b"), R::gt(R::var("y"), R::var("h")));
        let q = ValidityQuery {
            vars: vec![
                ("y".into(), Sort::Nat),
                ("h".into(), Sort::Nat),
                ("b".into(), Sort::Bool),
            ],
            assumptions: vec![b_def, R::var("b")],
            goal: R::eq(
                R::ite(R::gt(R::var("y"), R::var("h")), R::Nat(1), R::Nat(0)),
                R::Nat(1),
            ),
        };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
    }

    #[test]
    fn finds_small_counterexample() {
        // x <= 3 is not valid for all naturals
        let q = ValidityQuery {
            vars: vec![("x".into(), Sort::Nat)],
            assumptions: vec![],
            goal: R::le(R::var("x"), R::Nat(3)),
        };
        match check_validity_query(&q, &cfg()).unwrap() {
            Verdict::Invalid(env) => {
                assert_eq!(env.get("x"), Some(&Den::Nat(4)));
            }
            v => panic!("expected Invalid, got {v:?}"),
        }
    }

    #[test]
    fn unbounded_validity_beyond_enumeration() {
        // x + 1 > x holds for all naturals, not just the first 17
        let q = ValidityQuery {
            vars: vec![("x".into(), Sort::Nat)],
            assumptions: vec![],
            goal: R::gt(R::add(R::var("x"), R::Nat(1)), R::var("x")),
        };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
    }

    #[test]
    fn monus_is_guarded_subtraction() {
        // forall x. 1 <= x => (x - 1) + 1 = x
        let q = ValidityQuery {
            vars: vec![("x".into(), Sort::Nat)],
            assumptions: vec![R::le(R::Nat(1), R::var("x"))],
            goal: R::eq(
                R::add(R::sub(R::var("x"), R::Nat(1)), R::Nat(1)),
                R::var("x"),
            ),
        };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
        // without the guard, monus breaks the identity at x = 0
        let q2 = ValidityQuery {
            vars: vec![("x".into(), Sort::Nat)],
            assumptions: vec![],
            goal: R::eq(
                R::add(R::sub(R::var("x"), R::Nat(1)), R::Nat(1)),
                R::var("x"),
            ),
        };
        assert!(matches!(
            check_validity_query(&q2, &cfg()).unwrap(),
            Verdict::Invalid(_)
        ));
    }

    #[test]
    fn inner_universal_quantifier() {
        // forall q:Nat. (forall a:Nat. a + q >= a) — prenexed and decided
        let inner = R::forall(
            "a",
            Sort::Nat,
            R::ge(R::add(R::var("a"), R::var("q")), R::var("a")),
        );
        let q = ValidityQuery {
            vars: vec![("q".into(), Sort::Nat)],
            assumptions: vec![],
            goal: inner,
        };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
    }

    #[test]
    fn product_sorted_quantifier_splits() {
        // forall p:Nat*Nat. p.l + p.r >= p.l
        let goal = R::forall(
            "p",
            Sort::prod(Sort::Nat, Sort::Nat),
            R::ge(
                R::add(R::projl(R::var("p")), R::projr(R::var("p"))),
                R::projl(R::var("p")),
            ),
        );
        let q = ValidityQuery { vars: vec![], assumptions: vec![], goal };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
    }

    #[test]
    fn function_quantification_pointwise_sum() {
        // forall f g h : Nat => Nat.
        //   (forall a. f(a) = g(a) + h(a)) => (forall a. g(a) <= f(a))
        let fs = Sort::arrow(Sort::Nat, Sort::Nat);
        let hyp = R::forall(
            "a",
            Sort::Nat,
            R::eq(
                R::app(R::var("f"), vec![R::var("a")]),
                R::add(
                    R::app(R::var("g"), vec![R::var("a")]),
                    R::app(R::var("h"), vec![R::var("a")]),
                ),
            ),
        );
        let goal = R::forall(
            "a",
            Sort::Nat,
            R::le(
                R::app(R::var("g"), vec![R::var("a")]),
                R::app(R::var("f"), vec![R::var("a")]),
            ),
        );
        let q = ValidityQuery {
            vars: vec![("f".into(), fs.clone()), ("g".into(), fs.clone()), ("h".into(), fs)],
            assumptions: vec![hyp],
            goal,
        };
        assert_eq!(check_validity_query(&q, &cfg()).unwrap(), Verdict::Valid);
    }

    #[test]
    fn function_quantification_detects_invalid() {
        // forall f : Nat => Nat. forall a. f(a) <= 1 is refutable
        let fs = Sort::arrow(Sort::Nat, Sort::Nat);
        let goal = R::forall(
            "a",
            Sort::Nat,
            R::le(R::app(R::var("f"), vec![R::var("a")]), R::Nat(1)),
        );
        let q = ValidityQuery { vars: vec![("f".into(), fs)], assumptions: vec![], goal };
        assert!(matches!(
            check_validity_query(&q, &cfg()).unwrap(),
            Verdict::Invalid(_)
        ));
    }
}
