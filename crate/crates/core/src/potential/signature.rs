//! Inductive datatype signatures: constructors with content types and
//! arities, a measure deriving the datatype's interpretation, an
//! extraction operator releasing free potential at matches, a shift
//! operator producing child annotations, and per-child element-potential
//! increments for polymorphic instances.

use crate::logic::{Refinement, Sort, SortCtx, SortError};
use crate::typesys::types::AnnotatedType;
use std::collections::BTreeMap;
use std::rc::Rc;
use thiserror::Error;

/// Slot variable standing for the interpretation of the stored content.
pub const CONTENT_SLOT: &str = "#y";

/// Slot variable standing for the measure of the `i`-th child (0-based).
pub fn child_slot(i: usize) -> String {
    format!("#k{i}")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignatureError {
    #[error("unknown constructor `{0}`")]
    UnknownConstructor(String),
    #[error("constructor `{ctor}` expects {expected} children, got {got}")]
    ArityMismatch { ctor: String, expected: usize, got: usize },
    #[error("annotation arity mismatch: {expected} logic parameters, got {got}")]
    ThetaArity { expected: usize, got: usize },
    #[error(transparent)]
    Sort(#[from] SortError),
}

/// Per-constructor signature. Operator components are stored as templates
/// over the slot variables plus the datatype's logic parameter names;
/// applying an operator substitutes the slots and normalizes.
#[derive(Debug, Clone)]
pub struct CtorSig {
    pub name: String,
    /// Content type; must be scalar. May mention the element parameter.
    pub content: AnnotatedType,
    pub arity: usize,
    /// Measure component over `{#y, #k0..}`, of the measure sort.
    pub measure: Refinement,
    /// Extraction component over `{#y, logic params}`, of sort `Nat`.
    pub extract: Refinement,
    /// Shift components: `shift[i][p]` gives child `i`'s term for logic
    /// parameter `p`, over `{#y, logic params}`.
    pub shift: Vec<Vec<Refinement>>,
    /// Element-potential increments per child, over `{#y, logic params,
    /// _v}` where `_v` ranges over the child's elements.
    pub elem_bumps: Vec<Refinement>,
}

impl CtorSig {
    /// A constructor whose children inherit the annotations unchanged and
    /// which releases no potential.
    pub fn plain(
        name: impl Into<String>,
        content: AnnotatedType,
        arity: usize,
        logic_params: &[(String, Sort)],
    ) -> CtorSig {
        let pass_through: Vec<Refinement> = logic_params
            .iter()
            .map(|(p, _)| Refinement::var(p.clone()))
            .collect();
        CtorSig {
            name: name.into(),
            content,
            arity,
            measure: Refinement::Nat(0),
            extract: Refinement::Nat(0),
            shift: vec![pass_through; arity],
            elem_bumps: vec![Refinement::Nat(0); arity],
        }
    }

    pub fn with_measure(mut self, tpl: Refinement) -> CtorSig {
        self.measure = tpl;
        self
    }

    pub fn with_extract(mut self, tpl: Refinement) -> CtorSig {
        self.extract = tpl;
        self
    }

    pub fn with_shift(mut self, shift: Vec<Vec<Refinement>>) -> CtorSig {
        assert_eq!(shift.len(), self.arity);
        self.shift = shift;
        self
    }

    pub fn with_elem_bumps(mut self, bumps: Vec<Refinement>) -> CtorSig {
        assert_eq!(bumps.len(), self.arity);
        self.elem_bumps = bumps;
        self
    }
}

/// A user-declared inductive datatype, elaborated.
#[derive(Debug, Clone)]
pub struct InductiveSignature {
    pub name: String,
    /// Optional element type parameter for polymorphic library types.
    pub elem_param: Option<String>,
    /// Logic-level parameters; the annotation sort is their product.
    pub logic_params: Vec<(String, Sort)>,
    /// Sort of the measure interpretation.
    pub measure_sort: Sort,
    pub ctors: Vec<CtorSig>,
}

impl InductiveSignature {
    pub fn theta_sorts(&self) -> Vec<Sort> {
        self.logic_params.iter().map(|(_, s)| s.clone()).collect()
    }

    pub fn theta_sort(&self) -> Sort {
        Sort::tuple(&self.theta_sorts())
    }

    pub fn index_of(&self, ctor: &str) -> Result<usize, SignatureError> {
        self.ctors
            .iter()
            .position(|c| c.name == ctor)
            .ok_or_else(|| SignatureError::UnknownConstructor(ctor.to_string()))
    }

    /// True when some operator embeds potential not expressed through the
    /// logic parameters; such datatypes cannot be scaled by a multiplicity.
    pub fn has_intrinsic_potential(&self) -> bool {
        let param_free = |t: &Refinement| {
            !t.is_zero()
                && !self
                    .logic_params
                    .iter()
                    .any(|(p, _)| t.free_vars().contains(p))
        };
        self.ctors.iter().any(|c| {
            param_free(&c.extract)
                || c.elem_bumps.iter().any(param_free)
                || c.content
                    .as_subset()
                    .map(|_| param_free(&c.content.potential))
                    .unwrap_or(false)
        })
    }

    pub fn ctor(&self, j: usize) -> &CtorSig {
        &self.ctors[j]
    }

    /// The content sort of constructor `j` under the reflection, with the
    /// element parameter reflected as its uninterpreted sort.
    pub fn content_sort(&self, j: usize) -> Sort {
        let (base, _) = self.ctors[j]
            .content
            .as_subset()
            .expect("constructor content must be scalar");
        crate::typesys::types::base_sort(base)
    }

    fn check_theta(&self, theta: &[Refinement]) -> Result<(), SignatureError> {
        if theta.len() != self.logic_params.len() {
            return Err(SignatureError::ThetaArity {
                expected: self.logic_params.len(),
                got: theta.len(),
            });
        }
        Ok(())
    }

    fn op_subst(
        &self,
        content_ref: &Refinement,
        theta: &[Refinement],
    ) -> BTreeMap<String, Refinement> {
        let mut map = BTreeMap::new();
        map.insert(CONTENT_SLOT.to_string(), content_ref.clone());
        for ((p, _), t) in self.logic_params.iter().zip(theta) {
            map.insert(p.clone(), t.clone());
        }
        map
    }

    /// `pi.j(content)(theta)`: the free potential the constructor's head
    /// contributes, beta-reduced.
    pub fn extract_constructor_potential(
        &self,
        j: usize,
        content_ref: &Refinement,
        theta: &[Refinement],
    ) -> Result<Refinement, SignatureError> {
        self.check_theta(theta)?;
        let map = self.op_subst(content_ref, theta);
        Ok(self.ctors[j].extract.subst_map(&map).normalize())
    }

    /// `lhd.j(content)(theta)`: the annotations passed to each child,
    /// beta-reduced; one vector of parameter terms per child.
    pub fn shift_children(
        &self,
        j: usize,
        content_ref: &Refinement,
        theta: &[Refinement],
    ) -> Result<Vec<Vec<Refinement>>, SignatureError> {
        self.check_theta(theta)?;
        let map = self.op_subst(content_ref, theta);
        Ok(self.ctors[j]
            .shift
            .iter()
            .map(|per_child| {
                per_child.iter().map(|t| t.subst_map(&map).normalize()).collect()
            })
            .collect())
    }

    /// Element-potential increment for child `i`, as a term with the free
    /// value variable ranging over the child's elements.
    pub fn elem_bump(
        &self,
        j: usize,
        i: usize,
        content_ref: &Refinement,
        theta: &[Refinement],
    ) -> Result<Refinement, SignatureError> {
        self.check_theta(theta)?;
        let map = self.op_subst(content_ref, theta);
        Ok(self.ctors[j].elem_bumps[i].subst_map(&map).normalize())
    }

    /// `mu.j(content)(k0, .., km-1)`, beta-reduced; symbolic arguments are
    /// allowed, which is how match path constraints are built.
    pub fn measure_apply(
        &self,
        j: usize,
        content_ref: &Refinement,
        child_measures: &[Refinement],
    ) -> Result<Refinement, SignatureError> {
        let c = &self.ctors[j];
        if child_measures.len() != c.arity {
            return Err(SignatureError::ArityMismatch {
                ctor: c.name.clone(),
                expected: c.arity,
                got: child_measures.len(),
            });
        }
        let mut map = BTreeMap::new();
        map.insert(CONTENT_SLOT.to_string(), content_ref.clone());
        for (i, k) in child_measures.iter().enumerate() {
            map.insert(child_slot(i), k.clone());
        }
        Ok(c.measure.subst_map(&map).normalize())
    }

    /// Well-sortedness of the operator templates against the declared
    /// sorts; the sorting premises of datatype well-formedness.
    pub fn check_operator_sorts(&self) -> Result<(), SignatureError> {
        for (j, c) in self.ctors.iter().enumerate() {
            let content_sort = self.content_sort(j);
            let mut ctx = SortCtx::new();
            ctx.bind_mut(CONTENT_SLOT, content_sort.clone());
            for (p, s) in &self.logic_params {
                ctx.bind_mut(p.clone(), s.clone());
            }
            // extract: Nat
            let s = crate::logic::sort_of(&ctx, &c.extract)?;
            if s != Sort::Nat {
                return Err(SortError::Mismatch {
                    term: c.extract.to_string(),
                    expected: "Nat".into(),
                    found: s.to_string(),
                }
                .into());
            }
            // shift: per child, per logic param, the parameter's sort
            for per_child in &c.shift {
                if per_child.len() != self.logic_params.len() {
                    return Err(SignatureError::ThetaArity {
                        expected: self.logic_params.len(),
                        got: per_child.len(),
                    });
                }
                for ((_, want), tpl) in self.logic_params.iter().zip(per_child) {
                    let got = crate::logic::sort_of(&ctx, tpl)?;
                    if got != *want {
                        return Err(SortError::Mismatch {
                            term: tpl.to_string(),
                            expected: want.to_string(),
                            found: got.to_string(),
                        }
                        .into());
                    }
                }
            }
            // elem bumps: Nat, with _v of the element sort
            if let Some(alpha) = &self.elem_param {
                let ectx = ctx.bind(crate::logic::NU, Sort::Param(alpha.clone()));
                for b in &c.elem_bumps {
                    let got = crate::logic::sort_of(&ectx, b)?;
                    if got != Sort::Nat {
                        return Err(SortError::Mismatch {
                            term: b.to_string(),
                            expected: "Nat".into(),
                            found: got.to_string(),
                        }
                        .into());
                    }
                }
            }
            // measure: measure sort, child slots at the measure sort
            let mut mctx = SortCtx::new();
            mctx.bind_mut(CONTENT_SLOT, content_sort);
            for i in 0..c.arity {
                mctx.bind_mut(child_slot(i), self.measure_sort.clone());
            }
            let got = crate::logic::sort_of(&mctx, &c.measure)?;
            if got != self.measure_sort {
                return Err(SortError::Mismatch {
                    term: c.measure.to_string(),
                    expected: self.measure_sort.to_string(),
                    found: got.to_string(),
                }
                .into());
            }
        }
        Ok(())
    }
}

/// Registry of elaborated signatures, indexed by datatype and constructor.
#[derive(Debug, Clone, Default)]
pub struct SigTable {
    by_name: BTreeMap<String, Rc<InductiveSignature>>,
    by_ctor: BTreeMap<String, (Rc<InductiveSignature>, usize)>,
}

impl SigTable {
    pub fn new() -> SigTable {
        SigTable::default()
    }

    pub fn insert(&mut self, sig: Rc<InductiveSignature>) {
        for (j, c) in sig.ctors.iter().enumerate() {
            self.by_ctor.insert(c.name.clone(), (sig.clone(), j));
        }
        self.by_name.insert(sig.name.clone(), sig);
    }

    pub fn datatype(&self, name: &str) -> Option<&Rc<InductiveSignature>> {
        self.by_name.get(name)
    }

    pub fn ctor(&self, name: &str) -> Option<(&Rc<InductiveSignature>, usize)> {
        self.by_ctor.get(name).map(|(s, j)| (s, *j))
    }

    pub fn contains_ctor(&self, name: &str) -> bool {
        self.by_ctor.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rc<InductiveSignature>> {
        self.by_name.values()
    }
}
