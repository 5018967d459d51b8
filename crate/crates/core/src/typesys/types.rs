//! The four-layer type hierarchy: base types, subset types, dependent
//! arrows with multiplicities, resource-annotated types, and polymorphic
//! schemas.

use crate::logic::{Refinement, Sort};
use crate::potential::InductiveSignature;
use std::fmt;
use std::rc::Rc;

/// Multiplicity: an upper bound on uses, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mult {
    Fin(u64),
    Inf,
}

impl Mult {
    pub fn add(self, other: Mult) -> Mult {
        match (self, other) {
            (Mult::Inf, _) | (_, Mult::Inf) => Mult::Inf,
            (Mult::Fin(a), Mult::Fin(b)) => Mult::Fin(a + b),
        }
    }

    pub fn mul(self, other: Mult) -> Mult {
        match (self, other) {
            (Mult::Fin(0), _) | (_, Mult::Fin(0)) => Mult::Fin(0),
            (Mult::Inf, _) | (_, Mult::Inf) => Mult::Inf,
            (Mult::Fin(a), Mult::Fin(b)) => Mult::Fin(a * b),
        }
    }

    pub fn ge(self, other: Mult) -> bool {
        match (self, other) {
            (Mult::Inf, _) => true,
            (Mult::Fin(_), Mult::Inf) => false,
            (Mult::Fin(a), Mult::Fin(b)) => a >= b,
        }
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Fin(m) => write!(f, "{m}"),
            Mult::Inf => write!(f, "inf"),
        }
    }
}

/// An annotated inductive datatype instance: a signature together with an
/// element-type instantiation (for polymorphic library types) and concrete
/// annotation terms, one per logic-level parameter.
#[derive(Debug, Clone)]
pub struct DataType {
    pub sig: Rc<InductiveSignature>,
    pub elem: Option<Box<AnnotatedType>>,
    pub theta: Vec<Refinement>,
}

impl PartialEq for DataType {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.sig, &other.sig) || self.sig.name == other.sig.name
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BaseType {
    Nat,
    Bool,
    Unit,
    Prod(Box<BaseType>, Box<BaseType>),
    Data(DataType),
    /// Multiplicity-tagged type variable `m * alpha`.
    TVar { mult: Mult, name: String },
}

impl BaseType {
    pub fn tvar(name: impl Into<String>) -> BaseType {
        BaseType::TVar { mult: Mult::Fin(1), name: name.into() }
    }

    pub fn prod(a: BaseType, b: BaseType) -> BaseType {
        BaseType::Prod(Box::new(a), Box::new(b))
    }
}

/// Refinement types: subset types and dependent arrows.
#[derive(Debug, Clone, PartialEq)]
pub enum RefinedType {
    Subset { base: BaseType, refinement: Refinement },
    Arrow { param: String, dom: Box<AnnotatedType>, cod: Box<AnnotatedType>, mult: Mult },
}

/// A refinement type carrying a potential annotation: `R^phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedType {
    pub shape: RefinedType,
    pub potential: Refinement,
}

impl AnnotatedType {
    /// `{B | true}^0`
    pub fn base(base: BaseType) -> AnnotatedType {
        AnnotatedType {
            shape: RefinedType::Subset { base, refinement: Refinement::Top },
            potential: Refinement::Nat(0),
        }
    }

    /// `{B | psi}^0`
    pub fn subset(base: BaseType, refinement: Refinement) -> AnnotatedType {
        AnnotatedType {
            shape: RefinedType::Subset { base, refinement },
            potential: Refinement::Nat(0),
        }
    }

    pub fn with_potential(mut self, phi: Refinement) -> AnnotatedType {
        self.potential = phi;
        self
    }

    /// Add to the existing annotation, normalizing away zeros.
    pub fn add_potential(mut self, phi: Refinement) -> AnnotatedType {
        self.potential = Refinement::add(self.potential, phi).normalize();
        self
    }

    pub fn arrow(
        param: impl Into<String>,
        dom: AnnotatedType,
        cod: AnnotatedType,
    ) -> AnnotatedType {
        AnnotatedType {
            shape: RefinedType::Arrow {
                param: param.into(),
                dom: Box::new(dom),
                cod: Box::new(cod),
                mult: Mult::Inf,
            },
            potential: Refinement::Nat(0),
        }
    }

    pub fn nat() -> AnnotatedType {
        AnnotatedType::base(BaseType::Nat)
    }

    pub fn bool_() -> AnnotatedType {
        AnnotatedType::base(BaseType::Bool)
    }

    pub fn unit() -> AnnotatedType {
        AnnotatedType::base(BaseType::Unit)
    }

    pub fn tvar(name: impl Into<String>) -> AnnotatedType {
        AnnotatedType::base(BaseType::tvar(name))
    }

    pub fn data(dt: DataType) -> AnnotatedType {
        AnnotatedType::base(BaseType::Data(dt))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self.shape, RefinedType::Arrow { .. })
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self.shape, RefinedType::Subset { .. })
    }

    pub fn as_subset(&self) -> Option<(&BaseType, &Refinement)> {
        match &self.shape {
            RefinedType::Subset { base, refinement } => Some((base, refinement)),
            RefinedType::Arrow { .. } => None,
        }
    }
}

/// A possibly polymorphic type schema; quantifiers only appear outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub tvars: Vec<String>,
    pub body: AnnotatedType,
}

impl Schema {
    pub fn mono(body: AnnotatedType) -> Schema {
        Schema { tvars: vec![], body }
    }

    pub fn poly(tvars: Vec<String>, body: AnnotatedType) -> Schema {
        Schema { tvars, body }
    }

    pub fn is_mono(&self) -> bool {
        self.tvars.is_empty()
    }
}

/// The base-type-to-sort reflection `B ~> Delta`.
pub fn base_sort(b: &BaseType) -> Sort {
    match b {
        BaseType::Nat => Sort::Nat,
        BaseType::Bool => Sort::Bool,
        BaseType::Unit => Sort::Unit,
        BaseType::Prod(a, c) => Sort::prod(base_sort(a), base_sort(c)),
        BaseType::Data(dt) => dt.sig.measure_sort.clone(),
        BaseType::TVar { name, .. } => Sort::Param(name.clone()),
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseType::Nat => write!(f, "Nat"),
            BaseType::Bool => write!(f, "Bool"),
            BaseType::Unit => write!(f, "Unit"),
            BaseType::Prod(a, b) => write!(f, "({a}, {b})"),
            BaseType::Data(dt) => {
                write!(f, "{}", dt.sig.name)?;
                if let Some(e) = &dt.elem {
                    write!(f, " {e}")?;
                }
                if !dt.theta.is_empty() {
                    write!(f, " <")?;
                    for (i, t) in dt.theta.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{t}")?;
                    }
                    write!(f, ">")?;
                }
                Ok(())
            }
            BaseType::TVar { mult, name } => {
                if *mult == Mult::Fin(1) {
                    write!(f, "{name}")
                } else {
                    write!(f, "{mult}*{name}")
                }
            }
        }
    }
}

impl fmt::Display for AnnotatedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            RefinedType::Subset { base, refinement } => {
                if refinement.is_top() {
                    write!(f, "{base}")?;
                } else {
                    write!(f, "{{{base} | {refinement}}}")?;
                }
            }
            RefinedType::Arrow { param, dom, cod, mult } => {
                write!(f, "({param}:{dom} ->")?;
                if *mult != Mult::Inf {
                    write!(f, "/{mult}")?;
                }
                write!(f, " {cod})")?;
            }
        }
        if !self.potential.is_zero() {
            write!(f, "^{{{}}}", self.potential)?;
        }
        Ok(())
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.tvars {
            write!(f, "forall {a}. ")?;
        }
        write!(f, "{}", self.body)
    }
}
