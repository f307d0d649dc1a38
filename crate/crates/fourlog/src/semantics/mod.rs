//! Herbrand valuations and the structural evaluator, m-extensions of virtual
//! predicates, intensional concepts and the extensionalization map.

mod eval;
mod relation;

pub use eval::{evaluate, extension, var_range, EvalCtx};
pub use relation::{ext_equiv, ext_leq, MRelation, RelationError};

use std::collections::BTreeMap;
use std::fmt;

use crate::bilattice::TruthValue;
use crate::syntax::{
    free_vars, mk_abs, print, print_term, Atom, Formula, Name, Term, VarName, PRED_ID,
    PRED_ID_IN, PRED_KNOW, PRED_TRUTH,
};

/// The built-in time tags accepted as Know arguments.
pub const TIME_TAGS: [&str; 3] = ["in-present", "in-past", "in-future"];

/// The reserved subject constant for the reasoning agent itself.
pub const SELF_CONSTANT: &str = "me";

/// The reserved canonical non-meaning constant.
pub const NON_MEANING_CONSTANT: &str = "nonmeaning";

/// An element of the interpretation domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DomainElement {
    /// A declared individual or time tag, identified by its constant name.
    Individual(Name),
    /// One of the four truth values, present in the domain by construction.
    Truth(TruthValue),
    /// A non-meaning referent; the constant name is kept for display only,
    /// every such element denotes the same failed reference.
    NonMeaning(Name),
    /// An intensional concept (a reified formula).
    Concept(ConceptRef),
}

impl fmt::Display for DomainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainElement::Individual(n) | DomainElement::NonMeaning(n) => f.write_str(n),
            DomainElement::Truth(v) => write!(f, "{v}"),
            DomainElement::Concept(c) => f.write_str(&c.canon),
        }
    }
}

/// An intensional concept: the reification of a formula with its hidden
/// variables. Degree 1 concepts reify sentences (L-concepts); degree `n + 1`
/// concepts reify virtual predicates with `n` relation slots.
///
/// Identity is the canonical printed form; the parsed body rides along so the
/// concept can be evaluated without reparsing.
#[derive(Debug, Clone)]
pub struct ConceptRef {
    pub canon: String,
    pub degree: usize,
    pub body: Formula,
    pub hidden: Vec<VarName>,
}

impl ConceptRef {
    /// Concept of an abstraction with no unassigned visible variables.
    pub fn from_closed_abs(body: Formula, hidden: Vec<VarName>) -> Self {
        let canon = print_term(&Term::Abs(crate::syntax::AbsTerm {
            body: Box::new(body.clone()),
            hidden: hidden.clone(),
            visible: Vec::new(),
        }));
        Self {
            canon,
            degree: hidden.len() + 1,
            body,
            hidden,
        }
    }

    /// The reified sentence, for degree-1 concepts.
    pub fn sentence(&self) -> Option<&Formula> {
        if self.degree == 1 {
            Some(&self.body)
        } else {
            None
        }
    }
}

impl PartialEq for ConceptRef {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}
impl Eq for ConceptRef {}
impl PartialOrd for ConceptRef {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ConceptRef {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canon.cmp(&other.canon)
    }
}

/// Sort-like partition of the single unsorted domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ElemKind {
    Individual,
    Time,
    NonMeaning,
    /// Degree-1 concepts (reified sentences).
    Sentence,
    /// Concepts of degree two or more.
    Concept,
    Truth,
    Any,
}

impl ElemKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "individual" => ElemKind::Individual,
            "time" => ElemKind::Time,
            "nonmeaning" => ElemKind::NonMeaning,
            "sentence" => ElemKind::Sentence,
            "concept" => ElemKind::Concept,
            "truth" => ElemKind::Truth,
            "any" => ElemKind::Any,
            _ => return None,
        })
    }

    pub fn matches(self, element: &DomainElement) -> bool {
        match (self, element) {
            (ElemKind::Any, _) => true,
            // a failed reference passes any sort; the atom will evaluate to
            // bot regardless
            (_, DomainElement::NonMeaning(_)) => true,
            (ElemKind::Truth, DomainElement::Truth(_)) => true,
            (ElemKind::Sentence, DomainElement::Concept(c)) => c.degree == 1,
            (ElemKind::Concept, DomainElement::Concept(c)) => c.degree >= 2,
            // Individual/Time are told apart by the ontology, not the element
            (ElemKind::Individual | ElemKind::Time, DomainElement::Individual(_)) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ElemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElemKind::Individual => "individual",
            ElemKind::Time => "time",
            ElemKind::NonMeaning => "nonmeaning",
            ElemKind::Sentence => "sentence",
            ElemKind::Concept => "concept",
            ElemKind::Truth => "truth",
            ElemKind::Any => "any",
        })
    }
}

/// A declared predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredDecl {
    pub arity: usize,
    pub sig: Option<Vec<ElemKind>>,
}

/// Declared constants and predicates: the finite, named part of the domain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Ontology {
    constants: BTreeMap<Name, (DomainElement, ElemKind)>,
    preds: BTreeMap<Name, PredDecl>,
}

/// Errors raised while declaring or resolving symbols and while evaluating.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(Name),
    #[error("unknown constant `{0}`")]
    UnknownConstant(Name),
    #[error("`{0}` is a reserved name")]
    ReservedName(Name),
    #[error("`{name}` is already declared with a different {what}")]
    Redeclared { name: Name, what: &'static str },
    #[error("predicate `{pred}` expects {expected} arguments, got {got}")]
    ArityMismatch { pred: Name, expected: usize, got: usize },
    #[error("argument {pos} of `{pred}` must be of kind {expected}, got `{got}`")]
    KindMismatch { pred: Name, pos: usize, expected: ElemKind, got: String },
    #[error("no binding for free variable {0}")]
    UnboundVariable(VarName),
    #[error("formula is not closed under the given assignment")]
    NotClosed,
    #[error("reified argument of {0} is not a sentence abstraction")]
    NonSentenceReified(Name),
    #[error("cyclic reification through `{0}` is not registered as a paradox")]
    CyclicReification(Name),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

impl Ontology {
    /// Ontology with the built-in constants: time tags, the agent constant,
    /// the canonical non-meaning element and the four truth values.
    pub fn new() -> Self {
        let mut o = Self::default();
        for tag in TIME_TAGS {
            o.constants.insert(
                tag.to_string(),
                (DomainElement::Individual(tag.to_string()), ElemKind::Time),
            );
        }
        o.constants.insert(
            SELF_CONSTANT.to_string(),
            (
                DomainElement::Individual(SELF_CONSTANT.to_string()),
                ElemKind::Individual,
            ),
        );
        o.constants.insert(
            NON_MEANING_CONSTANT.to_string(),
            (
                DomainElement::NonMeaning(NON_MEANING_CONSTANT.to_string()),
                ElemKind::NonMeaning,
            ),
        );
        for v in crate::bilattice::ALL_VALUES {
            o.constants
                .insert(v.to_string(), (DomainElement::Truth(v), ElemKind::Truth));
        }
        o
    }

    pub fn declare_constant(&mut self, kind: ElemKind, name: &str) -> Result<(), SemanticError> {
        if !matches!(kind, ElemKind::Individual | ElemKind::Time | ElemKind::NonMeaning) {
            return Err(SemanticError::Redeclared {
                name: name.to_string(),
                what: "kind (only individual, time and nonmeaning can be declared)",
            });
        }
        let element = if kind == ElemKind::NonMeaning {
            DomainElement::NonMeaning(name.to_string())
        } else {
            DomainElement::Individual(name.to_string())
        };
        match self.constants.get(name) {
            None => {
                self.constants.insert(name.to_string(), (element, kind));
                Ok(())
            }
            Some((_, existing)) if *existing == kind => Ok(()),
            Some((_, ElemKind::Truth)) => Err(SemanticError::ReservedName(name.to_string())),
            Some(_) => Err(SemanticError::Redeclared {
                name: name.to_string(),
                what: "kind",
            }),
        }
    }

    pub fn declare_pred(
        &mut self,
        name: &str,
        arity: usize,
        sig: Option<Vec<ElemKind>>,
    ) -> Result<(), SemanticError> {
        if is_distinguished(name) {
            return Err(SemanticError::ReservedName(name.to_string()));
        }
        if let Some(kinds) = &sig {
            if kinds.len() != arity {
                return Err(SemanticError::ArityMismatch {
                    pred: name.to_string(),
                    expected: arity,
                    got: kinds.len(),
                });
            }
        }
        let decl = PredDecl { arity, sig };
        match self.preds.get(name) {
            None => {
                self.preds.insert(name.to_string(), decl);
                Ok(())
            }
            Some(existing) if *existing == decl => Ok(()),
            Some(_) => Err(SemanticError::Redeclared {
                name: name.to_string(),
                what: "arity or signature",
            }),
        }
    }

    pub fn resolve_constant(&self, name: &str) -> Result<&DomainElement, SemanticError> {
        self.constants
            .get(name)
            .map(|(e, _)| e)
            .ok_or_else(|| SemanticError::UnknownConstant(name.to_string()))
    }

    pub fn constant_kind(&self, name: &str) -> Option<ElemKind> {
        self.constants.get(name).map(|(_, k)| *k)
    }

    pub fn pred(&self, name: &str) -> Option<&PredDecl> {
        self.preds.get(name)
    }

    pub fn preds(&self) -> impl Iterator<Item = (&Name, &PredDecl)> {
        self.preds.iter()
    }

    pub fn constants(&self) -> impl Iterator<Item = (&Name, &(DomainElement, ElemKind))> {
        self.constants.iter()
    }

    /// Declared elements of one kind, in name order.
    pub fn elements_of_kind(&self, kind: ElemKind) -> Vec<DomainElement> {
        self.constants
            .values()
            .filter(|(e, k)| {
                *k == kind
                    || (kind == ElemKind::Any
                        && matches!(k, ElemKind::Individual | ElemKind::Time))
            })
            .map(|(e, _)| e.clone())
            .collect()
    }

    /// The default quantification range: declared individuals and time tags.
    pub fn default_range(&self) -> Vec<DomainElement> {
        self.constants
            .values()
            .filter(|(_, k)| matches!(k, ElemKind::Individual | ElemKind::Time))
            .map(|(e, _)| e.clone())
            .collect()
    }
}

/// Whether a predicate name is built-in or distinguished (never declared,
/// never learned, never part of the learnable base).
pub fn is_distinguished(name: &str) -> bool {
    matches!(name, PRED_TRUTH | PRED_KNOW | PRED_ID | PRED_ID_IN)
}

/// A ground atom: predicate applied to domain elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: Name,
    pub args: Vec<DomainElement>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl GroundAtom {
    /// The atom as a formula, turning element arguments back into terms.
    pub fn to_formula(&self) -> Formula {
        Formula::Atom(Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(element_to_term).collect(),
        })
    }
}

/// Renders a domain element as the ground term denoting it.
pub fn element_to_term(e: &DomainElement) -> Term {
    match e {
        DomainElement::Individual(n) | DomainElement::NonMeaning(n) => Term::Const(n.clone()),
        DomainElement::Truth(v) => Term::Const(v.to_string()),
        DomainElement::Concept(c) => Term::Abs(crate::syntax::AbsTerm {
            body: Box::new(c.body.clone()),
            hidden: c.hidden.clone(),
            visible: Vec::new(),
        }),
    }
}

/// Assignment of domain elements to variables.
pub type Assignment = BTreeMap<VarName, DomainElement>;

/// A Herbrand valuation: ground atoms to truth values, defaulting to `bot`
/// for anything not stored (the closed knowledge assumption).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Valuation {
    map: BTreeMap<GroundAtom, TruthValue>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&self, atom: &GroundAtom) -> TruthValue {
        self.map.get(atom).copied().unwrap_or(TruthValue::Unknown)
    }

    pub fn set(&mut self, atom: GroundAtom, value: TruthValue) {
        if value == TruthValue::Unknown {
            self.map.remove(&atom);
        } else {
            self.map.insert(atom, value);
        }
    }

    pub fn assigned(&self) -> impl Iterator<Item = (&GroundAtom, TruthValue)> {
        self.map.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Applies an assignment to a formula, producing a ground formula. Errors if
/// the assignment misses a free visible variable; abstraction-hidden
/// variables are never touched.
pub fn apply_assignment(f: &Formula, g: &Assignment) -> Result<Formula, SemanticError> {
    let mut term_map = BTreeMap::new();
    for v in free_vars(f) {
        match g.get(&v) {
            Some(e) => {
                term_map.insert(v.clone(), element_to_term(e));
            }
            None => return Err(SemanticError::UnboundVariable(v)),
        }
    }
    Ok(crate::syntax::substitute(f, &term_map))
}

/// The intensional interpretation `I` on formulas: sentences map to degree-1
/// concepts and virtual predicates with `n` free variables to degree `n + 1`
/// concepts. An atom containing a non-meaning constant maps to the unknown
/// concept (the concept of the `bot` proposition).
pub fn intension(ontology: &Ontology, f: &Formula) -> ConceptRef {
    if let Formula::Atom(_) = f {
        if mentions_non_meaning(ontology, f) {
            return unknown_concept();
        }
    }
    let hidden = free_vars(f);
    let abs = mk_abs(f.clone(), &hidden).expect("free variables are free");
    ConceptRef::from_closed_abs(*abs.body, abs.hidden)
}

/// The unknown L-concept: the concept of the built-in `bot` proposition,
/// whose extension is always empty.
pub fn unknown_concept() -> ConceptRef {
    ConceptRef::from_closed_abs(Formula::Builtin(TruthValue::Unknown), Vec::new())
}

fn mentions_non_meaning(ontology: &Ontology, f: &Formula) -> bool {
    fn term_mentions(ontology: &Ontology, t: &Term) -> bool {
        match t {
            Term::Const(c) => {
                matches!(ontology.constant_kind(c), Some(ElemKind::NonMeaning))
            }
            Term::Var(_) => false,
            Term::Abs(abs) => formula_mentions(ontology, &abs.body),
        }
    }
    fn formula_mentions(ontology: &Ontology, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => a.args.iter().any(|t| term_mentions(ontology, t)),
            Formula::Builtin(_) => false,
            Formula::Not(s) => formula_mentions(ontology, s),
            Formula::Binary { left, right, .. } | Formula::Equiv(left, right) => {
                formula_mentions(ontology, left) || formula_mentions(ontology, right)
            }
            Formula::Quant { body, .. } => formula_mentions(ontology, body),
        }
    }
    formula_mentions(ontology, f)
}

/// An extensionalization map `h`: concepts to their m-extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtensionMap {
    pub map: BTreeMap<ConceptRef, MRelation>,
}

/// A mismatch between the extensionalization map and the valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposeViolation {
    pub formula: Formula,
    pub concept: ConceptRef,
    pub expected: MRelation,
    pub actual: Option<MRelation>,
}

impl fmt::Display for ComposeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h({}) = {} but the valuation gives {}",
            self.concept.canon,
            match &self.actual {
                Some(r) => r.to_string(),
                None => "nothing".to_string(),
            },
            self.expected
        )
    }
}

/// Builds the extensionalization map for a corpus from the valuation, so that
/// `h` composed with `I` is the MV-interpretation of every corpus formula.
pub fn build_extension_map(
    ctx: &EvalCtx<'_>,
    corpus: &[Formula],
) -> Result<ExtensionMap, SemanticError> {
    let mut h = ExtensionMap::default();
    for f in corpus {
        let concept = intension(ctx.ontology, f);
        let rel = concept_extension(ctx, &concept)?;
        h.map.insert(concept, rel);
    }
    Ok(h)
}

/// Checks `h(I(f)) = extension(f)` for every corpus formula, reporting the
/// first violation.
pub fn compose_check(
    ctx: &EvalCtx<'_>,
    h: &ExtensionMap,
    corpus: &[Formula],
) -> Result<Option<ComposeViolation>, SemanticError> {
    for f in corpus {
        let concept = intension(ctx.ontology, f);
        let expected = concept_extension(ctx, &concept)?;
        match h.map.get(&concept) {
            Some(actual) if *actual == expected => {}
            other => {
                return Ok(Some(ComposeViolation {
                    formula: f.clone(),
                    concept,
                    expected,
                    actual: other.cloned(),
                }));
            }
        }
    }
    Ok(None)
}

/// Extension of a concept: for the unknown concept this is empty by
/// construction; otherwise the extension of its underlying formula.
fn concept_extension(ctx: &EvalCtx<'_>, concept: &ConceptRef) -> Result<MRelation, SemanticError> {
    let vp = crate::syntax::VirtualPredicate::new(concept.body.clone());
    extension(ctx, &vp)
}

/// The learnable Herbrand base: every well-sorted ground atom of declared,
/// non-distinguished predicates over the declared element ranges. Concept
/// slots range over `concepts`.
pub fn herbrand_base(ontology: &Ontology, concepts: &[ConceptRef]) -> Vec<GroundAtom> {
    let mut out = Vec::new();
    for (name, decl) in ontology.preds() {
        let ranges: Vec<Vec<DomainElement>> = (0..decl.arity)
            .map(|i| kind_range(ontology, concepts, sig_kind(decl, i)))
            .collect();
        for args in relation::cartesian_ranges(&ranges) {
            out.push(GroundAtom {
                pred: name.clone(),
                args,
            });
        }
    }
    out
}

pub(crate) fn sig_kind(decl: &PredDecl, pos: usize) -> ElemKind {
    decl.sig
        .as_ref()
        .and_then(|s| s.get(pos).copied())
        .unwrap_or(ElemKind::Any)
}

pub(crate) fn kind_range(
    ontology: &Ontology,
    concepts: &[ConceptRef],
    kind: ElemKind,
) -> Vec<DomainElement> {
    match kind {
        ElemKind::Individual | ElemKind::Time | ElemKind::NonMeaning => {
            ontology.elements_of_kind(kind)
        }
        ElemKind::Truth => crate::bilattice::ALL_VALUES
            .iter()
            .map(|v| DomainElement::Truth(*v))
            .collect(),
        ElemKind::Sentence => concepts
            .iter()
            .filter(|c| c.degree == 1)
            .map(|c| DomainElement::Concept(c.clone()))
            .collect(),
        ElemKind::Concept => concepts
            .iter()
            .filter(|c| c.degree >= 2)
            .map(|c| DomainElement::Concept(c.clone()))
            .collect(),
        ElemKind::Any => ontology.default_range(),
    }
}

/// Canonical text of a formula, used as an identity key for sentences.
pub fn canon(f: &Formula) -> String {
    print(f)
}
