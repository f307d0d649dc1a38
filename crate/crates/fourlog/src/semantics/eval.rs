//! The structural evaluator: extends a Herbrand valuation to all sentences,
//! with positional quantifiers aggregating over kind-inferred finite ranges
//! and reified `T`/`Know` atoms taking the value of the sentence they name.

use std::collections::{BTreeMap, BTreeSet};

use crate::bilattice::{self, AggKind, Order, TruthValue};
use crate::syntax::{
    free_vars, substitute, Connective, Formula, Name, QuantKind, Term, VarName, PRED_ID,
    PRED_ID_IN, PRED_KNOW, PRED_TRUTH,
};

use super::{
    kind_range, sig_kind, Assignment, ConceptRef, DomainElement, ElemKind, GroundAtom, Ontology,
    SemanticError, Valuation,
};

/// A registered named sentence. A pinned sentence (a paradox, or the
/// `bot`-pinned self-non-provability analogue) evaluates to its pin without
/// expansion; an unpinned one expands to its body, and re-entering it during
/// that expansion is a cyclic-reification error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSentence {
    pub body: Formula,
    pub pin: Option<TruthValue>,
}

/// User-supplied extension table for the weak intensional equivalence.
pub type InTable = BTreeMap<(DomainElement, DomainElement), TruthValue>;

/// Everything evaluation needs besides the formula: declarations, the stored
/// valuation, registered named sentences, and the concepts materialized in
/// the current state (the finite slice of the concept domain that
/// quantification may range over).
#[derive(Debug, Clone)]
pub struct EvalCtx<'a> {
    pub ontology: &'a Ontology,
    pub valuation: &'a Valuation,
    pub named: Option<&'a BTreeMap<Name, NamedSentence>>,
    pub in_table: Option<&'a InTable>,
    /// Value overrides for named sentences, used to probe forced readings.
    pub overrides: BTreeMap<Name, TruthValue>,
    pub concepts: Vec<ConceptRef>,
}

impl<'a> EvalCtx<'a> {
    pub fn new(ontology: &'a Ontology, valuation: &'a Valuation) -> Self {
        Self {
            ontology,
            valuation,
            named: None,
            in_table: None,
            overrides: BTreeMap::new(),
            concepts: Vec::new(),
        }
    }

    fn named_sentence(&self, name: &str) -> Option<&NamedSentence> {
        self.named.and_then(|m| m.get(name))
    }

    /// The padding universe for extensional comparisons: declared individuals
    /// and time tags plus the materialized concepts.
    pub fn relation_domain(&self) -> Vec<DomainElement> {
        let mut out = self.ontology.default_range();
        out.extend(self.concepts.iter().map(|c| DomainElement::Concept(c.clone())));
        out
    }
}

/// Evaluates a formula under an assignment covering its free variables.
pub fn evaluate(
    ctx: &EvalCtx<'_>,
    f: &Formula,
    env: &Assignment,
) -> Result<TruthValue, SemanticError> {
    let mut stack = Vec::new();
    eval_f(ctx, f, env, &mut stack)
}

fn eval_f(
    ctx: &EvalCtx<'_>,
    f: &Formula,
    env: &Assignment,
    stack: &mut Vec<Name>,
) -> Result<TruthValue, SemanticError> {
    match f {
        Formula::Builtin(a) => Ok(*a),
        Formula::Not(sub) => Ok(bilattice::negate(eval_f(ctx, sub, env, stack)?)),
        Formula::Binary { op, left, right, .. } => {
            let l = eval_f(ctx, left, env, stack)?;
            let r = eval_f(ctx, right, env, stack)?;
            Ok(match op {
                Connective::And => bilattice::truth_meet(l, r),
                Connective::Or => bilattice::truth_join(l, r),
                Connective::Implies => bilattice::implies(l, r),
            })
        }
        Formula::Equiv(left, right) => {
            let l = eval_f(ctx, left, env, stack)?;
            let r = eval_f(ctx, right, env, stack)?;
            Ok(bilattice::equiv(l, r))
        }
        Formula::Quant { kind, position, body } => {
            let tuple = free_vars(body);
            let Some(var) = tuple.get(*position - 1) else {
                // no such free variable: the quantifier is vacuous
                return eval_f(ctx, body, env, stack);
            };
            let agg_kind = match kind {
                QuantKind::Exists => AggKind::Join,
                QuantKind::Forall => AggKind::Meet,
            };
            let mut values = Vec::new();
            for element in var_range(ctx, body, var) {
                let mut inner = env.clone();
                inner.insert(var.clone(), element);
                values.push(eval_f(ctx, body, &inner, stack)?);
            }
            Ok(bilattice::agg(Order::Truth, agg_kind, values))
        }
        Formula::Atom(atom) => eval_atom(ctx, atom, env, stack),
    }
}

fn eval_atom(
    ctx: &EvalCtx<'_>,
    atom: &crate::syntax::Atom,
    env: &Assignment,
    stack: &mut Vec<Name>,
) -> Result<TruthValue, SemanticError> {
    // registered sentence handles shadow everything else
    if let Some(named) = ctx.named_sentence(&atom.pred) {
        if !atom.args.is_empty() {
            return Err(SemanticError::ArityMismatch {
                pred: atom.pred.clone(),
                expected: 0,
                got: atom.args.len(),
            });
        }
        if let Some(v) = ctx.overrides.get(&atom.pred) {
            return Ok(*v);
        }
        if let Some(pin) = named.pin {
            return Ok(pin);
        }
        if stack.iter().any(|n| n == &atom.pred) {
            return Err(SemanticError::CyclicReification(atom.pred.clone()));
        }
        stack.push(atom.pred.clone());
        let value = eval_f(ctx, &named.body, &Assignment::new(), stack);
        stack.pop();
        return value;
    }

    let args: Vec<DomainElement> = atom
        .args
        .iter()
        .map(|t| resolve_term(ctx, t, env))
        .collect::<Result<_, _>>()?;

    let expect_arity = |n: usize| -> Result<(), SemanticError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(SemanticError::ArityMismatch {
                pred: atom.pred.clone(),
                expected: n,
                got: args.len(),
            })
        }
    };

    match atom.pred.as_str() {
        PRED_TRUTH => {
            expect_arity(1)?;
            if has_non_meaning(&args) {
                return Ok(TruthValue::Unknown);
            }
            reified_value(ctx, &args[0], stack)
        }
        PRED_KNOW => {
            expect_arity(3)?;
            if has_non_meaning(&args) {
                return Ok(TruthValue::Unknown);
            }
            reified_value(ctx, &args[2], stack)
        }
        PRED_ID => {
            expect_arity(2)?;
            if has_non_meaning(&args) {
                return Ok(TruthValue::Unknown);
            }
            Ok(if args[0] == args[1] {
                TruthValue::True
            } else {
                TruthValue::False
            })
        }
        PRED_ID_IN => {
            expect_arity(2)?;
            if has_non_meaning(&args) {
                return Ok(TruthValue::Unknown);
            }
            Ok(ctx
                .in_table
                .and_then(|t| t.get(&(args[0].clone(), args[1].clone())).copied())
                .unwrap_or(TruthValue::Unknown))
        }
        name => {
            let decl = ctx
                .ontology
                .pred(name)
                .ok_or_else(|| SemanticError::UnknownPredicate(name.to_string()))?;
            expect_arity(decl.arity)?;
            if has_non_meaning(&args) {
                return Ok(TruthValue::Unknown);
            }
            for (i, arg) in args.iter().enumerate() {
                let kind = sig_kind(decl, i);
                if !kind.matches(arg) {
                    return Err(SemanticError::KindMismatch {
                        pred: name.to_string(),
                        pos: i + 1,
                        expected: kind,
                        got: arg.to_string(),
                    });
                }
            }
            Ok(ctx.valuation.value(&GroundAtom {
                pred: name.to_string(),
                args,
            }))
        }
    }
}

/// The value of a reified sentence: degree-1 concepts evaluate to the value
/// of the sentence they name; anything else is a failed reification and
/// evaluates to `f`.
fn reified_value(
    ctx: &EvalCtx<'_>,
    element: &DomainElement,
    stack: &mut Vec<Name>,
) -> Result<TruthValue, SemanticError> {
    match element {
        DomainElement::Concept(c) if c.degree == 1 => {
            eval_f(ctx, &c.body, &Assignment::new(), stack)
        }
        _ => Ok(TruthValue::False),
    }
}

fn has_non_meaning(args: &[DomainElement]) -> bool {
    args.iter()
        .any(|a| matches!(a, DomainElement::NonMeaning(_)))
}

/// Resolves a term to a domain element. Abstraction terms become concepts
/// after their visible variables are replaced from the assignment.
pub fn resolve_term(
    ctx: &EvalCtx<'_>,
    term: &Term,
    env: &Assignment,
) -> Result<DomainElement, SemanticError> {
    match term {
        Term::Var(v) => env
            .get(v)
            .cloned()
            .ok_or_else(|| SemanticError::UnboundVariable(v.clone())),
        Term::Const(c) => ctx.ontology.resolve_constant(c).cloned(),
        Term::Abs(abs) => {
            let mut map = BTreeMap::new();
            for v in &abs.visible {
                let element = env
                    .get(v)
                    .ok_or_else(|| SemanticError::UnboundVariable(v.clone()))?;
                map.insert(v.clone(), super::element_to_term(element));
            }
            let body = substitute(&abs.body, &map);
            Ok(DomainElement::Concept(ConceptRef::from_closed_abs(
                body,
                abs.hidden.clone(),
            )))
        }
    }
}

/// Resolves a ground term (no free variables).
pub fn resolve_ground_term(ctx: &EvalCtx<'_>, term: &Term) -> Result<DomainElement, SemanticError> {
    resolve_term(ctx, term, &Assignment::new())
}

/// The finite range a quantified variable runs over: the union of the element
/// kinds the variable's argument positions demand, or all declared
/// individuals and time tags when nothing constrains it.
pub fn var_range(ctx: &EvalCtx<'_>, body: &Formula, var: &VarName) -> Vec<DomainElement> {
    let mut kinds = BTreeSet::new();
    collect_kind_constraints(ctx.ontology, body, var, &mut kinds);
    if kinds.is_empty() {
        return ctx.ontology.default_range();
    }
    let mut out = BTreeSet::new();
    for kind in kinds {
        out.extend(kind_range(ctx.ontology, &ctx.concepts, kind));
    }
    out.into_iter().collect()
}

fn collect_kind_constraints(
    ontology: &Ontology,
    f: &Formula,
    var: &VarName,
    kinds: &mut BTreeSet<ElemKind>,
) {
    match f {
        Formula::Atom(atom) => {
            for (i, arg) in atom.args.iter().enumerate() {
                match arg {
                    Term::Var(v) if v == var => {
                        if let Some(kind) = pred_position_kind(ontology, &atom.pred, i) {
                            kinds.insert(kind);
                        }
                    }
                    Term::Abs(abs) if abs.visible.iter().any(|v| v == var) => {
                        collect_kind_constraints(ontology, &abs.body, var, kinds);
                    }
                    _ => {}
                }
            }
        }
        Formula::Builtin(_) => {}
        Formula::Not(sub) => collect_kind_constraints(ontology, sub, var, kinds),
        Formula::Binary { left, right, .. } | Formula::Equiv(left, right) => {
            collect_kind_constraints(ontology, left, var, kinds);
            collect_kind_constraints(ontology, right, var, kinds);
        }
        Formula::Quant { body, .. } => collect_kind_constraints(ontology, body, var, kinds),
    }
}

fn pred_position_kind(ontology: &Ontology, pred: &str, pos: usize) -> Option<ElemKind> {
    match pred {
        PRED_TRUTH => Some(ElemKind::Sentence),
        PRED_KNOW if pos == 2 => Some(ElemKind::Sentence),
        PRED_KNOW | PRED_ID | PRED_ID_IN => None,
        name => {
            let decl = ontology.pred(name)?;
            match sig_kind(decl, pos) {
                ElemKind::Any => None,
                kind => Some(kind),
            }
        }
    }
}

/// The m-extension of a virtual predicate: one row per assignment of its free
/// tuple with a non-`bot` value.
pub fn extension(
    ctx: &EvalCtx<'_>,
    vp: &crate::syntax::VirtualPredicate,
) -> Result<super::MRelation, SemanticError> {
    let ranges: Vec<Vec<DomainElement>> = vp
        .free_tuple
        .iter()
        .map(|v| var_range(ctx, &vp.formula, v))
        .collect();
    let mut rel = super::MRelation::new(vp.arity() + 1);
    for combo in super::relation::cartesian_ranges(&ranges) {
        let mut env = Assignment::new();
        for (v, e) in vp.free_tuple.iter().zip(combo.iter()) {
            env.insert(v.clone(), e.clone());
        }
        let value = evaluate(ctx, &vp.formula, &env)?;
        if value != TruthValue::Unknown {
            rel.insert(combo, value)?;
        }
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, VirtualPredicate};
    use TruthValue::{Both as B, False as F, True as T, Unknown as U};

    fn ontology() -> Ontology {
        let mut o = Ontology::new();
        o.declare_constant(ElemKind::Individual, "a").unwrap();
        o.declare_constant(ElemKind::Individual, "b").unwrap();
        o.declare_constant(ElemKind::NonMeaning, "unicorn").unwrap();
        o.declare_pred("p", 1, Some(vec![ElemKind::Individual])).unwrap();
        o.declare_pred("q", 1, Some(vec![ElemKind::Individual])).unwrap();
        o.declare_pred("blu", 1, None).unwrap();
        o
    }

    fn atom(o: &Ontology, text: &str) -> GroundAtom {
        let ctx_val = Valuation::new();
        let ctx = EvalCtx::new(o, &ctx_val);
        match parse(text).unwrap() {
            Formula::Atom(a) => GroundAtom {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| resolve_ground_term(&ctx, t).unwrap())
                    .collect(),
            },
            other => panic!("not an atom: {other:?}"),
        }
    }

    fn eval(o: &Ontology, v: &Valuation, text: &str) -> TruthValue {
        let ctx = EvalCtx::new(o, v);
        evaluate(&ctx, &parse(text).unwrap(), &Assignment::new()).unwrap()
    }

    #[test]
    fn builtins_and_connectives() {
        let o = ontology();
        let mut v = Valuation::new();
        assert_eq!(eval(&o, &v, "p_top"), B);
        v.set(atom(&o, "p(a)"), B);
        v.set(atom(&o, "q(a)"), F);
        // top & f = f: conjunction with a false conjunct is no longer inconsistent
        assert_eq!(eval(&o, &v, "p(a) & q(a)"), F);
        assert_eq!(eval(&o, &v, "p(a) | q(a)"), T);
        assert_eq!(eval(&o, &v, "~p(a)"), B);
        assert_eq!(eval(&o, &v, "p(a) <-> p(a)"), T);
    }

    #[test]
    fn quantifiers_aggregate_over_declared_individuals() {
        let o = ontology();
        let mut v = Valuation::new();
        v.set(atom(&o, "p(a)"), T);
        v.set(atom(&o, "p(b)"), F);
        assert_eq!(eval(&o, &v, "forall X. p(X)"), F);
        assert_eq!(eval(&o, &v, "exists X. p(X)"), T);

        let mut v2 = Valuation::new();
        v2.set(atom(&o, "p(a)"), T);
        // p(b) defaults to bot: t /\ bot = bot
        assert_eq!(eval(&o, &v2, "forall X. p(X)"), U);
    }

    #[test]
    fn non_meaning_atoms_are_unknown() {
        let o = ontology();
        let v = Valuation::new();
        assert_eq!(eval(&o, &v, "blu(unicorn)"), U);
        assert_eq!(eval(&o, &v, "id(unicorn, unicorn)"), U);
    }

    #[test]
    fn identity_is_two_valued() {
        let o = ontology();
        let v = Valuation::new();
        assert_eq!(eval(&o, &v, "id(a, a)"), T);
        assert_eq!(eval(&o, &v, "id(a, b)"), F);
        // no extension table for weak intensional equivalence: bot
        assert_eq!(eval(&o, &v, "id_in(a, b)"), U);
    }

    #[test]
    fn reified_truth_atoms() {
        let o = ontology();
        let mut v = Valuation::new();
        v.set(atom(&o, "p(a)"), B);
        assert_eq!(eval(&o, &v, "T(<<p_f>>)"), F);
        assert_eq!(eval(&o, &v, "T(<<p(a)>>)"), B);
        assert_eq!(eval(&o, &v, "Know(in-present, me, <<p(a)>>)"), B);
        // reifying a non-sentence falls back to f
        assert_eq!(eval(&o, &v, "T(a)"), F);
        assert_eq!(eval(&o, &v, "T(<<p(X)>>[hide X])"), F);
    }

    #[test]
    fn evaluation_errors() {
        let o = ontology();
        let v = Valuation::new();
        let ctx = EvalCtx::new(&o, &v);
        let open = parse("p(X)").unwrap();
        assert!(matches!(
            evaluate(&ctx, &open, &Assignment::new()),
            Err(SemanticError::UnboundVariable(_))
        ));
        let unknown = parse("zz(a)").unwrap();
        assert!(matches!(
            evaluate(&ctx, &unknown, &Assignment::new()),
            Err(SemanticError::UnknownPredicate(_))
        ));
    }

    #[test]
    fn extensions_follow_the_valuation() {
        let o = ontology();
        let mut v = Valuation::new();
        v.set(atom(&o, "p(a)"), T);
        let ctx = EvalCtx::new(&o, &v);

        let vp = VirtualPredicate::new(parse("p(X)").unwrap());
        let rel = extension(&ctx, &vp).unwrap();
        assert_eq!(rel.len(), 1);
        assert_eq!(
            rel.value_of(&[DomainElement::Individual("a".to_string())]),
            Some(T)
        );

        let all_bot = VirtualPredicate::new(parse("q(X)").unwrap());
        assert!(extension(&ctx, &all_bot).unwrap().is_empty());

        let sentence = VirtualPredicate::new(parse("p(a)").unwrap());
        let srel = extension(&ctx, &sentence).unwrap();
        assert_eq!(srel.arity(), 1);
        assert_eq!(srel.value_of(&[]), Some(T));
    }
}
