//! AST, parser and printer for the logic language: terms (variables,
//! constants, abstraction terms), formulas with indexed connectives and
//! positional quantifiers, and the canonical free-variable ordering of
//! virtual predicates.

mod lexer;
mod parser;
mod printer;

pub use parser::{parse, parse_term};
pub use printer::{print, print_term};

use std::collections::BTreeMap;
use std::fmt;

use crate::bilattice::TruthValue;

/// Uppercase-initial identifier naming a variable.
pub type VarName = String;

/// Lowercase-initial identifier naming a constant or predicate.
pub type Name = String;

/// Distinguished predicate names. `T` and `Know` reify sentences, `id` is the
/// two-valued identity and `id_in` the weak intensional equivalence.
pub const PRED_TRUTH: &str = "T";
pub const PRED_KNOW: &str = "Know";
pub const PRED_ID: &str = "id";
pub const PRED_ID_IN: &str = "id_in";

/// A term: variable, constant, or reified formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarName),
    Const(Name),
    Abs(AbsTerm),
}

/// An abstraction term `<<formula>>[hide ...]`.
///
/// `hidden` and `visible` partition the free variables of `body`, both in
/// canonical tuple order. Hidden variables are bound by the abstraction and
/// are never assigned or quantified from outside; visible variables remain
/// free in the enclosing formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbsTerm {
    pub body: Box<Formula>,
    pub hidden: Vec<VarName>,
    pub visible: Vec<VarName>,
}

/// Binary truth-functional connectives that carry a shared-variable index set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Implies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QuantKind {
    Exists,
    Forall,
}

/// A predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Name,
    pub args: Vec<Term>,
}

/// A formula of the language.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    /// Built-in proposition `p_a` with fixed value `a`.
    Builtin(TruthValue),
    Not(Box<Formula>),
    Binary {
        op: Connective,
        /// Pairs `(i, j)` of 1-based free-tuple positions holding the same
        /// variable in `left` and `right`. Computed, never user-written.
        shared: Vec<(usize, usize)>,
        left: Box<Formula>,
        right: Box<Formula>,
    },
    /// Many-valued equivalence; carries no index set.
    Equiv(Box<Formula>, Box<Formula>),
    /// Positional quantifier binding the `position`-th (1-based) variable of
    /// the body's canonical free tuple.
    Quant {
        kind: QuantKind,
        position: usize,
        body: Box<Formula>,
    },
}

/// An open formula together with its canonical free-variable tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct VirtualPredicate {
    pub formula: Formula,
    pub free_tuple: Vec<VarName>,
}

impl VirtualPredicate {
    pub fn new(formula: Formula) -> Self {
        let free_tuple = free_vars(&formula);
        Self { formula, free_tuple }
    }

    pub fn arity(&self) -> usize {
        self.free_tuple.len()
    }
}

/// Errors raised while building or parsing syntax.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("line {line}, col {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("variable {0} is not free in the quantifier body")]
    NotFreeInBody(VarName),
    #[error("hidden variable {0} is not free in the abstraction body")]
    HiddenNotFree(VarName),
    #[error("no binding for free variable {0}")]
    UnboundVariable(VarName),
}

/// Canonical free-variable tuple: each free variable exactly once, ordered by
/// first appearance scanning the formula left to right. Bound variables and
/// abstraction-hidden variables are excluded; the visible variables of an
/// abstraction term are free in the enclosing formula.
pub fn free_vars(f: &Formula) -> Vec<VarName> {
    let mut out = Vec::new();
    collect_free(f, &mut out);
    out
}

fn push_new(out: &mut Vec<VarName>, v: &str) {
    if !out.iter().any(|x| x == v) {
        out.push(v.to_string());
    }
}

fn collect_free(f: &Formula, out: &mut Vec<VarName>) {
    match f {
        Formula::Atom(a) => {
            for t in &a.args {
                collect_free_term(t, out);
            }
        }
        Formula::Builtin(_) => {}
        Formula::Not(sub) => collect_free(sub, out),
        Formula::Binary { left, right, .. } => {
            collect_free(left, out);
            collect_free(right, out);
        }
        Formula::Equiv(left, right) => {
            collect_free(left, out);
            collect_free(right, out);
        }
        Formula::Quant { position, body, .. } => {
            let tuple = free_vars(body);
            for (idx, v) in tuple.iter().enumerate() {
                if idx + 1 != *position {
                    push_new(out, v);
                }
            }
        }
    }
}

fn collect_free_term(t: &Term, out: &mut Vec<VarName>) {
    match t {
        Term::Var(v) => push_new(out, v),
        Term::Const(_) => {}
        Term::Abs(abs) => {
            for v in &abs.visible {
                push_new(out, v);
            }
        }
    }
}

/// All position pairs `(i, j)` (1-based) such that the i-th free variable of
/// `left` names the same variable as the j-th free variable of `right`.
/// An empty result means the combination is Cartesian-product-style.
pub fn shared_index_set(left: &VirtualPredicate, right: &VirtualPredicate) -> Vec<(usize, usize)> {
    shared_positions(&left.free_tuple, &right.free_tuple)
}

pub(crate) fn shared_positions(left: &[VarName], right: &[VarName]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, lv) in left.iter().enumerate() {
        if let Some(j) = right.iter().position(|rv| rv == lv) {
            pairs.push((i + 1, j + 1));
        }
    }
    pairs
}

/// Builds a binary node, computing the shared index set from the operands.
pub fn mk_binary(op: Connective, left: Formula, right: Formula) -> Formula {
    let shared = shared_positions(&free_vars(&left), &free_vars(&right));
    Formula::Binary {
        op,
        shared,
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// Builds a quantifier binding `var`, deriving its positional index from the
/// canonical free tuple of `body`.
pub fn mk_quant(kind: QuantKind, var: &str, body: Formula) -> Result<Formula, SyntaxError> {
    let tuple = free_vars(&body);
    match tuple.iter().position(|v| v == var) {
        Some(idx) => Ok(Formula::Quant {
            kind,
            position: idx + 1,
            body: Box::new(body),
        }),
        None => Err(SyntaxError::NotFreeInBody(var.to_string())),
    }
}

/// Builds an abstraction term hiding `hidden`. The visible tuple is the
/// free tuple of `body` minus the hidden variables, order preserved; the
/// hidden list is normalized to tuple order as well.
pub fn mk_abs(body: Formula, hidden: &[VarName]) -> Result<AbsTerm, SyntaxError> {
    let tuple = free_vars(&body);
    for h in hidden {
        if !tuple.iter().any(|v| v == h) {
            return Err(SyntaxError::HiddenNotFree(h.clone()));
        }
    }
    let (hid, vis): (Vec<_>, Vec<_>) = tuple.into_iter().partition(|v| hidden.contains(v));
    Ok(AbsTerm {
        body: Box::new(body),
        hidden: hid,
        visible: vis,
    })
}

/// Uniform replacement of free variables by ground terms.
///
/// Hidden variables of abstraction terms are never replaced. Quantifier
/// positions and shared index sets are recomputed, since replacing a variable
/// by a ground term shortens the free tuples around it.
pub fn substitute(f: &Formula, map: &BTreeMap<VarName, Term>) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| substitute_term(t, map)).collect(),
        }),
        Formula::Builtin(a) => Formula::Builtin(*a),
        Formula::Not(sub) => Formula::Not(Box::new(substitute(sub, map))),
        Formula::Binary { op, left, right, .. } => {
            mk_binary(*op, substitute(left, map), substitute(right, map))
        }
        Formula::Equiv(left, right) => Formula::Equiv(
            Box::new(substitute(left, map)),
            Box::new(substitute(right, map)),
        ),
        Formula::Quant { kind, position, body } => {
            let tuple = free_vars(body);
            match tuple.get(*position - 1) {
                Some(bound) => {
                    let mut inner = map.clone();
                    inner.remove(bound);
                    let new_body = substitute(body, &inner);
                    let new_pos = free_vars(&new_body)
                        .iter()
                        .position(|v| v == bound)
                        .map(|i| i + 1)
                        .unwrap_or(*position);
                    Formula::Quant {
                        kind: *kind,
                        position: new_pos,
                        body: Box::new(new_body),
                    }
                }
                // vacuous quantifier: nothing to protect
                None => Formula::Quant {
                    kind: *kind,
                    position: *position,
                    body: Box::new(substitute(body, map)),
                },
            }
        }
    }
}

pub fn substitute_term(t: &Term, map: &BTreeMap<VarName, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::Abs(abs) => {
            let mut inner = map.clone();
            for h in &abs.hidden {
                inner.remove(h);
            }
            let new_body = substitute(&abs.body, &inner);
            let replaced: Vec<&VarName> =
                abs.visible.iter().filter(|v| map.contains_key(*v)).collect();
            let hidden = abs.hidden.clone();
            let visible = abs
                .visible
                .iter()
                .filter(|v| !replaced.contains(v))
                .cloned()
                .collect();
            Term::Abs(AbsTerm {
                body: Box::new(new_body),
                hidden,
                visible,
            })
        }
    }
}

impl Formula {
    pub fn is_sentence(&self) -> bool {
        free_vars(self).is_empty()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: &str) -> Term {
        Term::Var(v.to_string())
    }

    fn cst(c: &str) -> Term {
        Term::Const(c.to_string())
    }

    fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom {
            pred: pred.to_string(),
            args,
        })
    }

    #[test]
    fn free_tuple_orders_by_first_appearance() {
        // p(c1, c2, X1, c3, X2, c4) has the virtual predicate tuple (X1, X2)
        let f = atom(
            "p",
            vec![cst("c1"), cst("c2"), var("X1"), cst("c3"), var("X2"), cst("c4")],
        );
        assert_eq!(free_vars(&f), vec!["X1".to_string(), "X2".to_string()]);
        assert!(atom("q", vec![cst("a")]).is_sentence());
    }

    #[test]
    fn shared_index_set_matches_tuple_positions() {
        let left = VirtualPredicate::new(atom(
            "psi1",
            vec![var("Xi"), var("Xj"), var("Xk"), var("Xl"), var("Xm")],
        ));
        let right = VirtualPredicate::new(atom(
            "psi2",
            vec![var("Xl"), var("Yi"), var("Xj"), var("Yj")],
        ));
        assert_eq!(shared_index_set(&left, &right), vec![(2, 3), (4, 1)]);

        let joined = mk_binary(Connective::And, left.formula.clone(), right.formula.clone());
        assert_eq!(
            free_vars(&joined),
            vec!["Xi", "Xj", "Xk", "Xl", "Xm", "Yi", "Yj"]
        );

        let p = VirtualPredicate::new(atom("p", vec![var("X")]));
        let q = VirtualPredicate::new(atom("q", vec![var("X")]));
        assert_eq!(shared_index_set(&p, &q), vec![(1, 1)]);
        let r = VirtualPredicate::new(atom("r", vec![var("Z")]));
        assert!(shared_index_set(&p, &r).is_empty());
    }

    #[test]
    fn abstraction_partitions_free_variables() {
        let body = mk_binary(
            Connective::And,
            atom("p", vec![var("X"), var("Y")]),
            atom("q", vec![var("Y")]),
        );
        let abs = mk_abs(body.clone(), &["X".to_string()]).unwrap();
        assert_eq!(abs.hidden, vec!["X"]);
        assert_eq!(abs.visible, vec!["Y"]);

        let all = mk_abs(body.clone(), &["Y".to_string(), "X".to_string()]).unwrap();
        assert_eq!(all.hidden, vec!["X", "Y"]);
        assert!(all.visible.is_empty());

        let sentence = mk_abs(atom("s", vec![cst("a")]), &[]).unwrap();
        assert!(sentence.hidden.is_empty() && sentence.visible.is_empty());

        assert!(matches!(
            mk_abs(atom("s", vec![cst("a")]), &["Z".to_string()]),
            Err(SyntaxError::HiddenNotFree(_))
        ));
    }

    #[test]
    fn substitution_is_uniform_and_skips_hidden() {
        let mut g = BTreeMap::new();
        g.insert("X".to_string(), cst("a"));
        let f = atom("p", vec![var("X")]);
        assert_eq!(substitute(&f, &g), atom("p", vec![cst("a")]));

        // << p(X, Y) >>[hide X] under Y -> b keeps X hidden
        let abs = mk_abs(atom("p", vec![var("X"), var("Y")]), &["X".to_string()]).unwrap();
        let mut g2 = BTreeMap::new();
        g2.insert("Y".to_string(), cst("b"));
        g2.insert("X".to_string(), cst("c"));
        let out = substitute_term(&Term::Abs(abs), &g2);
        match out {
            Term::Abs(a) => {
                assert_eq!(*a.body, atom("p", vec![var("X"), cst("b")]));
                assert_eq!(a.hidden, vec!["X"]);
                assert!(a.visible.is_empty());
            }
            other => panic!("expected abstraction, got {other:?}"),
        }

        let ground = atom("p", vec![cst("a")]);
        assert_eq!(substitute(&ground, &g), ground);
    }

    #[test]
    fn substitution_reindexes_quantifier_positions() {
        // exists Y. p(X, Y): tuple of body is (X, Y), position 2
        let body = atom("p", vec![var("X"), var("Y")]);
        let q = mk_quant(QuantKind::Exists, "Y", body).unwrap();
        assert!(matches!(q, Formula::Quant { position: 2, .. }));
        let mut g = BTreeMap::new();
        g.insert("X".to_string(), cst("a"));
        let ground = substitute(&q, &g);
        match ground {
            Formula::Quant { position, ref body, .. } => {
                assert_eq!(position, 1);
                assert_eq!(free_vars(body), vec!["Y"]);
            }
            other => panic!("expected quantifier, got {other:?}"),
        }
        assert!(ground.is_sentence());
    }
}
