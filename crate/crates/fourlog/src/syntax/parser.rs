//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula  := iff
//! iff      := impl ("<->" impl)*            (folded left)
//! impl     := disj ("->" disj)*             (right-associative)
//! disj     := conj ("|" conj)*
//! conj     := unary ("&" unary)*
//! unary    := "~" unary | "exists" VAR "." unary | "forall" VAR "." unary | primary
//! primary  := atom | "p_t" | "p_f" | "p_bot" | "p_top" | "(" formula ")"
//! atom     := IDENT "(" term ("," term)* ")" | IDENT
//! term     := VAR | IDENT | absterm
//! absterm  := "<<" formula ">>" [ "[" "hide" VAR ("," VAR)* "]" ]
//! ```
//!
//! Quantifiers are written with named variables; the positional index is
//! derived from the variable's place in the body's canonical free tuple.

use super::lexer::{tokenize, Tok, Token};
use super::{
    mk_abs, mk_binary, mk_quant, Atom, Connective, Formula, QuantKind, SyntaxError, Term,
    PRED_KNOW, PRED_TRUTH,
};

pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a single term (used by knowledge-base and command files).
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Self {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == want {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.eat(&want) {
            Ok(())
        } else {
            Err(self.fail(&format!("expected {what}")))
        }
    }

    fn expect_eof(&mut self) -> Result<(), SyntaxError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.fail("expected end of input"))
        }
    }

    fn fail(&self, message: &str) -> SyntaxError {
        let (line, col) = self.here();
        SyntaxError::Parse {
            line,
            col,
            message: message.to_string(),
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.impl_level()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.impl_level()?;
            f = Formula::Equiv(Box::new(f), Box::new(rhs));
        }
        Ok(f)
    }

    fn impl_level(&mut self) -> Result<Formula, SyntaxError> {
        let mut parts = vec![self.disj()?];
        while self.eat(&Tok::Arrow) {
            parts.push(self.disj()?);
        }
        let mut f = parts.pop().expect("at least one operand");
        while let Some(lhs) = parts.pop() {
            f = mk_binary(Connective::Implies, lhs, f);
        }
        Ok(f)
    }

    fn disj(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.conj()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conj()?;
            f = mk_binary(Connective::Or, f, rhs);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, SyntaxError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            f = mk_binary(Connective::And, f, rhs);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::Not(Box::new(self.unary()?)))
            }
            Tok::Exists | Tok::Forall => {
                let kind = if matches!(self.peek(), Tok::Exists) {
                    QuantKind::Exists
                } else {
                    QuantKind::Forall
                };
                self.bump();
                let var = match self.bump() {
                    Tok::Var(v) => v,
                    _ => return Err(self.fail("expected a variable after the quantifier")),
                };
                self.expect(Tok::Dot, "`.` after the quantified variable")?;
                let body = self.unary()?;
                let (line, col) = self.here();
                mk_quant(kind, &var, body).map_err(|_| SyntaxError::Parse {
                    line,
                    col,
                    message: format!("variable {var} is not free in the quantifier body"),
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::BuiltinProp(a) => {
                self.bump();
                if self.peek() == &Tok::LParen {
                    return Err(self.fail("built-in propositions take no arguments"));
                }
                Ok(Formula::Builtin(a))
            }
            Tok::Ident(name) => {
                self.bump();
                self.atom_tail(name)
            }
            Tok::Var(name) if name == PRED_TRUTH || name == PRED_KNOW => {
                self.bump();
                if self.peek() != &Tok::LParen {
                    return Err(self.fail(&format!("predicate {name} requires arguments")));
                }
                self.atom_tail(name)
            }
            Tok::Var(name) => Err(self.fail(&format!(
                "unexpected variable {name}; only T and Know are uppercase predicates"
            ))),
            _ => Err(self.fail("expected a formula")),
        }
    }

    fn atom_tail(&mut self, pred: String) -> Result<Formula, SyntaxError> {
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)` after atom arguments")?;
        }
        Ok(Formula::Atom(Atom { pred, args }))
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Ident(c) => {
                self.bump();
                Ok(Term::Const(c))
            }
            Tok::AbsOpen => {
                self.bump();
                let body = self.formula()?;
                self.expect(Tok::AbsClose, "`>>` closing the abstraction")?;
                let mut hidden = Vec::new();
                if self.eat(&Tok::LBracket) {
                    self.expect(Tok::Hide, "`hide`")?;
                    loop {
                        match self.bump() {
                            Tok::Var(v) => hidden.push(v),
                            _ => return Err(self.fail("expected a variable in the hide list")),
                        }
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RBracket, "`]` closing the hide list")?;
                }
                let (line, col) = self.here();
                let abs = mk_abs(body, &hidden).map_err(|e| SyntaxError::Parse {
                    line,
                    col,
                    message: e.to_string(),
                })?;
                Ok(Term::Abs(abs))
            }
            _ => Err(self.fail("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilattice::TruthValue;
    use crate::syntax::free_vars;

    #[test]
    fn quantifier_position_from_canonical_tuple() {
        let f = parse("exists X. p(X, c)").unwrap();
        match f {
            Formula::Quant { kind, position, .. } => {
                assert_eq!(kind, QuantKind::Exists);
                assert_eq!(position, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = parse("forall Y. q(X, Y)").unwrap();
        assert!(matches!(g, Formula::Quant { position: 2, .. }));
        assert_eq!(free_vars(&g), vec!["X"]);
    }

    #[test]
    fn builtin_propositions() {
        assert_eq!(
            parse("~p_bot").unwrap(),
            Formula::Not(Box::new(Formula::Builtin(TruthValue::Unknown)))
        );
        assert!(parse("p_t(a)").is_err());
    }

    #[test]
    fn know_atom_with_abstraction() {
        let f = parse("Know(now, me, <<moves(Arm)>>[hide Arm])").unwrap();
        match f {
            Formula::Atom(a) => {
                assert_eq!(a.pred, "Know");
                assert_eq!(a.args.len(), 3);
                match &a.args[2] {
                    Term::Abs(abs) => {
                        assert_eq!(abs.hidden, vec!["Arm"]);
                        assert!(abs.visible.is_empty());
                    }
                    other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // -> is right-associative and binds looser than | and &
        let f = parse("p -> q -> r").unwrap();
        match &f {
            Formula::Binary { op: Connective::Implies, right, .. } => {
                assert!(matches!(
                    right.as_ref(),
                    Formula::Binary { op: Connective::Implies, .. }
                ));
            }
            other => panic!("unexpected {other:?}"),
        }
        let g = parse("p & q | r").unwrap();
        assert!(matches!(g, Formula::Binary { op: Connective::Or, .. }));
        // quantifier scope is the immediately following unary formula
        let h = parse("exists X. p(X) & q").unwrap();
        assert!(matches!(h, Formula::Binary { op: Connective::And, .. }));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("exists X. p(Y)").unwrap_err();
        assert!(e.to_string().contains("not free"), "{e}");
        let e = parse("p &").unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = parse("T(<<p(X)>>[hide Y])").unwrap_err();
        assert!(e.to_string().contains("hidden"), "{e}");
    }
}
