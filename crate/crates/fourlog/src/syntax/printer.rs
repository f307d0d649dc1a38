//! Canonical printer. `parse(print(f)) == f` for every well-formed formula,
//! and printed text is minimally parenthesized for the grammar's precedence.

use super::{free_vars, Connective, Formula, QuantKind, Term};

// Precedence levels, loosest first. An operand printed at level `n` needs
// parentheses when its own level is below `n`.
const IFF: u8 = 1;
const IMPL: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, IFF);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Equiv(..) => IFF,
        Formula::Binary { op, .. } => match op {
            Connective::Implies => IMPL,
            Connective::Or => OR,
            Connective::And => AND,
        },
        Formula::Not(_) | Formula::Quant { .. } => UNARY,
        Formula::Atom(_) | Formula::Builtin(_) => UNARY + 1,
    }
}

fn write_formula(out: &mut String, f: &Formula, min: u8) {
    let mine = level(f);
    if mine < min {
        out.push('(');
        write_formula(out, f, IFF);
        out.push(')');
        return;
    }
    match f {
        Formula::Atom(a) => {
            out.push_str(&a.pred);
            if !a.args.is_empty() {
                out.push('(');
                for (i, t) in a.args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_term(out, t);
                }
                out.push(')');
            }
        }
        Formula::Builtin(a) => {
            out.push_str("p_");
            out.push_str(&a.to_string());
        }
        Formula::Not(sub) => {
            out.push('~');
            write_formula(out, sub, UNARY);
        }
        Formula::Binary { op, left, right, .. } => {
            let (sym, lmin, rmin) = match op {
                // right-associative: the left operand must sit one level up
                Connective::Implies => (" -> ", IMPL + 1, IMPL),
                Connective::Or => (" | ", OR, OR + 1),
                Connective::And => (" & ", AND, AND + 1),
            };
            write_formula(out, left, lmin);
            out.push_str(sym);
            write_formula(out, right, rmin);
        }
        Formula::Equiv(left, right) => {
            write_formula(out, left, IFF);
            out.push_str(" <-> ");
            write_formula(out, right, IFF + 1);
        }
        Formula::Quant { kind, position, body } => {
            let tuple = free_vars(body);
            match tuple.get(*position - 1) {
                Some(var) => {
                    out.push_str(match kind {
                        QuantKind::Exists => "exists ",
                        QuantKind::Forall => "forall ",
                    });
                    out.push_str(var);
                    out.push_str(". ");
                    write_formula(out, body, UNARY);
                }
                // vacuous quantifier (hand-built AST): semantically the
                // identity, so render the body alone
                None => write_formula(out, body, min),
            }
        }
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Const(c) => out.push_str(c),
        Term::Abs(abs) => {
            out.push_str("<<");
            write_formula(out, &abs.body, IFF);
            out.push_str(">>");
            if !abs.hidden.is_empty() {
                out.push_str("[hide ");
                for (i, v) in abs.hidden.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(v);
                }
                out.push(']');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn round_trip(text: &str) {
        let ast = parse(text).unwrap();
        let printed = print(&ast);
        assert_eq!(printed, text, "canonical text");
        assert_eq!(parse(&printed).unwrap(), ast, "reparse");
    }

    #[test]
    fn canonical_forms_round_trip() {
        round_trip("p(a, X) & q(X)");
        round_trip("~(p | q) -> r");
        round_trip("p -> q -> r");
        round_trip("(p -> q) -> r");
        round_trip("p <-> ~q");
        round_trip("(p <-> q) <-> r");
        round_trip("exists X. (p(X) & q(X, c))");
        round_trip("forall X. ~moves(X)");
        round_trip("Know(in-present, me, <<moves(arm1)>>)");
        round_trip("T(<<p(X, Y)>>[hide X, Y])");
        round_trip("p_bot <-> Know(now, me, <<p_f>>)");
    }

    #[test]
    fn parentheses_only_where_needed() {
        let ast = parse("(p & q) | (r & s)").unwrap();
        assert_eq!(print(&ast), "p & q | r & s");
        let ast = parse("p & (q | r)").unwrap();
        assert_eq!(print(&ast), "p & (q | r)");
        let ast = parse("~(p)").unwrap();
        assert_eq!(print(&ast), "~p");
    }
}
