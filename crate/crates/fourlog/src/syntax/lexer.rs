//! Tokenizer for the formula grammar, tracking line and column positions.

use crate::bilattice::TruthValue;

use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    AbsOpen,
    AbsClose,
    Exists,
    Forall,
    Hide,
    BuiltinProp(TruthValue),
    /// Lowercase-initial identifier: constant or predicate name.
    Ident(String),
    /// Uppercase-initial identifier: variable (or the predicates T / Know).
    Var(String),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut pos = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! push {
        ($t:expr, $l:expr, $c:expr) => {
            toks.push(Token { tok: $t, line: $l, col: $c })
        };
    }

    while pos < chars.len() {
        let (l, c) = (line, col);
        let ch = chars[pos];
        let mut advance = |n: usize, pos: &mut usize, col: &mut usize| {
            *pos += n;
            *col += n;
        };
        match ch {
            '\n' => {
                pos += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => advance(1, &mut pos, &mut col),
            '#' => {
                while pos < chars.len() && chars[pos] != '\n' {
                    pos += 1;
                }
            }
            '(' => {
                push!(Tok::LParen, l, c);
                advance(1, &mut pos, &mut col);
            }
            ')' => {
                push!(Tok::RParen, l, c);
                advance(1, &mut pos, &mut col);
            }
            '[' => {
                push!(Tok::LBracket, l, c);
                advance(1, &mut pos, &mut col);
            }
            ']' => {
                push!(Tok::RBracket, l, c);
                advance(1, &mut pos, &mut col);
            }
            ',' => {
                push!(Tok::Comma, l, c);
                advance(1, &mut pos, &mut col);
            }
            '.' => {
                push!(Tok::Dot, l, c);
                advance(1, &mut pos, &mut col);
            }
            '~' => {
                push!(Tok::Tilde, l, c);
                advance(1, &mut pos, &mut col);
            }
            '&' => {
                push!(Tok::Amp, l, c);
                advance(1, &mut pos, &mut col);
            }
            '|' => {
                push!(Tok::Pipe, l, c);
                advance(1, &mut pos, &mut col);
            }
            '<' => {
                if chars.get(pos + 1) == Some(&'<') {
                    push!(Tok::AbsOpen, l, c);
                    advance(2, &mut pos, &mut col);
                } else if chars.get(pos + 1) == Some(&'-') && chars.get(pos + 2) == Some(&'>') {
                    push!(Tok::Iff, l, c);
                    advance(3, &mut pos, &mut col);
                } else {
                    return Err(err(l, c, "expected `<<` or `<->`"));
                }
            }
            '>' => {
                if chars.get(pos + 1) == Some(&'>') {
                    push!(Tok::AbsClose, l, c);
                    advance(2, &mut pos, &mut col);
                } else {
                    return Err(err(l, c, "expected `>>`"));
                }
            }
            '-' => {
                if chars.get(pos + 1) == Some(&'>') {
                    push!(Tok::Arrow, l, c);
                    advance(2, &mut pos, &mut col);
                } else {
                    return Err(err(l, c, "expected `->`"));
                }
            }
            _ if ch.is_ascii_lowercase() => {
                let word = read_ident(&chars, &mut pos, &mut col);
                let tok = match word.as_str() {
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    "hide" => Tok::Hide,
                    "p_t" => Tok::BuiltinProp(TruthValue::True),
                    "p_f" => Tok::BuiltinProp(TruthValue::False),
                    "p_bot" => Tok::BuiltinProp(TruthValue::Unknown),
                    "p_top" => Tok::BuiltinProp(TruthValue::Both),
                    _ => Tok::Ident(word),
                };
                push!(tok, l, c);
            }
            _ if ch.is_ascii_uppercase() => {
                let word = read_ident(&chars, &mut pos, &mut col);
                push!(Tok::Var(word), l, c);
            }
            other => return Err(err(l, c, &format!("unexpected character `{other}`"))),
        }
    }
    toks.push(Token { tok: Tok::Eof, line, col });
    Ok(toks)
}

// Identifiers may contain internal hyphens (`in-present`); a hyphen only
// continues the identifier when followed by an alphanumeric, so `a->b` still
// lexes as an arrow.
fn read_ident(chars: &[char], pos: &mut usize, col: &mut usize) -> String {
    let start = *pos;
    while *pos < chars.len() {
        let ch = chars[*pos];
        if ch.is_ascii_alphanumeric() || ch == '_' {
            *pos += 1;
        } else if ch == '-'
            && chars
                .get(*pos + 1)
                .is_some_and(|next| next.is_ascii_alphanumeric())
        {
            *pos += 1;
        } else {
            break;
        }
    }
    *col += *pos - start;
    chars[start..*pos].iter().collect()
}

fn err(line: usize, col: usize, message: &str) -> SyntaxError {
    SyntaxError::Parse {
        line,
        col,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyphenated_idents_and_arrows() {
        let toks = tokenize("in-present -> p_t").unwrap();
        assert_eq!(toks[0].tok, Tok::Ident("in-present".to_string()));
        assert_eq!(toks[1].tok, Tok::Arrow);
        assert_eq!(toks[2].tok, Tok::BuiltinProp(TruthValue::True));
    }

    #[test]
    fn positions_are_tracked() {
        let toks = tokenize("p(X)\n  & q").unwrap();
        let amp = toks.iter().find(|t| t.tok == Tok::Amp).unwrap();
        assert_eq!((amp.line, amp.col), (2, 3));
    }

    #[test]
    fn rejects_stray_characters() {
        let e = tokenize("p ? q").unwrap_err();
        assert!(e.to_string().contains("line 1, col 3"));
    }
}
