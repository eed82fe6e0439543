//! Recursive-descent parser for the formula grammar
//!
//! ```text
//! formula := imp
//! imp     := disj ("->" imp)?
//! disj    := conj ("|" conj)*
//! conj    := atom ("&" atom)*
//! atom    := IDENT | "false" | "(" formula ")"
//! ```

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    False,
    Arrow,
    And,
    Or,
    LParen,
    RParen,
    End,
}

impl Token<'_> {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("identifier `{name}`"),
            Token::False => "`false`".into(),
            Token::Arrow => "`->`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token<'_>, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            b')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            b'&' => {
                tokens.push((Token::And, i));
                i += 1;
            }
            b'|' => {
                tokens.push((Token::Or, i));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                tokens.push((Token::Arrow, i));
                i += 2;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let token = if word == "false" {
                    Token::False
                } else {
                    Token::Ident(word)
                };
                tokens.push((token, start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    tokens.push((Token::End, text.len()));
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(Token<'a>, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token<'a> {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.disj()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while *self.peek() == Token::Or {
            self.bump();
            let right = self.conj()?;
            acc = Formula::or(acc, right);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.atom()?;
        while *self.peek() == Token::And {
            self.bump();
            let right = self.atom()?;
            acc = Formula::and(acc, right);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match *self.peek() {
            Token::Ident(name) => {
                self.bump();
                Ok(Formula::var(name))
            }
            Token::False => {
                self.bump();
                Ok(Formula::Falsum)
            }
            Token::LParen => {
                self.bump();
                let inner = self.imp()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("a formula")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let formula = parser.imp()?;
    if *parser.peek() != Token::End {
        return Err(parser.error("end of input"));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn arrow_is_right_associative() {
        let parsed = parse_formula("p->q->p").unwrap();
        assert_eq!(parsed, Formula::imp(v("p"), Formula::imp(v("q"), v("p"))));
    }

    #[test]
    fn explicit_parentheses() {
        let parsed = parse_formula("(p->q)->p").unwrap();
        assert_eq!(parsed, Formula::imp(Formula::imp(v("p"), v("q")), v("p")));
    }

    #[test]
    fn missing_left_operand() {
        let err = parse_formula("->p").unwrap_err();
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn unterminated_group_reports_end_offset() {
        let err = parse_formula("(p->").unwrap_err();
        assert_eq!(err.offset, 4);
    }

    #[test]
    fn precedence_and_associativity() {
        let parsed = parse_formula("a | b & c -> d").unwrap();
        let expected = Formula::imp(
            Formula::or(v("a"), Formula::and(v("b"), v("c"))),
            v("d"),
        );
        assert_eq!(parsed, expected);
        let parsed = parse_formula("a & b & c").unwrap();
        assert_eq!(parsed, Formula::and(Formula::and(v("a"), v("b")), v("c")));
        let parsed = parse_formula("a | b | c").unwrap();
        assert_eq!(parsed, Formula::or(Formula::or(v("a"), v("b")), v("c")));
    }

    #[test]
    fn falsum_and_identifiers() {
        assert_eq!(parse_formula("false").unwrap(), Formula::Falsum);
        assert_eq!(parse_formula("X_1_0").unwrap(), v("X_1_0"));
        assert_eq!(parse_formula("falsey").unwrap(), v("falsey"));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p q").is_err());
        assert_eq!(parse_formula("p $ q").unwrap_err().offset, 2);
        assert!(parse_formula("p -").is_err());
        assert!(parse_formula("(p").is_err());
        assert!(parse_formula("p)").is_err());
    }
}
