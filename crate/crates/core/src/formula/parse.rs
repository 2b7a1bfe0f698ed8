//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := ( "~" | "!" ) unary | atom | "(" imp ")"
//! atom  := [A-Za-z][A-Za-z0-9_]*
//! ```

use thiserror::Error;

use super::InputFormula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("atom `{name}`"),
            Token::Not => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' | b'!' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Token::Arrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Token::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: start, message: format!("unexpected character `{ch}`") });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Token::Eof, text.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].0.clone();
        if tok != Token::Eof {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.offset(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn implication(&mut self) -> Result<InputFormula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Token::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(InputFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<InputFormula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Token::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = InputFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<InputFormula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = InputFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<InputFormula, ParseError> {
        match self.peek().clone() {
            Token::Not => {
                self.bump();
                Ok(InputFormula::Not(Box::new(self.unary()?)))
            }
            Token::Ident(name) => {
                self.bump();
                Ok(InputFormula::Atom(name))
            }
            Token::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Token::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("atom, `~` or `(`")),
        }
    }
}

/// Parses surface syntax; `->` is right-associative, `&` and `|` are
/// left-associative, and `~` binds tightest.
pub fn parse_input(text: &str) -> Result<InputFormula, ParseError> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
    let f = p.implication()?;
    if *p.peek() != Token::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}
