//! Minimal s-expression reader for the SMT-LIB subset we consume.
//!
//! Comments (`;` to end of line) are stripped; string literals and
//! `|`-quoted symbols are preserved as single atoms.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn atom(s: impl Into<String>) -> SExpr {
        SExpr::Atom(s.into())
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) => Some(s),
            SExpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::Atom(_) => None,
            SExpr::List(items) => Some(items),
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s) => write!(f, "{s}"),
            SExpr::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SExprError {
    #[error("unbalanced parentheses at line {line}, column {col}")]
    UnbalancedParens { line: usize, col: usize },
    #[error("invalid token at line {line}, column {col}: {what}")]
    InvalidToken { line: usize, col: usize, what: String },
}

struct Lexer<'a> {
    input: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug)]
enum Token {
    Open,
    Close,
    Atom(String),
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Lexer<'a> {
        Lexer { input, pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self, c: char) {
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize, usize)>, SExprError> {
        loop {
            let Some(c) = self.peek() else { return Ok(None) };
            if c.is_whitespace() {
                self.bump(c);
                continue;
            }
            if c == ';' {
                while let Some(c) = self.peek() {
                    self.bump(c);
                    if c == '\n' {
                        break;
                    }
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            match c {
                '(' => {
                    self.bump(c);
                    return Ok(Some((Token::Open, line, col)));
                }
                ')' => {
                    self.bump(c);
                    return Ok(Some((Token::Close, line, col)));
                }
                '"' | '|' => {
                    let delim = c;
                    let mut text = String::new();
                    text.push(c);
                    self.bump(c);
                    loop {
                        match self.peek() {
                            None => {
                                return Err(SExprError::InvalidToken {
                                    line,
                                    col,
                                    what: format!("unterminated {delim} literal"),
                                })
                            }
                            Some(d) => {
                                text.push(d);
                                self.bump(d);
                                if d == delim {
                                    // SMT-LIB escapes a quote by doubling it.
                                    if delim == '"' && self.peek() == Some('"') {
                                        text.push('"');
                                        self.bump('"');
                                        continue;
                                    }
                                    break;
                                }
                            }
                        }
                    }
                    return Ok(Some((Token::Atom(text), line, col)));
                }
                _ => {
                    let mut text = String::new();
                    while let Some(d) = self.peek() {
                        if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                            break;
                        }
                        if d.is_control() {
                            return Err(SExprError::InvalidToken {
                                line,
                                col,
                                what: "control character in token".into(),
                            });
                        }
                        text.push(d);
                        self.bump(d);
                    }
                    return Ok(Some((Token::Atom(text), line, col)));
                }
            }
        }
    }
}

/// Parses a whole input into a forest of s-expressions.
pub fn parse_sexprs(text: &str) -> Result<Vec<SExpr>, SExprError> {
    let mut lexer = Lexer::new(text);
    let mut stack: Vec<(Vec<SExpr>, usize, usize)> = Vec::new();
    let mut forest = Vec::new();
    while let Some((tok, line, col)) = lexer.next_token()? {
        match tok {
            Token::Open => stack.push((Vec::new(), line, col)),
            Token::Close => {
                let Some((items, ..)) = stack.pop() else {
                    return Err(SExprError::UnbalancedParens { line, col });
                };
                let node = SExpr::List(items);
                match stack.last_mut() {
                    Some((parent, ..)) => parent.push(node),
                    None => forest.push(node),
                }
            }
            Token::Atom(a) => match stack.last_mut() {
                Some((parent, ..)) => parent.push(SExpr::Atom(a)),
                None => forest.push(SExpr::Atom(a)),
            },
        }
    }
    if let Some((_, line, col)) = stack.pop() {
        return Err(SExprError::UnbalancedParens { line, col });
    }
    Ok(forest)
}
