//! Concrete syntax.
//!
//! ```text
//! expr    ::= "nu" IDENT "." expr | IDENT | "[" payload "]" args?
//! args    ::= "(" (expr ("," expr)*)? ")"
//! ```
//!
//! The bracket payload is interpreted by the configured functor. `ν` is
//! accepted for `nu` and `[()]` for `[]`. `#` starts a line comment.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{check_wellformed, Expr, Path, WellFormed, WellFormedError};
use crate::signature::{Functor, SignatureError};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    Character(char),
    #[error("unterminated modality bracket")]
    UnterminatedBracket,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("{0}")]
    Modality(String),
    #[error(transparent)]
    Arity(SignatureError),
    #[error(transparent)]
    WellFormed(WellFormedError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{position}: {kind}")]
pub struct ParseError {
    pub position: Position,
    pub kind: ParseErrorKind,
}

/// A parsed expression with the source position of every node.
#[derive(Debug, Clone)]
pub struct Parsed<M> {
    pub expr: Expr<M>,
    pub spans: HashMap<Path, Position>,
}

impl<M> Parsed<M> {
    pub fn position(&self, path: &[usize]) -> Option<Position> {
        self.spans.get(path).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Nu,
    Ident(String),
    Dot,
    LParen,
    RParen,
    Comma,
    Bracket(String),
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Nu => f.write_str("`nu`"),
            Token::Ident(z) => write!(f, "identifier `{z}`"),
            Token::Dot => f.write_str("`.`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Comma => f.write_str("`,`"),
            Token::Bracket(p) => write!(f, "modality `[{p}]`"),
            Token::End => f.write_str("end of input"),
        }
    }
}

/// Whether `s` can be used as a variable name.
pub fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && s != "nu"
}

fn lex(text: &str) -> Result<Vec<(Token, Position)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '.' | '(' | ')' | ',' => {
                bump!();
                let tok = match c {
                    '.' => Token::Dot,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    _ => Token::Comma,
                };
                tokens.push((tok, pos));
            }
            'ν' => {
                bump!();
                tokens.push((Token::Nu, pos));
            }
            '[' => {
                bump!();
                let mut payload = String::new();
                loop {
                    match bump!() {
                        Some(']') => break,
                        Some(c) => payload.push(c),
                        None => {
                            return Err(ParseError {
                                position: pos,
                                kind: ParseErrorKind::UnterminatedBracket,
                            })
                        }
                    }
                }
                if payload.trim() == "()" {
                    payload.clear();
                }
                tokens.push((Token::Bracket(payload), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let tok = if word == "nu" { Token::Nu } else { Token::Ident(word) };
                tokens.push((tok, pos));
            }
            other => {
                return Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::Character(other),
                })
            }
        }
    }
    tokens.push((Token::End, Position { line, column }));
    Ok(tokens)
}

struct Parser<'a, F: Functor> {
    functor: &'a F,
    tokens: Vec<(Token, Position)>,
    next: usize,
    path: Path,
    spans: HashMap<Path, Position>,
}

impl<F: Functor> Parser<'_, F> {
    fn peek(&self) -> &(Token, Position) {
        &self.tokens[self.next]
    }

    fn advance(&mut self) -> (Token, Position) {
        let tok = self.tokens[self.next].clone();
        if tok.0 != Token::End {
            self.next += 1;
        }
        tok
    }

    fn expect(&mut self, want: Token, expected: &'static str) -> Result<(), ParseError> {
        let (tok, position) = self.advance();
        if tok == want {
            Ok(())
        } else {
            Err(ParseError {
                position,
                kind: ParseErrorKind::Unexpected { expected, found: tok.to_string() },
            })
        }
    }

    fn expr(&mut self) -> Result<Expr<F::Modality>, ParseError> {
        let (tok, position) = self.advance();
        self.spans.insert(self.path.clone(), position);
        match tok {
            Token::Ident(z) => Ok(Expr::Var(z)),
            Token::Nu => {
                let (tok, position) = self.advance();
                let Token::Ident(z) = tok else {
                    return Err(ParseError {
                        position,
                        kind: ParseErrorKind::Unexpected {
                            expected: "a variable after `nu`",
                            found: tok.to_string(),
                        },
                    });
                };
                self.expect(Token::Dot, "`.` after the bound variable")?;
                self.path.push(0);
                let body = self.expr()?;
                self.path.pop();
                Ok(Expr::nu(z, body))
            }
            Token::Bracket(payload) => {
                let op = self.functor.parse_modality(&payload).map_err(|msg| ParseError {
                    position,
                    kind: ParseErrorKind::Modality(msg),
                })?;
                let mut args = Vec::new();
                if self.peek().0 == Token::LParen {
                    self.advance();
                    if self.peek().0 == Token::RParen {
                        self.advance();
                    } else {
                        loop {
                            self.path.push(args.len());
                            args.push(self.expr()?);
                            self.path.pop();
                            let (tok, position) = self.advance();
                            match tok {
                                Token::Comma => continue,
                                Token::RParen => break,
                                other => {
                                    return Err(ParseError {
                                        position,
                                        kind: ParseErrorKind::Unexpected {
                                            expected: "`,` or `)`",
                                            found: other.to_string(),
                                        },
                                    })
                                }
                            }
                        }
                    }
                }
                self.functor.check_args(&op, args.len()).map_err(|e| ParseError {
                    position,
                    kind: match e {
                        SignatureError::Arity { .. } => ParseErrorKind::Arity(e),
                        other => ParseErrorKind::Modality(other.to_string()),
                    },
                })?;
                Ok(Expr::Modal(op, args))
            }
            other => Err(ParseError {
                position,
                kind: ParseErrorKind::Unexpected {
                    expected: "an expression",
                    found: other.to_string(),
                },
            }),
        }
    }
}

/// Parses one expression; arities are checked against `functor`.
pub fn parse<F: Functor>(text: &str, functor: &F) -> Result<Parsed<F::Modality>, ParseError> {
    let mut parser = Parser {
        functor,
        tokens: lex(text)?,
        next: 0,
        path: Vec::new(),
        spans: HashMap::new(),
    };
    let expr = parser.expr()?;
    let (tok, position) = parser.advance();
    if tok != Token::End {
        return Err(ParseError {
            position,
            kind: ParseErrorKind::Unexpected { expected: "end of input", found: tok.to_string() },
        });
    }
    Ok(Parsed { expr, spans: parser.spans })
}

/// Parses and checks membership in `E₀`, locating violations in the source.
pub fn parse_wellformed<F: Functor>(
    text: &str,
    functor: &F,
) -> Result<WellFormed<F::Modality>, ParseError> {
    let parsed = parse(text, functor)?;
    if let Some(err) = check_wellformed(&parsed.expr).violation {
        let position = parsed.position(err.path()).unwrap_or(Position { line: 1, column: 1 });
        return Err(ParseError { position, kind: ParseErrorKind::WellFormed(err) });
    }
    Ok(WellFormed::new(parsed.expr).expect("checked above"))
}
