//! Concrete syntax for formulas.
//!
//! Grammar sketch, loosest binding first:
//!
//! ```text
//! formula  := ("forall" | "exists") var+ "." formula
//!           | iff
//! iff      := implies ("<->" iff)?          right-associative
//! implies  := or ("->" implies)?            right-associative
//! or       := and ("|" and)*                left-associative
//! and      := unary ("&" unary)*            left-associative
//! unary    := "~" unary | primary
//! primary  := Relation "(" term ("," term)* ")"
//!           | term "=" term
//!           | "(" formula ")"
//! term     := ident ("(" term ("," term)* ")")?
//! ```
//!
//! Identifiers match `[A-Za-z][A-Za-z0-9_]*`. Relation names start with an
//! uppercase letter; everything else is lowercase. There are no variable
//! declarations: an identifier is a variable exactly when it appears in some
//! quantifier prefix, and any other lowercase identifier in term position is
//! a constant (or a function symbol when applied). `%` starts a comment that
//! runs to end of line. The byte `#` is reserved as the padding pseudo-blank
//! and is rejected wherever it appears.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::syntax::{Formula, SymbolError, SymbolTable, Term};

/// Reserved pseudo-blank byte; see [`crate::padding`].
pub const PSEUDO_BLANK: u8 = b'#';

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{pos}: expected {expected}, found {found}")]
    Syntax {
        pos: Position,
        expected: String,
        found: String,
    },
    #[error("{pos}: `{name}` used with arity {second} but previously with arity {first}")]
    ArityMismatch {
        pos: Position,
        name: String,
        first: usize,
        second: usize,
    },
    #[error("{pos}: reserved pseudo-blank byte 0x23 (`#`) in source")]
    ReservedByte { pos: Position },
}

/// A parsed formula together with its raw text and provenance.
#[derive(Debug, Clone)]
pub struct SourceFormula {
    pub text: String,
    pub origin: Origin,
    pub formula: Formula,
    pub symbols: SymbolTable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Inline,
    File(PathBuf),
}

impl SourceFormula {
    pub fn from_text(text: &str) -> Result<Self, ParseError> {
        let (formula, symbols) = parse(text)?;
        Ok(SourceFormula {
            text: text.to_string(),
            origin: Origin::Inline,
            formula,
            symbols,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, std::io::Error> {
        let text = std::fs::read_to_string(path)?;
        let (formula, symbols) = parse(&text).map_err(|e| {
            std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("{}: {e}", path.display()),
            )
        })?;
        Ok(SourceFormula {
            text,
            origin: Origin::File(path.to_path_buf()),
            formula,
            symbols,
        })
    }
}

/// Parses one formula and infers its symbol table. Relation and function
/// arities are fixed by first use and checked on every later use.
pub fn parse(text: &str) -> Result<(Formula, SymbolTable), ParseError> {
    let tokens = lex(text)?;
    let quantified = quantified_names(&tokens);
    let mut parser = Parser {
        tokens: &tokens,
        index: 0,
        quantified,
        symbols: SymbolTable::new(),
    };
    let formula = parser.formula()?;
    parser.expect_eof()?;
    Ok((formula, parser.symbols))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Forall,
    Exists,
    Lower(String),
    Upper(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Forall => write!(f, "`forall`"),
            Tok::Exists => write!(f, "`exists`"),
            Tok::Lower(s) | Tok::Upper(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DoubleArrow => write!(f, "`<->`"),
            Tok::Equals => write!(f, "`=`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    macro_rules! pos {
        () => {
            Position { line, col }
        };
    }
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            PSEUDO_BLANK => return Err(ParseError::ReservedByte { pos: pos!() }),
            b'\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            b' ' | b'\t' | b'\r' => {
                i += 1;
                col += 1;
            }
            b'%' => {
                // Comment to end of line; the reserved-byte check still
                // applies inside comments.
                while i < bytes.len() && bytes[i] != b'\n' {
                    if bytes[i] == PSEUDO_BLANK {
                        return Err(ParseError::ReservedByte { pos: pos!() });
                    }
                    i += 1;
                    col += 1;
                }
            }
            b'(' => {
                tokens.push((Tok::LParen, pos!()));
                i += 1;
                col += 1;
            }
            b')' => {
                tokens.push((Tok::RParen, pos!()));
                i += 1;
                col += 1;
            }
            b',' => {
                tokens.push((Tok::Comma, pos!()));
                i += 1;
                col += 1;
            }
            b'.' => {
                tokens.push((Tok::Dot, pos!()));
                i += 1;
                col += 1;
            }
            b'~' => {
                tokens.push((Tok::Tilde, pos!()));
                i += 1;
                col += 1;
            }
            b'&' => {
                tokens.push((Tok::Amp, pos!()));
                i += 1;
                col += 1;
            }
            b'|' => {
                tokens.push((Tok::Pipe, pos!()));
                i += 1;
                col += 1;
            }
            b'=' => {
                tokens.push((Tok::Equals, pos!()));
                i += 1;
                col += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((Tok::Arrow, pos!()));
                    i += 2;
                    col += 2;
                } else {
                    return Err(ParseError::Syntax {
                        pos: pos!(),
                        expected: "`->`".into(),
                        found: "`-`".into(),
                    });
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    tokens.push((Tok::DoubleArrow, pos!()));
                    i += 3;
                    col += 3;
                } else {
                    return Err(ParseError::Syntax {
                        pos: pos!(),
                        expected: "`<->`".into(),
                        found: "`<`".into(),
                    });
                }
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                let start = i;
                let start_pos = pos!();
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                    col += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    _ if b.is_ascii_uppercase() => Tok::Upper(word.to_string()),
                    _ => Tok::Lower(word.to_string()),
                };
                tokens.push((tok, start_pos));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: pos!(),
                    expected: "a token".into(),
                    found: format!("`{}`", ch.escape_default()),
                });
            }
        }
    }
    Ok(tokens)
}

/// First pass: every lowercase identifier that appears in a quantifier
/// prefix is a variable throughout the formula.
fn quantified_names(tokens: &[(Tok, Position)]) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    let mut i = 0;
    while i < tokens.len() {
        if matches!(tokens[i].0, Tok::Forall | Tok::Exists) {
            i += 1;
            while let Some((Tok::Lower(name), _)) = tokens.get(i) {
                names.insert(name.clone());
                i += 1;
            }
        } else {
            i += 1;
        }
    }
    names
}

struct Parser<'a> {
    tokens: &'a [(Tok, Position)],
    index: usize,
    quantified: BTreeSet<String>,
    symbols: SymbolTable,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.index).map(|(t, _)| t)
    }

    fn pos(&self) -> Position {
        self.tokens
            .get(self.index)
            .or_else(|| self.tokens.last())
            .map(|(_, p)| *p)
            .unwrap_or(Position { line: 1, col: 1 })
    }

    fn found(&self) -> String {
        match self.tokens.get(self.index) {
            Some((t, _)) => t.to_string(),
            None => "end of input".to_string(),
        }
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.tokens.get(self.index).map(|(t, _)| t);
        self.index += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.index += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.found(),
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if self.index == self.tokens.len() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Forall) | Some(Tok::Exists) => self.quantifier_block(),
            _ => self.iff(),
        }
    }

    fn quantifier_block(&mut self) -> Result<Formula, ParseError> {
        let universal = matches!(self.peek(), Some(Tok::Forall));
        self.bump();
        let mut vars = Vec::new();
        while let Some(Tok::Lower(name)) = self.peek() {
            vars.push(name.clone());
            self.bump();
        }
        if vars.is_empty() {
            return Err(self.error("a variable name"));
        }
        self.expect(Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(vars.into_iter().rev().fold(body, |f, v| {
            if universal {
                Formula::forall(v, f)
            } else {
                Formula::exists(v, f)
            }
        }))
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let left = self.implies()?;
        if self.eat(&Tok::DoubleArrow) {
            let right = self.iff()?;
            Ok(Formula::iff(left, right))
        } else {
            Ok(left)
        }
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implies()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.and()?;
        while self.eat(&Tok::Pipe) {
            let right = self.and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            let right = self.unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Tilde) {
            Ok(Formula::not(self.unary()?))
        } else if matches!(self.peek(), Some(Tok::Forall) | Some(Tok::Exists)) {
            // A quantifier in operand position still scopes to the end of
            // the enclosing subformula.
            self.quantifier_block()
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Upper(name)) => {
                let pos = self.pos();
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let terms = self.term_list()?;
                self.expect(Tok::RParen, "`)` or `,`")?;
                self.declare_relation(&name, terms.len(), pos)?;
                Ok(Formula::Atom(name, terms))
            }
            Some(Tok::Lower(_)) => {
                let t1 = self.term()?;
                self.expect(Tok::Equals, "`=`")?;
                let t2 = self.term()?;
                Ok(Formula::Equal(t1, t2))
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.error("a formula")),
        }
    }

    fn term_list(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            terms.push(self.term()?);
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        let name = match self.peek().cloned() {
            Some(Tok::Lower(name)) => {
                self.bump();
                name
            }
            _ => return Err(self.error("a term")),
        };
        let is_variable = self.quantified.contains(&name);
        if self.peek() == Some(&Tok::LParen) {
            if is_variable {
                return Err(ParseError::Syntax {
                    pos,
                    expected: "a function or constant symbol".into(),
                    found: format!("quantified variable `{name}` applied to arguments"),
                });
            }
            self.bump();
            let args = self.term_list()?;
            self.expect(Tok::RParen, "`)` or `,`")?;
            self.declare_function(&name, args.len(), pos)?;
            Ok(Term::FunctionApp(name, args))
        } else if is_variable {
            Ok(Term::Variable(name))
        } else {
            self.declare_constant(&name, pos)?;
            Ok(Term::Constant(name))
        }
    }

    fn declare_relation(
        &mut self,
        name: &str,
        arity: usize,
        pos: Position,
    ) -> Result<(), ParseError> {
        self.symbols
            .declare_relation(name, arity)
            .map_err(|e| symbol_error(e, pos))
    }

    fn declare_function(
        &mut self,
        name: &str,
        arity: usize,
        pos: Position,
    ) -> Result<(), ParseError> {
        self.symbols
            .declare_function(name, arity)
            .map_err(|e| symbol_error(e, pos))
    }

    fn declare_constant(&mut self, name: &str, pos: Position) -> Result<(), ParseError> {
        self.symbols
            .declare_constant(name)
            .map_err(|e| symbol_error(e, pos))
    }
}

fn symbol_error(err: SymbolError, pos: Position) -> ParseError {
    match err {
        SymbolError::RelationArity {
            name,
            first,
            second,
        }
        | SymbolError::FunctionArity {
            name,
            first,
            second,
        }
        | SymbolError::AtomArity {
            name,
            expected: first,
            found: second,
        } => ParseError::ArityMismatch {
            pos,
            name,
            first,
            second,
        },
        // A name used both as a constant and as a function is an arity
        // conflict between 0 and some n; the exact n is unknown here.
        SymbolError::NameClash(name, ..) => ParseError::ArityMismatch {
            pos,
            name,
            first: 0,
            second: 1,
        },
        SymbolError::ZeroArity(name) => ParseError::Syntax {
            pos,
            expected: "at least one argument".into(),
            found: format!("nullary use of `{name}`"),
        },
        SymbolError::UndeclaredRelation(name) => ParseError::Syntax {
            pos,
            expected: "a declared relation".into(),
            found: format!("`{name}`"),
        },
    }
}
