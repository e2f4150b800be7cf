//! Readers and printers for `.trs` systems, `.csint` interpretations,
//! terms and monotone expressions.
//!
//! A `.trs` file is a list of statements, one per line:
//!
//! ```text
//! type nat
//! cons 0 : nat
//! cons s : nat -> nat
//! fun add : nat -> nat -> nat
//! rule add x 0 => x
//! rule add x (s y) => s (add x y)
//! ```
//!
//! A `.csint` file gives a dimension for every base type and a cost-size
//! tuple `< cost, size >` for every symbol:
//!
//! ```text
//! key nat = 1
//! int s = < (0, \x. (0, u)), \x. x + 1 >
//! ```

mod expr;
mod lexer;
mod term;
mod trs;

use std::fmt;

pub use expr::{parse_expr, parse_interpretation, pretty_interpretation};
pub use trs::{parse_term, parse_trs, pretty_trs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Type,
    Pattern,
    DuplicateSymbol,
    MissingKey,
    MissingSymbol,
    Shape,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Type => "type error",
            ParseErrorKind::Pattern => "pattern error",
            ParseErrorKind::DuplicateSymbol => "duplicate symbol",
            ParseErrorKind::MissingKey => "missing key",
            ParseErrorKind::MissingSymbol => "missing symbol",
            ParseErrorKind::Shape => "shape error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.kind, self.message)
    }
}

impl std::error::Error for ParseError {}
