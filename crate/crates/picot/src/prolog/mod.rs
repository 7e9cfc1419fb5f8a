//! Restricted Prolog query sub-language: AST, lexer, parser, and canonical
//! printer. Parsing is total: every input yields a goal list or a
//! [`ParseError`], never a panic.

mod ast;
mod lexer;
mod parser;

pub use ast::{Date, Goal, Query, Term};
pub use parser::{
    is_var_name, parse_goal_list, parse_literal, parse_query, parse_term_text, print_query,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParseErrorKind {
    /// Bareword constant containing whitespace or punctuation outside quotes.
    UnquotedConstant,
    /// `\+` anywhere in the input.
    NegationUnsupported,
    EmptyInput,
    MalformedTerm,
    BadAggregate,
    UnbalancedDelimiter,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{kind:?} at byte {position}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input, clamped to its length.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(
        kind: ParseErrorKind,
        position: usize,
        message: impl Into<String>,
        input: &str,
    ) -> ParseError {
        ParseError {
            kind,
            position: position.min(input.len()),
            message: message.into(),
        }
    }
}
