//! Concrete syntax, labeling and scoping for CAP terms.

mod ast;
mod label;
mod lexer;
mod parser;
mod pretty;

use thiserror::Error;

pub use ast::*;
pub use label::{label, LabeledTerm, NameInfo};
pub use parser::parse;
pub use pretty::pretty;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("{line}:{col}: unexpected character `{ch}`")]
    UnexpectedChar { line: usize, col: usize, ch: char },
    #[error("{line}:{col}: unbound identifier `{name}`")]
    Unbound { name: String, line: usize, col: usize },
    #[error("{line}:{col}: message `{label}` has arity {found} here but {expected} elsewhere")]
    ArityMismatch { label: String, expected: usize, found: usize, line: usize, col: usize },
    #[error("{line}:{col}: message label `{label}` handled twice in one behavior set")]
    DuplicateBranch { label: String, line: usize, col: usize },
    #[error("{line}:{col}: `{name}` bound twice by the same branch")]
    DuplicateBinder { name: String, line: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("program point {0} is annotated more than once")]
    DuplicatePoint(Point),
    #[error("name label {0} is annotated more than once")]
    DuplicateName(NameLabel),
}

/// Errors from turning source text into a labeled term.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// Parse and label in one go.
pub fn parse_labeled(source: &str) -> Result<LabeledTerm, FrontendError> {
    Ok(label(&parse(source)?)?)
}
