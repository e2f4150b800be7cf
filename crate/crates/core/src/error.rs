use thiserror::Error;

use crate::types::SimpleType;

/// Errors from building, typing, or substituting terms and rules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch in {context}: expected {expected}, found {found}")]
    TypeMismatch {
        context: String,
        expected: SimpleType,
        found: SimpleType,
    },
    #[error("`{term}` has base type {ty} and cannot be applied")]
    NotAFunction { term: String, ty: SimpleType },
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("duplicate base type `{0}`")]
    DuplicateBaseType(String),
    #[error("unknown base type `{0}`")]
    UnknownBaseType(String),
    #[error("bad rule `{rule}`: {reason}")]
    Pattern { rule: String, reason: String },
}
