//! Class-expression queries: parsing, canonical printing and closed-world
//! evaluation.

mod ast;
mod eval;
mod parser;

use thiserror::Error;

use crate::ontology::{EntityKind, PropertyKind};

pub use ast::{ClassExpression, CompareOp};
pub use eval::{evaluate, result_order, Evaluator, QueryResult};
pub use parser::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("empty query")]
    Empty,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: EntityKind, name: String },
    #[error("property `{property}` is not {expected}-valued")]
    TypeMismatch { property: String, expected: PropertyKind },
}

impl QueryError {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            QueryError::Empty => "empty-input",
            QueryError::Syntax { .. } => "syntax-error",
            QueryError::UnknownName { .. } => "unknown-name",
            QueryError::TypeMismatch { .. } => "type-mismatch",
        }
    }

    pub fn position(&self) -> Option<usize> {
        match self {
            QueryError::Syntax { position, .. } => Some(*position),
            _ => None,
        }
    }
}

/// Parses and evaluates `text` with the default tool universe.
pub fn run_query(text: &str, ontology: &crate::Ontology) -> Result<QueryResult, QueryError> {
    evaluate(&parse_query(text)?, ontology)
}
