use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompareOp {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

impl CompareOp {
    pub fn test(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CompareOp::Eq => lhs == rhs,
            CompareOp::Ge => lhs >= rhs,
            CompareOp::Le => lhs <= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ge => ">=",
            CompareOp::Le => "<=",
        }
    }
}

/// A class-expression query. Names are kept as written; resolution against
/// an ontology happens at evaluation time and ignores case.
///
/// `And` and `Or` always hold at least two operands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassExpression {
    Named(String),
    And(Vec<ClassExpression>),
    Or(Vec<ClassExpression>),
    Not(Box<ClassExpression>),
    HasValue { property: String, value: String },
    Some { property: String, filler: Box<ClassExpression> },
    Compare { property: String, op: CompareOp, value: i64 },
}

impl ClassExpression {
    pub fn named(name: impl Into<String>) -> Self {
        ClassExpression::Named(name.into())
    }

    pub fn has_value(property: impl Into<String>, value: impl Into<String>) -> Self {
        ClassExpression::HasValue { property: property.into(), value: value.into() }
    }

    pub fn some(property: impl Into<String>, filler: ClassExpression) -> Self {
        ClassExpression::Some { property: property.into(), filler: Box::new(filler) }
    }

    pub fn compare(property: impl Into<String>, op: CompareOp, value: i64) -> Self {
        ClassExpression::Compare { property: property.into(), op, value }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: ClassExpression) -> Self {
        ClassExpression::Not(Box::new(inner))
    }

    /// Same expression with every name lowercased.
    pub fn canonical(&self) -> ClassExpression {
        use ClassExpression::*;
        match self {
            Named(n) => Named(n.to_ascii_lowercase()),
            And(ops) => And(ops.iter().map(Self::canonical).collect()),
            Or(ops) => Or(ops.iter().map(Self::canonical).collect()),
            Not(e) => Not(Box::new(e.canonical())),
            HasValue { property, value } => HasValue {
                property: property.to_ascii_lowercase(),
                value: value.to_ascii_lowercase(),
            },
            Some { property, filler } => Some {
                property: property.to_ascii_lowercase(),
                filler: Box::new(filler.canonical()),
            },
            Compare { property, op, value } => Compare {
                property: property.to_ascii_lowercase(),
                op: *op,
                value: *value,
            },
        }
    }

    // Binding strength: or < and < not < atom.
    fn precedence(&self) -> u8 {
        match self {
            ClassExpression::Or(_) => 0,
            ClassExpression::And(_) => 1,
            ClassExpression::Not(_) => 2,
            _ => 3,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &ClassExpression, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, ops: &[ClassExpression], word: &str, min: u8) -> fmt::Result {
    for (i, op) in ops.iter().enumerate() {
        if i > 0 {
            write!(f, " {word} ")?;
        }
        write_operand(f, op, min)?;
    }
    Ok(())
}

/// Canonical text with the fewest parentheses that still parse back to an
/// identical tree. A nested operand of the same n-ary operator keeps its
/// parentheses, otherwise it would flatten on reparse.
impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpression::Named(n) => f.write_str(n),
            ClassExpression::Or(ops) => write_joined(f, ops, "or", 1),
            ClassExpression::And(ops) => write_joined(f, ops, "and", 2),
            ClassExpression::Not(e) => {
                f.write_str("not ")?;
                write_operand(f, e, 2)
            }
            ClassExpression::HasValue { property, value } => write!(f, "{property} value {value}"),
            ClassExpression::Some { property, filler } => {
                write!(f, "{property} some ")?;
                write_operand(f, filler, 3)
            }
            ClassExpression::Compare { property, op, value } => {
                write!(f, "{property} {} {value}", op.symbol())
            }
        }
    }
}
