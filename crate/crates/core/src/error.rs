//! Error type shared by every layer of the engine.
//!
//! Indices stored in errors are 0-based; `Display` and [`Error::to_json`]
//! render them 1-based to match the user-facing convention.

use serde_json::{json, Value};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("quotient is not a Laurent element (not exactly divisible)")]
    NotDivisible,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("operands live in different quantum-torus frames")]
    FrameMismatch,

    #[error("operation requires a nonzero element")]
    ZeroElement,

    #[error("matrix is not skew-symmetric at ({}, {})", .row + 1, .col + 1)]
    NotSkewSymmetric { row: usize, col: usize },

    #[error("principal part is not skew-symmetrizable at ({}, {})", .row + 1, .col + 1)]
    NotSymmetrizable { row: usize, col: usize },

    #[error(
        "exchange matrix is incompatible with Lambda at (i={}, j={}): entry of B^T Lambda is {value}",
        .row + 1, .col + 1
    )]
    Incompatible { row: usize, col: usize, value: i64 },

    #[error("compatibility degree mismatch at j={}: expected d={expected}, found {found}", .col + 1)]
    DegreeMismatch { col: usize, expected: i64, found: i64 },

    #[error("index {} is not exchangeable", .index + 1)]
    NotExchangeable { index: usize },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("integer overflow in exchange-matrix arithmetic")]
    Overflow,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("modular evaluation hit a zero divisor while mutating at {}", .direction + 1)]
    DegenerateEvaluation { direction: usize },

    #[error(
        "Laurent phenomenon violated: exchange relation at direction {} is not exactly divisible",
        .direction + 1
    )]
    LaurentViolation {
        direction: usize,
        /// 0-based mutation path from the root that reached the failing seed.
        path: Vec<usize>,
        /// The seed being mutated, as seed JSON.
        seed: Box<Value>,
    },
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NotDivisible => "NotDivisible",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::FrameMismatch => "FrameMismatch",
            Error::ZeroElement => "ZeroElement",
            Error::NotSkewSymmetric { .. } => "NotSkewSymmetric",
            Error::NotSymmetrizable { .. } => "NotSymmetrizable",
            Error::Incompatible { .. } => "Incompatible",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotExchangeable { .. } => "NotExchangeable",
            Error::Shape(_) => "Shape",
            Error::Overflow => "Overflow",
            Error::Precondition(_) => "Precondition",
            Error::DegenerateEvaluation { .. } => "DegenerateEvaluation",
            Error::LaurentViolation { .. } => "NotDivisible",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({
            "code": self.code(),
            "message": self.to_string(),
        });
        let extra = match self {
            Error::NotSkewSymmetric { row, col } | Error::NotSymmetrizable { row, col } => {
                json!({ "i": row + 1, "j": col + 1 })
            }
            Error::Incompatible { row, col, value } => {
                json!({ "i": row + 1, "j": col + 1, "value": value })
            }
            Error::NotExchangeable { index } => json!({ "index": index + 1 }),
            Error::LaurentViolation { direction, path, seed } => json!({
                "direction": direction + 1,
                "path": path.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "seed": seed,
            }),
            _ => Value::Null,
        };
        if let (Value::Object(dst), Value::Object(src)) = (&mut body, extra) {
            dst.extend(src);
        }
        json!({ "error": body })
    }
}
