use thiserror::Error;

/// Rejected grammar source, term text, or grammar construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{name}` takes {expected} argument(s), got {found}")]
    Arity {
        line: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: undeclared symbol `{name}`")]
    Undeclared { line: usize, name: String },
    #[error("`{name}` is declared both as a function symbol and as a type symbol")]
    Collision { name: String },
    #[error("line {line}: function symbol `{name}` declared twice with different arities")]
    Redeclared { line: usize, name: String },
    #[error("signature declares no constant")]
    NoConstant,
    #[error("line {line}: type symbol `{name}` cannot take arguments")]
    TypeWithArguments { line: usize, name: String },
    #[error("`{0}` is a type symbol, expected a ground term")]
    NotGround(String),
}

impl ParseError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line,
            message: message.into(),
        }
    }
}

/// A designated root type symbol denotes the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type symbol `{0}` denotes the empty set")]
pub struct EmptyTypeError(pub String);

/// The recursion budget of an inclusion check ran out. Signals a suspected
/// termination problem; never silently turned into a boolean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("fuel exhausted after {budget} steps")]
pub struct FuelExhausted {
    pub budget: u64,
}
