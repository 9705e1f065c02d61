use thiserror::Error;

use crate::model::Value;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("variable `{variable}` lists value {value} twice in its domain")]
    DuplicateDomainValue { variable: String, value: Value },
    #[error("constraint #{constraint} mentions unknown variable `{name}`")]
    UnknownVariableInScope { constraint: usize, name: String },
    #[error("constraint #{constraint}: tuple of arity {found} for a scope of arity {expected}")]
    ArityMismatch { constraint: usize, expected: usize, found: usize },
    #[error("value {value} is outside the domain of `{variable}`")]
    ValueOutOfDomain { variable: String, value: Value },
    #[error("constraint #{constraint}, column {column}: {message}")]
    Expr { constraint: usize, column: usize, message: String },
    #[error("assignment does not bind `{0}`")]
    IncompleteAssignment(String),
    #[error("assignment binds unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("strategy shape mismatch: {0}")]
    ShapeMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("malformed base: {0}")]
    MalformedBase(String),
    #[error("variable at position {0} is not existential")]
    NotExistential(usize),
    #[error("prefix of length {found} is shorter than the {needed} moves required")]
    ShortPrefix { needed: usize, found: usize },
    #[error("operation needs a base with a binder, got a constant")]
    ConstantBase,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("compilation budget of {0} recursive calls exceeded")]
    BudgetExceeded(u64),
    #[error("children of `{0}` disagree on their tail binder")]
    MixedBinder(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("the game is over: every variable is already played")]
    GameOver,
    #[error("value {value} is outside the domain of `{variable}`")]
    ValueOutOfDomain { variable: String, value: Value },
    #[error("prefix has {found} moves but the binder only has {len} variables")]
    PrefixTooLong { len: usize, found: usize },
    #[error("the alternative equals the played value {0}")]
    SameValue(Value),
    #[error("variable `{0}` is not existential")]
    NotExistential(String),
    #[error("the prefix is empty")]
    EmptyPrefix,
    #[error("strategy walk dead-ends at `{0}`: the base is not optimal")]
    NotOptimal(String),
    #[error("certificate binder does not match the problem binder")]
    BinderMismatch,
    #[error(transparent)]
    Base(#[from] BaseError),
}
