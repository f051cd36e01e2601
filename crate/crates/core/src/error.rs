use std::fmt;

use thiserror::Error;

/// Byte range into a parsed input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    pub fn point(at: usize) -> Self {
        SourceSpan { start: at, end: at }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid symbol name `{0}`")]
    InvalidName(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("syntax error at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("unknown function `{name}` at {span}")]
    UnknownFunction { name: String, span: SourceSpan },
    #[error("expression is not ground: free symbols {0}")]
    NotGround(String),
    #[error("unsupported node: {0}")]
    UnsupportedNode(String),
    #[error("expression is not a polynomial in `{0}`")]
    NotPolynomialIn(String),
    #[error("cannot solve residual equation: {0}")]
    UnsolvableResidual(String),
    #[error("not differentiable: {0}")]
    NonDifferentiable(String),
    #[error("unsupported integrand: {0}")]
    UnsupportedIntegrand(String),
    #[error("unsupported series expansion: {0}")]
    UnsupportedSeries(String),
    #[error("limit could not be determined: {0}")]
    LimitUndetermined(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("columns are structurally dependent")]
    StructurallyDependentColumns,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
