use thiserror::Error;

/// Failures of the exact-arithmetic kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("division is not exact; remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("affine substitution needs a nonzero scale")]
    InvalidAffine,
    #[error("unknown indeterminate `{0}`")]
    UnknownVariable(String),
    #[error("value depends on x where an x-free coefficient was expected")]
    DependsOnX,
    #[error("denominator depends on x; not a polynomial in x")]
    XInDenominator,
}

/// Positioned error from the expression parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("exponent must be a nonnegative integer literal")]
    BadExponent,
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
}

/// Errors raised while loading or transforming family data.
#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("in field `{field}`: {source}")]
    Expr {
        field: String,
        #[source]
        source: ExprError,
    },
    #[error("sequence `{seq}` does not cover index {index}")]
    UncoveredIndex { seq: String, index: i64 },
    #[error("sequence `{seq}` has overlapping definitions at index {index}")]
    OverlappingBranches { seq: String, index: i64 },
    #[error("index {index} is outside the domain of sequence `{seq}`")]
    OutOfDomain { seq: String, index: i64 },
    #[error("perturbation factor lambda_{0} is zero")]
    ZeroPerturbation(usize),
    #[error("perturbation lists must have length r")]
    PerturbationLength,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Errors from parsing + evaluating one expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from the derivation and reduction stages.
#[derive(Debug, Error)]
pub enum DeriveError {
    #[error("family is not semiclassical (B is not identically zero)")]
    SemiclassicalRequired,
    #[error("family is not classical: {0}")]
    ClassicalRequired(String),
    #[error("branch does not cover index {0}")]
    MissingBranch(i64),
    #[error("fourth-order equation is degenerate (all coefficients vanish); use the semiclassical reductions")]
    DegenerateOde,
    #[error("family data violates the partial-sum identity: {0}")]
    IdentityViolated(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from setting up or running the numeric oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("no value for parameter `{0}` (pass --assign {0}=p/q or add it to the family's assignments)")]
    MissingAssignment(String),
    #[error("{seq}_{index} vanishes under the chosen assignment; pick other parameter values")]
    Singular { seq: String, index: i64 },
    #[error("value still depends on `{0}` after substitution")]
    NotNumeric(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Derive(#[from] DeriveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
