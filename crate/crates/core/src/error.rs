use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot factor {0}: composite cofactor resisted splitting within budget")]
    Unfactorable(i128),

    #[error("discriminant {disc} is outside the class group bound {bound}")]
    OutOfRange { disc: i64, bound: i64 },

    #[error("forms have different discriminants ({0} and {1})")]
    DiscMismatch(i64, i64),

    #[error("degenerate curve: a*b*(4a+27b) = 0 for (a, b) = ({a}, {b})")]
    DegenerateCurve { a: i64, b: i64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("{p} is not a good-reduction prime for this curve")]
    BadReductionPrime { p: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
