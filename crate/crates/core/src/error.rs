use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} is not p-integral for p = {1}")]
    NotPIntegral(String, u64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("constant polynomial is not allowed here")]
    ConstantPolynomial,
    #[error("polynomial has non-integer coefficient {0}")]
    NonIntegerCoefficient(String),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("descriptor mismatch between field elements")]
    DescriptorMismatch,
    #[error("element has {got} coordinates, field degree is {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("zero element has no inverse")]
    ZeroInverse,
    #[error("family is empty")]
    EmptyFamily,
    #[error("family is linearly dependent over Q")]
    LinearlyDependent,
    #[error("family members have unequal norms; use the graded check")]
    UnequalNorms,
    #[error("grade {0} has members of inconsistent norm")]
    InconsistentGrade(usize),
    #[error("grades {0} and {1} share a valuation residue mod 1")]
    OverlappingGrades(usize, usize),
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("target has non-integral orthogonal coordinate at ({0}, {1})")]
    NonIntegralTarget(usize, usize),
    #[error("invalid lattice index set: {0}")]
    InvalidIndexSet(String),
    #[error("invalid mixing matrix: {0}")]
    InvalidMixingMatrix(String),
    #[error("hash rejection budget of {0} candidates exhausted")]
    HashBudgetExhausted(usize),
    #[error("invalid key: {0}")]
    InvalidKey(String),
    #[error("parse error: {0}")]
    Parse(String),
}
