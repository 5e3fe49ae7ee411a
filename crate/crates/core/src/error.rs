use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("operation supports d = 2 or d = 3, got d = {0}")]
    UnsupportedDimension(usize),
    #[error("denominator divisible by {0}")]
    DenominatorDivisibleByP(u64),
    #[error("matrix does not have determinant 1")]
    NotDeterminantOne,
    #[error("modulus or dimension mismatch")]
    ModulusMismatch,
    #[error("generator set is empty")]
    EmptyGenerators,
    #[error("enumeration exceeded cap of {cap} elements (reached {reached})")]
    CapExceeded { cap: usize, reached: usize },
    #[error("characteristic polynomial is not squarefree")]
    NotRegularSemisimple,
    #[error("table does not enumerate the full special linear group")]
    IncompleteTable,
    #[error("vector length {got} does not match group order {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("group order {0} exceeds the dense eigensolver cap {1}")]
    TooLargeForDense(usize, usize),
    #[error("power iteration did not converge within {0} iterations")]
    NotConverged(usize),
    #[error("identical primes {0} in product group")]
    DegenerateProduct(u64),
    #[error("id set is not a subgroup")]
    NotASubgroup,
    #[error("subsets belong to different tables")]
    TableMismatch,
    #[error("set is not closed under inversion")]
    NotSymmetric,
    #[error("set does not contain the identity")]
    MissingIdentity,
    #[error("set is empty")]
    EmptySet,
    #[error("not enough usable points for a decay fit ({usable} of {required})")]
    InsufficientSignal { usable: usize, required: usize },
    #[error("prime search reached ceiling {ceiling} after {found} of {wanted} primes")]
    SearchBoundExceeded { ceiling: u64, found: usize, wanted: usize },
    #[error("prime battery is empty")]
    EmptyBattery,
    #[error("target predicate has no data for prime {0}")]
    PredicateMissingPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
