use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {q}^{m} exceeds the size cap {cap}")]
    SizeCapExceeded { q: u64, m: u32, cap: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element {value} out of range for a field of order {order}")]
    ElementOutOfRange { value: u64, order: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("extended gcd of two zero polynomials")]
    BothZero,
    #[error("polynomial is not invertible modulo g (non-constant gcd)")]
    NotInvertible,
    #[error("alpha is a root of g")]
    AlphaIsRoot,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("no affine map of order {u} exists over GF({q}^{m})")]
    NoSuchOrder { u: u64, q: u32, m: u32 },
    #[error("support is empty after excluding fixed points and roots of g")]
    EmptySupport,
    #[error("column index {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error("word length {got} does not match code length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("word entry {value} at position {position} is not in GF({q})")]
    EntryOutOfRange { position: usize, value: u32, q: u32 },
    #[error("enumeration of {q}^{n} words exceeds cap {cap}")]
    CapExceeded { q: u32, n: usize, cap: u64 },
    #[error("codeword count {count} is not a power of {q}")]
    NotAPowerOfQ { count: u64, q: u32 },
    #[error("codes are not comparable: {0}")]
    ShapeMismatch(String),
    #[error("no root-free polynomial found after {0} attempts")]
    RejectionCapExceeded(usize),
    #[error("invalid parameter set: {0}")]
    InvalidParams(String),
    #[error("trial {index}: {source}")]
    Trial {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
