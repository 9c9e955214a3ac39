use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {p}^{n} exceeds the enumeration guard 2^26")]
    FieldTooLarge { p: u64, n: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension degree {k} does not divide the working degree {l}")]
    NotASubfield { k: u32, l: u32 },
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("nonzero remainder in exact division")]
    NonzeroRemainder,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("point is not on the line")]
    NotIncident,
    #[error("line is a component of the curve")]
    LineInCurve,
    #[error("point is not defined over the subfield of degree {k}")]
    NotDefinedOver { k: u32 },
    #[error("{what} has size {size}, above the guard {limit}")]
    GuardExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
