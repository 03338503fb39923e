use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("a register of {qubits} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { qubits: usize, max: usize },

    #[error("invalid dimension {0}: must be a power of two")]
    InvalidDimension(usize),

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("matrix is not unitary: max deviation of U^dagger U from I is {0:e}")]
    NotUnitary(f64),

    #[error("angle {name} = {value} outside its range {range}")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),

    #[error("distribution is not normalized: 4*pi*integral(f sin^2) = {0}")]
    NotNormalizedDensity(f64),

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureFailed { a: f64, b: f64, estimate: f64 },

    #[error("the error-free limit has no density; {0} is undefined")]
    NoDensity(&'static str),

    #[error("syndrome {syndrome} is unreachable (probability {probability:e})")]
    UnreachableSyndrome { syndrome: usize, probability: f64 },

    #[error("syndrome index {0} out of range 0..16")]
    SyndromeOutOfRange(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
