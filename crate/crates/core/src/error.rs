use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("states are not consecutive: n = {first} followed by n = {second}")]
    NonConsecutive { first: i64, second: i64 },

    #[error("index n = {index} outside the available range [{first}, {last}]")]
    IndexOutOfRange { index: i64, first: i64, last: i64 },

    #[error("matrix {0} is not symmetric")]
    NotSymmetric(&'static str),

    #[error("matrix {0} is not antisymmetric")]
    NotAntisymmetric(&'static str),

    #[error("coupling tensor is not totally symmetric at ({0}, {1}, {2})")]
    TensorNotSymmetric(usize, usize, usize),

    #[error("strict mode: S[{0}][{0}] is odd, so H and pi may be half-integers")]
    OddDiagonal(usize),

    #[error("no lapse constant configured for n = {0}")]
    LapseUndefined(i64),

    #[error("trajectory has {len} states, at least {required} are required")]
    TrajectoryTooShort { len: usize, required: usize },

    #[error("nonlinear update at n = {0} is not integral; coupling entries must be multiples of 1/4")]
    NonIntegralUpdate(i64),

    #[error("this operation requires a nonlinear coupling tensor")]
    MissingCoupling,

    #[error("polynomial degree {degree} exceeds the scheme capacity {capacity}")]
    DegreeExceedsScheme { degree: u32, capacity: u32 },

    #[error("variation multiplier {0} appears more than once")]
    RepeatedMultiplier(u64),

    #[error("variation multipliers must be positive integers")]
    NonPositiveMultiplier,

    #[error("max degree {max_degree} needs exactly {needed} multipliers (odd moments j = 0..{last_moment}), got {given}")]
    SchemeSize {
        max_degree: u32,
        needed: usize,
        given: usize,
        last_moment: usize,
    },

    #[error("max degree must be at least 2, got {0}")]
    SchemeDegree(u32),

    #[error("variation increment must be nonzero")]
    ZeroVariation,

    #[error("t = {t} lies outside the supported window [{lo}, {hi}]")]
    OutOfWindow { t: f64, lo: f64, hi: f64 },

    #[error("invalid quadrature: {0}")]
    Quadrature(String),

    #[error("invalid scale: {0}")]
    InvalidScale(String),

    #[error("signal: {0}")]
    Signal(String),

    #[error("band limit violated: bandwidth {bandwidth} must stay below {limit}")]
    BandLimit { bandwidth: f64, limit: f64 },

    #[error("series of {len} samples resolves {achievable}, coarser than the requested {required}")]
    InsufficientResolution {
        len: usize,
        achievable: f64,
        required: f64,
    },

    #[error("{0}")]
    Unsupported(String),

    #[error("eigendecomposition residual {0:e} exceeds tolerance")]
    Eigen(f64),

    #[error("I/O: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}
