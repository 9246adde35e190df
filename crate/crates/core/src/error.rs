use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape must have at least one factor and every n_i >= 1, got {0:?}")]
    InvalidShape(Vec<u32>),

    #[error("degree has {got} entries but the shape has {expected} factors")]
    LengthMismatch { expected: usize, got: usize },

    #[error("embedding degrees must all be >= 1, got {0:?}")]
    NonPositiveDegree(Vec<u32>),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("instance needs {required} monomials, above the size cap of {cap}")]
    SizeCap { required: u64, cap: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {0} outside the supported range [1000000, 2147483647]")]
    PrimeOutOfRange(u64),

    #[error("trials must be >= 1")]
    NoTrials,

    #[error("{0} consecutive point samples collided; the field is too small")]
    PointCollision(usize),

    #[error("direct rank {direct} and reduced rank {reduced} disagree (trial {trial})")]
    MethodDisagreement {
        direct: usize,
        reduced: usize,
        trial: u32,
    },

    #[error("a {k}-plane needs at least {} spanning points, got s = {s}", k + 1)]
    TooFewPoints { k: u32, s: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid tensor input: {0}")]
    InvalidTensor(String),
}
