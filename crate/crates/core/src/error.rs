use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix data has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (||M - M^dag||_F = {0:e})")]
    NotHermitian(f64),

    #[error("degenerate spectrum: eigenvalues {0} and {1} closer than tolerance")]
    DegenerateSpectrum(f64, f64),

    #[error("density matrix is not positive (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("density matrix trace is {0}, not 1")]
    TraceNotOne(f64),

    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("random variable is not in D_Y: level set {0} has zero probability")]
    NotInDY(String),

    #[error("invalid probability space: {0}")]
    InvalidProbSpace(String),

    #[error("label {0} is not in the range of the random variable")]
    LabelNotInRange(String),

    #[error("eigenvectors a[{0}] and b[{1}] have vanishing overlap")]
    VanishingOverlap(usize, usize),

    #[error("frame has {got} elements, expected {expected}")]
    WrongFrameSize { expected: usize, got: usize },

    #[error("Gram matrix is singular (condition number {0:e})")]
    SingularGram(f64),

    #[error("frames are defined over different observable pairs")]
    PairMismatch,

    #[error("mixing weight {0} outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("perturbation destroyed the frame (C1 = {c1:e}, C2 = {c2:e})")]
    FrameDegenerated { c1: f64, c2: f64 },

    #[error("frame is not Born compatible")]
    NotBornCompatible,

    #[error("frame has no dual")]
    MissingDual,

    #[error("quasiprobability normalization off by {0:e}")]
    NotNormalized(f64),

    #[error("state is not in D_B: weight {weight:e} at eigenvalue index {index}")]
    NotInDB { index: usize, weight: f64 },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
