use kdq_core::Error;
use thiserror::Error as ThisError;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error("observables share an eigenvector: {0}")]
    VanishingOverlap(Error),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(Error),
    #[error("{0}; pass --regularize EPS to condition on this state")]
    NotInDB(Error),
    #[error("invalid observable: {0}")]
    InvalidObservable(Error),
    #[error("frame error: {0}")]
    Frame(Error),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::VanishingOverlap(_) => 3,
            CliError::InvalidDensity(_) => 4,
            CliError::NotInDB(_) => 5,
            CliError::InvalidObservable(_) => 6,
            CliError::Frame(_) => 7,
            CliError::Output(_) => 8,
        }
    }
}

/// Which input a core error came from; decides between the density and
/// observable exit codes for shared validation errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Density,
    Observable,
    Other,
}

pub fn classify(e: Error, source: Source) -> CliError {
    match e {
        Error::VanishingOverlap(..) => CliError::VanishingOverlap(e),
        Error::NotInDB { .. } => CliError::NotInDB(e),
        Error::SingularGram(_)
        | Error::FrameDegenerated { .. }
        | Error::MissingDual
        | Error::NotBornCompatible
        | Error::WrongFrameSize { .. }
        | Error::PairMismatch
        | Error::NotNormalized(_)
        | Error::SingularSystem => CliError::Frame(e),
        Error::NotPositive(_) | Error::TraceNotOne(_) => CliError::InvalidDensity(e),
        Error::DegenerateSpectrum(..) => CliError::InvalidObservable(e),
        Error::NotHermitian(_) | Error::NonFinite => match source {
            Source::Density => CliError::InvalidDensity(e),
            Source::Observable => CliError::InvalidObservable(e),
            Source::Other => CliError::Usage(e.to_string()),
        },
        other => CliError::Usage(other.to_string()),
    }
}
