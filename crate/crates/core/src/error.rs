use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse configuration: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ill-conditioned {0}")]
    IllConditioned(String),

    #[error("degenerate scenario: {0}")]
    Degenerate(String),

    #[error("LDPC construction failed: {0}")]
    Construction(String),

    #[error("malformed alist: {0}")]
    Alist(String),

    #[error("trial {trial} at {snr_db} dB failed: {source}")]
    Trial {
        trial: u64,
        snr_db: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for configuration problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::ConfigParse(_)
            | Error::InvalidArgument(_)
            | Error::Alist(_)
            | Error::Io(_)
            | Error::Csv(_) => 1,
            Error::Trial { source, .. } => source.exit_code(),
            Error::IllConditioned(_) | Error::Degenerate(_) | Error::Construction(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
