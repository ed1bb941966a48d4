//! IO, reports and the command line for [`zeta4_core`].

pub mod cli;
pub mod formats;
pub mod report;

pub use cli::{run, Command, Format, RunConfig};

/// Crate version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] zeta4_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Process exit status: 2 for invalid input, 3 for budget or precision
    /// limits, 4 for geometry failures, 1 for IO.
    pub fn exit_code(&self) -> i32 {
        use zeta4_core::Error as E;
        match self {
            Error::Core(e) => match e {
                E::Budget { .. } | E::Precision { .. } => 3,
                E::Geometry { .. } | E::NoBracket { .. } | E::MissedZeros { .. } => 4,
                E::Domain(_) | E::Conditioning { .. } | E::Convention | E::Range { .. } | E::Coverage { .. } => 2,
            },
            Error::Config(_) => 2,
            Error::Csv(_) | Error::Json(_) => 2,
            Error::Io(_) => 1,
        }
    }
}

impl From<csv::IntoInnerError<csv::Writer<Vec<u8>>>> for Error {
    fn from(e: csv::IntoInnerError<csv::Writer<Vec<u8>>>) -> Self {
        Error::Io(e.into_error())
    }
}
