use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] active_sites::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("manifest: {0}")]
    Manifest(String),

    #[error("cannot project {dims}-D positions onto a 2-D site map")]
    UnsupportedProjection { dims: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 3 parse, 4 validation, 5 domain, 6 I/O.
    /// (clap reports usage errors itself with 2.)
    pub fn exit_code(&self) -> i32 {
        use active_sites::Error as E;
        match self {
            CliError::Core(E::Parse { .. }) | CliError::Manifest(_) => 3,
            CliError::Core(
                E::Validation(_) | E::Dimension { .. } | E::Permutation(_) | E::Contract(_),
            ) => 4,
            CliError::Core(E::Domain(_) | E::Index { .. } | E::Infeasible(_))
            | CliError::UnsupportedProjection { .. } => 5,
            CliError::Io { .. } => 6,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
