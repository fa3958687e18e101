use thiserror::Error;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    CheckFailed = 1,
    Config = 2,
    Numerical = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("experiment `{experiment}`, field `{field}`: {message}")]
    Config {
        experiment: String,
        field: String,
        message: String,
    },

    #[error(
        "experiment `{experiment}`, field `{field}`: pole at π/2: α = {alpha} is {distance:.3e} away \
         and layer |n| = {height} grows by {growth:.3e}"
    )]
    Pole {
        experiment: String,
        field: String,
        alpha: f64,
        distance: f64,
        height: i64,
        growth: f64,
    },

    #[error("experiment `{experiment}`, field `{field}`: {source}")]
    Module {
        experiment: String,
        field: String,
        #[source]
        source: discrete_pw::Error,
    },

    #[error("experiment `{experiment}`: requested output `{name}` is not produced by `{command}`")]
    MissingOutput {
        experiment: String,
        command: String,
        name: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        use discrete_pw::Error as E;
        match self {
            CliError::Pole { .. } => Exit::Numerical,
            CliError::Module { source, .. } => match source {
                E::Pole { .. } | E::NoConvergence { .. } | E::SlowDecay => Exit::Numerical,
                _ => Exit::Config,
            },
            CliError::Config { .. } | CliError::MissingOutput { .. } => Exit::Config,
            CliError::Io { .. } | CliError::Csv(_) => Exit::Config,
        }
    }
}

/// Attach experiment and field context to a module error.
pub fn context(experiment: &str, field: &str) -> impl Fn(discrete_pw::Error) -> CliError {
    let (experiment, field) = (experiment.to_owned(), field.to_owned());
    move |source| CliError::Module {
        experiment: experiment.clone(),
        field: field.clone(),
        source,
    }
}
