use nctrap_core::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 1;
    pub const UNDEFINED_REDUCTION: i32 = 2;
    pub const INSUFFICIENT_TRUNCATION: i32 = 3;
    pub const DIRAC_REGRESSION: i32 = 4;
    pub const VERIFICATION: i32 = 5;
}

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
    Core(Error),
    /// Dirac replay disagreed with its targets.
    Regression(String),
    /// Oracle residuals above tolerance.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Io(_) => exit::CONFIG,
            Failure::Regression(_) => exit::DIRAC_REGRESSION,
            Failure::Verification(_) => exit::VERIFICATION,
            Failure::Core(e) => match e {
                Error::UndefinedReduction(_) => exit::UNDEFINED_REDUCTION,
                Error::InsufficientTruncation { .. } => exit::INSUFFICIENT_TRUNCATION,
                Error::Consistency(_) | Error::Eigen(_) => exit::VERIFICATION,
                _ => exit::CONFIG,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "invalid config: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Regression(m) => write!(f, "dirac regression: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

/// Short machine tag for sweep rows.
pub fn error_tag(e: &Failure) -> &'static str {
    match e {
        Failure::Config(_) | Failure::Io(_) => "invalid_config",
        Failure::Regression(_) => "regression",
        Failure::Verification(_) => "verification",
        Failure::Core(e) => match e {
            Error::Domain(_) => "domain",
            Error::UndefinedReduction(_) => "undefined_reduction",
            Error::InsufficientTruncation { .. } => "insufficient_truncation",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::ModelValidity(_) => "model_validity",
            _ => "internal",
        },
    }
}
