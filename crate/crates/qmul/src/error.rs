//! Error taxonomy shared by the whole crate.
//!
//! Errors fall into two broad classes that front-ends (e.g. the CLI) map to
//! different exit codes:
//!
//! * **usage errors** — the caller asked for something malformed or
//!   unsupported (`InvalidArgument`, `InvalidGate`, `UnsupportedMode`,
//!   `UnknownPreset`, `Parse`, `MissingField`, `RangeViolation`, `Io`);
//! * **model failures** — the request was well-formed but the physical cost
//!   model cannot satisfy it (`AboveThreshold`, `ModelInfeasible`,
//!   `InvalidCombination`).

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented domain.
    #[error("invalid-argument: {0}")]
    InvalidArgument(String),

    /// A gate was constructed with repeated operands or an empty register.
    #[error("invalid-gate: {0}")]
    InvalidGate(String),

    /// The algorithm does not support the requested operand mode.
    #[error("unsupported-mode: {0}")]
    UnsupportedMode(String),

    /// A platform preset name was not recognised.
    #[error("unknown-preset: '{name}' (valid presets: {valid})")]
    UnknownPreset { name: String, valid: String },

    /// The physical error rate is not below the code threshold.
    #[error("above-threshold: physical error rate {p:e} is not below the code threshold {p_star:e}")]
    AboveThreshold { p: f64, p_star: f64 },

    /// No parameter choice inside the model's search space meets the target.
    #[error("model-infeasible: {0}")]
    ModelInfeasible(String),

    /// The requested scheme/platform combination is physically meaningless.
    #[error("invalid-combination: {0}")]
    InvalidCombination(String),

    /// A configuration or parameter file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A required key was absent from a parameter file.
    #[error("missing-field: {0}")]
    MissingField(String),

    /// A field value violates its documented range.
    #[error("range violation: field '{field}' = {value} must satisfy {requirement}")]
    RangeViolation {
        field: String,
        value: f64,
        requirement: String,
    },

    /// Underlying I/O failure while reading a file.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by how the library was invoked (bad arguments,
    /// malformed files) rather than by the cost model itself.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::InvalidGate(_)
                | Error::UnsupportedMode(_)
                | Error::UnknownPreset { .. }
                | Error::Parse { .. }
                | Error::MissingField(_)
                | Error::RangeViolation { .. }
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
