use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors must have at least one coordinate")]
    ZeroDimension,
    #[error("generators do not span a blunt cone: zero is a positive combination of them")]
    NotBlunt,
    #[error("option set is empty")]
    EmptyOptionSet,
    #[error("set of orders is empty")]
    EmptyOrderSet,
    #[error("open ray direction must be nonzero")]
    ZeroDirection,
    #[error("rule has no premises; monotonification only extends rules with premises")]
    PremiseFree,
    #[error("unknown rule scheme `{0}`")]
    UnknownScheme(alloc::string::String),
    #[error("probe {index} is not admissible for this scheme")]
    InvalidProbe { index: usize },
    #[error("{count} combinations exceed the configured limit of {limit}")]
    CombinatorialLimit { count: u128, limit: u128 },
    #[error("assessment is inconsistent: every selection puts zero in the cone")]
    InconsistentAssessment,
    #[error("choice function is not binary on the given probes")]
    NotBinary,
    #[error("elimination exceeded the limit of {limit} (needed {needed})")]
    VariableLimit { needed: usize, limit: usize },
}
