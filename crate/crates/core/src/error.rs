use thiserror::Error;

/// Errors raised by state construction, the transfer protocol and the
/// phase/number analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate mode id `{0}`")]
    DuplicateMode(String),

    #[error("unknown mode id `{0}`")]
    UnknownMode(String),

    #[error("occupation {occupation} exceeds capacity {capacity} of mode `{mode}`")]
    Capacity {
        mode: String,
        occupation: u64,
        capacity: u32,
    },

    #[error("basis label has {got} entries but the layout has {expected} modes")]
    LabelLength { got: usize, expected: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("state has no amplitudes")]
    EmptyState,

    #[error("layout must contain modes at both sites")]
    SingleSite,

    #[error("mode `{mode}` has the wrong kind for this operation (expected {expected})")]
    ModeKind { mode: String, expected: &'static str },

    #[error("operator is not Hermitian (max entry deviation {0:e})")]
    NotHermitian(f64),

    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("operator trace {0} differs from 1")]
    BadTrace(f64),

    #[error("operators are expressed in different bases")]
    BasisMismatch,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("basis map is not injective: two terms collide on {0:?}")]
    NotInjective(Vec<u32>),

    #[error("grid of {got} points is too small, need at least {need}")]
    GridTooSmall { got: usize, need: usize },

    #[error("visibility magnitude {0} exceeds 1")]
    VisibilityOutOfRange(f64),

    #[error("register sector n = {0} is not a pure state")]
    MixedSector(u32),

    #[error("state is not physical: tail mass {tail:e} above occupation {threshold} in mode `{mode}`")]
    NonPhysical {
        mode: String,
        threshold: u32,
        tail: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a mode running out of occupation capacity.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
