use alloc::string::String;

use thiserror::Error;

use crate::signature::SignatureKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fewer than 2 terminals")]
    TooFewTerminals,
    #[error("network has no links")]
    NoLinks,
    #[error("network has {0} links; at most {max} are supported", max = crate::network::MAX_LINKS)]
    TooManyLinks(usize),
    #[error("duplicate link id {0}")]
    DuplicateLink(u32),
    #[error("link ids must be exactly 1..={n}; id {missing} is missing")]
    LinkIdGap { n: usize, missing: u32 },
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("unknown endpoint node `{0}`")]
    UnknownNode(String),
    #[error("unknown link id {0}")]
    UnknownLink(u32),
    #[error("terminal `{0}` listed twice")]
    DuplicateTerminal(String),

    #[error("ordered partitions need at least one element")]
    EmptyGroundSet,
    #[error("n = {n} exceeds the exact-enumeration limit {limit}; use Monte Carlo sampling instead")]
    EnumerationLimit { n: usize, limit: usize },
    #[error("n = {n} exceeds the sampler limit {limit}")]
    SamplerLimit { n: usize, limit: usize },
    #[error("not an ordered partition of 1..={n}: {reason}")]
    InvalidPartition { n: usize, reason: &'static str },
    #[error("terminals are disconnected before any link fails")]
    InitiallyDown,
    #[error("the network never fails under this model")]
    NeverFails,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("arrival index must be at least 1")]
    ZeroArrivalIndex,
    #[error("failed count {j} out of range 0..={n}")]
    FailedCountOutOfRange { j: usize, n: usize },
    #[error("fatal damage uses the fatal-signature representation, not the shock-count mixture")]
    FatalDamageUnsupported,
    #[error("{expected} signature required, got {found}")]
    WrongSignatureKind { expected: SignatureKind, found: SignatureKind },
    #[error("beta sequence increases at index {index}")]
    NonMonotoneBeta { index: usize },
    #[error("not a probability vector: {0}")]
    NotAPmf(&'static str),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("representations disagree at t = {t}: {first} vs {second}")]
    RepresentationMismatch { t: f64, first: f64, second: f64 },
    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(&'static str),
}

impl Error {
    /// Numeric failures (limits, representation mismatches) as opposed to
    /// invalid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::EnumerationLimit { .. }
                | Error::SamplerLimit { .. }
                | Error::RepresentationMismatch { .. }
                | Error::NeverFails
        )
    }
}
