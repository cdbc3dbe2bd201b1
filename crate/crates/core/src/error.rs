use std::path::PathBuf;

use thiserror::Error;

use crate::ballot::CandidateId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid candidate id {0:?}: expected letters, digits or underscore")]
    InvalidCandidateId(String),

    #[error("ballot:{column}: {message}")]
    Grammar { column: usize, message: String },

    #[error("duplicate candidate {0}")]
    DuplicateCandidate(CandidateId),

    #[error("ballot ranks no candidate")]
    EmptyRanking,

    #[error("unknown candidate {0}")]
    UnknownCandidate(CandidateId),

    #[error("{n} candidates exceeds the relation cap of {cap}")]
    TooManyCandidates { n: usize, cap: usize },

    #[error("enumeration over {n} candidates exceeds the cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("enumeration needs at least one candidate")]
    EmptyCandidateSet,

    #[error("pair record of size {size} exceeds the subset sweep cap of {cap}")]
    RecordTooLarge { size: usize, cap: usize },

    #[error("pair record is empty")]
    EmptyRecord,

    #[error("pair ({0}, {1}) is not a weak preference of the ballot")]
    PairNotInRecord(CandidateId, CandidateId),

    #[error("{path}:{line}: {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("election needs at least 3 candidates, found {0}")]
    TooFewCandidates(usize),

    #[error("duplicate voter id {0}")]
    DuplicateVoter(String),

    #[error("ballot of voter {0} is not over the election's candidate set")]
    CandidateSetMismatch(String),

    #[error("truncation length {length} outside 1..={max}")]
    InvalidLength { length: usize, max: usize },

    #[error("unknown claim {0}")]
    UnknownClaim(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
