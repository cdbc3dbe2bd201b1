//! Ballot profiles, instant-runoff tabulation and truncation experiments.

mod irv;
mod profile;
mod report;
mod truncation;

pub use irv::{tabulate_irv, Round, TabulationResult};
pub use profile::{
    load_profile, read_profile, ElectionProfile, VoterBallot, MIN_ELECTION_CANDIDATES,
};
pub use report::{profile_report, BallotSummary, ProfileReport};
pub use truncation::{find_divergent_profile, truncation_experiment, TruncationReport};
