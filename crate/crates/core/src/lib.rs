//! Lattice structure of top-truncated ranked ballots: order relations, their
//! joins and irreducibles, utility representations, exhaustive enumeration,
//! and instant-runoff tabulation over ballot profiles.

pub mod ballot;
pub mod claims;
pub mod election;
pub mod enumeration;
pub mod error;
pub mod lattice;
pub mod relation;
pub mod representation;

pub use ballot::{format_ballot, parse_ballot, parse_candidate_list, CandidateId, RankedBallot};
pub use claims::{exhaustive_verify, Claim, ClaimClass, ClaimRegistry, VerifySummary};
pub use enumeration::{ballot_count, default_candidates, enumerate_ballots, EnumerationStream};
pub use error::{Error, Result};
pub use lattice::{ClaimReport, Verdict, Witness};
pub use relation::{relation_of, OrderRelation};
