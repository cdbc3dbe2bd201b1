use std::collections::BTreeSet;

use serde::Serialize;

use super::ElectionProfile;
use crate::ballot::CandidateId;
use crate::error::Result;
use crate::lattice::{check_remark1, is_join_semilattice, is_modular, ClaimReport};
use crate::relation::relation_of;
use crate::representation::{
    canonical_utility, pair_record, rationalizability_class, RationalizabilityClass,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallotSummary {
    pub voter_id: String,
    pub ballot: String,
    pub ranked: usize,
    pub ranked_fraction: f64,
    pub is_top_truncated: bool,
    pub meet_irreducibles: usize,
    pub coatoms: BTreeSet<CandidateId>,
    pub canonical_class: RationalizabilityClass,
    pub claims: Vec<ClaimReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub candidates: Vec<CandidateId>,
    pub voters: usize,
    /// Mean over ballots of ranked candidates divided by all candidates.
    pub mean_ranked_fraction: f64,
    pub ballots: Vec<BallotSummary>,
}

pub fn profile_report(profile: &ElectionProfile) -> Result<ProfileReport> {
    let n = profile.candidates().len();
    let mut ballots = Vec::with_capacity(profile.len());
    for entry in profile.ballots() {
        let b = &entry.ballot;
        let r = relation_of(b)?;
        let mut claims = vec![is_join_semilattice(&r), is_modular(&r)];
        claims.extend(check_remark1(&r));
        let label = b.to_string();
        ballots.push(BallotSummary {
            voter_id: entry.voter_id.clone(),
            ranked: b.ranked().len(),
            ranked_fraction: b.ranked().len() as f64 / n as f64,
            is_top_truncated: r.is_top_truncated(),
            meet_irreducibles: r.meet_irreducibles().len(),
            coatoms: r.coatoms(),
            canonical_class: rationalizability_class(&canonical_utility(b), &pair_record(b)),
            claims: claims.into_iter().map(|c| c.with_subject(&label)).collect(),
            ballot: label,
        });
    }
    let mean_ranked_fraction = if ballots.is_empty() {
        0.0
    } else {
        ballots.iter().map(|b| b.ranked_fraction).sum::<f64>() / ballots.len() as f64
    };
    Ok(ProfileReport {
        candidates: profile.candidates().iter().cloned().collect(),
        voters: profile.len(),
        mean_ranked_fraction,
        ballots,
    })
}
