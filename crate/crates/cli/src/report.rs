use std::collections::BTreeSet;

use ballot_lattice::claims::{ClaimClass, ClaimRegistry, Subject};
use ballot_lattice::relation::CoverPair;
use ballot_lattice::representation::{
    canonical_utility, rationalizability_class, ConcavityReport, RationalizabilityClass,
    SpatialWitness, SweepSummary, Theorem3Verdict, UtilityAssignment,
};
use ballot_lattice::{CandidateId, ClaimReport, Error, RankedBallot, Verdict};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct Classification {
    pub is_reflexive: bool,
    pub is_transitive: bool,
    pub is_antisymmetric: bool,
    pub is_partial_order: bool,
    pub is_weak_order: bool,
    pub is_top_truncated: bool,
    pub is_complete: bool,
    pub is_total: bool,
}

#[derive(Debug, Serialize)]
pub struct ClaimEntry {
    pub class: ClaimClass,
    #[serde(flatten)]
    pub report: ClaimReport,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub ballot: String,
    pub candidates: Vec<CandidateId>,
    pub ranked: Vec<CandidateId>,
    pub unranked: Vec<CandidateId>,
    #[serde(flatten)]
    pub classification: Classification,
    pub covers: Vec<CoverPair>,
    pub join_irreducibles: BTreeSet<CandidateId>,
    pub meet_irreducibles: BTreeSet<CandidateId>,
    pub meet_irreducible_count: usize,
    pub atoms: BTreeSet<CandidateId>,
    pub coatoms: BTreeSet<CandidateId>,
    pub least: Option<CandidateId>,
    pub greatest: Option<CandidateId>,
    pub canonical_utility: UtilityAssignment,
    pub canonical_class: RationalizabilityClass,
    pub claims: Vec<ClaimEntry>,
}

impl AnalyzeReport {
    pub fn build(ballot: &RankedBallot, registry: &ClaimRegistry) -> Result<Self, Error> {
        let subject = Subject::new(ballot.clone())?;
        let r = &subject.relation;
        let utility = canonical_utility(ballot);
        let claims = registry
            .iter()
            .filter(|c| c.max_n().is_none_or(|cap| ballot.len() <= cap))
            .map(|c| {
                Ok(ClaimEntry {
                    class: c.class(),
                    report: c.check(&subject)?,
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let meet_irreducibles = r.meet_irreducibles();
        Ok(AnalyzeReport {
            ballot: subject.label.clone(),
            candidates: r.candidates().to_vec(),
            ranked: ballot.ranked().to_vec(),
            unranked: ballot.unranked().iter().cloned().collect(),
            classification: Classification {
                is_reflexive: r.is_reflexive(),
                is_transitive: r.is_transitive(),
                is_antisymmetric: r.is_antisymmetric(),
                is_partial_order: r.is_partial_order(),
                is_weak_order: r.is_weak_order(),
                is_top_truncated: r.is_top_truncated(),
                is_complete: r.is_complete(),
                is_total: r.is_total(),
            },
            covers: r.covers(),
            join_irreducibles: r.join_irreducibles(),
            meet_irreducible_count: meet_irreducibles.len(),
            meet_irreducibles,
            atoms: r.atoms(),
            coatoms: r.coatoms(),
            least: r.least(),
            greatest: r.greatest(),
            canonical_class: rationalizability_class(&utility, &subject.record),
            canonical_utility: utility,
            claims,
        })
    }

    pub fn must_hold_failed(&self) -> bool {
        self.claims
            .iter()
            .any(|c| c.class == ClaimClass::Must && c.report.verdict == Verdict::Fails)
    }
}

#[derive(Debug, Serialize)]
pub struct Theorem3Report {
    pub ballot: String,
    pub record_size: usize,
    /// Verdict on the full record; absent when the record is empty.
    pub full: Option<Theorem3Verdict>,
    pub sweep: Option<SweepSummary>,
}

#[derive(Debug, Serialize)]
pub struct WitnessReport {
    pub ballot: String,
    pub witness: SpatialWitness,
    pub utility: UtilityAssignment,
    pub class: RationalizabilityClass,
    pub concavity: ConcavityReport,
}
