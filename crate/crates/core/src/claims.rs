//! Named structural claims, registered behind a common trait and run over
//! every enumerated ballot by [`exhaustive_verify`].
//!
//! Each claim is either `must` (a failure is a defect and makes the run fail)
//! or `informational` (failures are reported with witnesses but tolerated).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::ballot::{CandidateId, RankedBallot};
use crate::enumeration::{ballot_count, default_candidates, enumerate_ballots, enumeration_cap};
use crate::error::{Error, Result};
use crate::lattice::{
    check_remark1, is_join_semilattice, is_modular, ClaimReport, Verdict, Witness,
};
use crate::relation::{relation_of, OrderRelation};
use crate::representation::{
    canonical_utility, concave_witness, extreme_points, is_representation, is_submodular,
    is_weakly_decreasing, pair_record, rationalizability_class, relation_is_weakly_decreasing,
    submodularity_violation, theorem3_check, theorem3_sweep, verify_concavity, Disjunct,
    PairRecord, Rational, RationalizabilityClass, Theorem3Verdict, Theorem3Witness,
};

/// Largest `n` at which the sub-record sweeps run.
pub const SWEEP_MAX_N: usize = 4;

pub const CONCAVITY_TRIALS: usize = 1000;
pub const CONCAVITY_SEED: u64 = 0x5eed_ba11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimClass {
    Must,
    Informational,
}

impl fmt::Display for ClaimClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            ClaimClass::Must => "must",
            ClaimClass::Informational => "informational",
        })
    }
}

/// A ballot with its derived structures, shared across claims.
#[derive(Debug, Clone)]
pub struct Subject {
    pub ballot: RankedBallot,
    pub relation: OrderRelation,
    pub record: PairRecord,
    pub label: String,
}

impl Subject {
    pub fn new(ballot: RankedBallot) -> Result<Self> {
        let relation = relation_of(&ballot)?;
        let record = pair_record(&ballot);
        let label = ballot.to_string();
        Ok(Subject {
            ballot,
            relation,
            record,
            label,
        })
    }
}

pub trait Claim: Send + Sync {
    fn id(&self) -> &'static str;

    fn class(&self) -> ClaimClass;

    fn description(&self) -> &'static str;

    /// Largest candidate count the claim is evaluated at.
    fn max_n(&self) -> Option<usize> {
        None
    }

    fn check(&self, subject: &Subject) -> Result<ClaimReport>;
}

/// Claims keyed by id, kept in registration order.
pub struct ClaimRegistry {
    claims: Vec<Box<dyn Claim>>,
}

impl Default for ClaimRegistry {
    fn default() -> Self {
        ClaimRegistry::builtin()
    }
}

impl ClaimRegistry {
    pub fn empty() -> Self {
        ClaimRegistry { claims: Vec::new() }
    }

    /// Registers `claim`, replacing any claim with the same id.
    pub fn register(&mut self, claim: Box<dyn Claim>) {
        match self.claims.iter().position(|c| c.id() == claim.id()) {
            Some(i) => self.claims[i] = claim,
            None => self.claims.push(claim),
        }
    }

    pub fn builtin() -> Self {
        let mut registry = ClaimRegistry::empty();
        registry.register(Box::new(JoinSemilattice));
        registry.register(Box::new(Modular));
        for part in OrderPart::ALL {
            registry.register(Box::new(part));
        }
        registry.register(Box::new(DecreasingModular));
        registry.register(Box::new(SubmodularRepresentation));
        registry.register(Box::new(FullRecordCondition));
        registry.register(Box::new(SubRecordSweep));
        registry.register(Box::new(AllUnrankedBoundary));
        registry.register(Box::new(ConcaveWitness {
            trials: CONCAVITY_TRIALS,
            seed: CONCAVITY_SEED,
        }));
        registry
    }

    pub fn get(&self, id: &str) -> Option<&dyn Claim> {
        self.claims
            .iter()
            .find(|c| c.id() == id)
            .map(|c| c.as_ref())
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.claims.iter().map(|c| c.id())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Claim> {
        self.claims.iter().map(|c| c.as_ref())
    }

    /// Resolves a list of ids, preserving registry order. An empty list
    /// selects every claim.
    pub fn select(&self, ids: &[String]) -> Result<Vec<&dyn Claim>> {
        if let Some(unknown) = ids.iter().find(|id| self.get(id).is_none()) {
            return Err(Error::UnknownClaim(unknown.clone()));
        }
        Ok(self
            .iter()
            .filter(|c| ids.is_empty() || ids.iter().any(|id| id == c.id()))
            .collect())
    }
}

struct JoinSemilattice;

impl Claim for JoinSemilattice {
    fn id(&self) -> &'static str {
        "T1"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "every pair of candidates has a join"
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        Ok(is_join_semilattice(&s.relation).with_subject(&s.label))
    }
}

struct Modular;

impl Claim for Modular {
    fn id(&self) -> &'static str {
        "P1"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "x ~ (x v y) implies x v z ~ (x v y) v z"
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        Ok(is_modular(&s.relation).with_subject(&s.label))
    }
}

#[derive(Clone, Copy)]
struct OrderPart(usize);

impl OrderPart {
    const ALL: [OrderPart; 4] = [OrderPart(0), OrderPart(1), OrderPart(2), OrderPart(3)];
}

impl Claim for OrderPart {
    fn id(&self) -> &'static str {
        ["R1.1", "R1.2", "R1.3", "R1.4"][self.0]
    }
    fn class(&self) -> ClaimClass {
        if self.0 < 2 {
            ClaimClass::Informational
        } else {
            ClaimClass::Must
        }
    }
    fn description(&self) -> &'static str {
        [
            "every join-irreducible element is an atom",
            "a top-truncated set with a join-irreducible element is totally ordered",
            "exactly n-1 meet-irreducible elements",
            "between 1 and n-1 co-atoms",
        ][self.0]
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        let report = check_remark1(&s.relation).swap_remove(self.0);
        Ok(report.with_subject(&s.label))
    }
}

struct DecreasingModular;

impl Claim for DecreasingModular {
    fn id(&self) -> &'static str {
        "P2"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "relation is weakly decreasing in rank and strongly quasisubmodular"
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        if !relation_is_weakly_decreasing(&s.relation, &s.ballot) {
            return Ok(ClaimReport::fails(
                self.id(),
                &s.label,
                note("relation is not weakly decreasing in rank"),
            ));
        }
        let modular = is_modular(&s.relation);
        Ok(ClaimReport {
            claim: self.id().to_string(),
            ..modular.with_subject(&s.label)
        })
    }
}

struct SubmodularRepresentation;

impl Claim for SubmodularRepresentation {
    fn id(&self) -> &'static str {
        "C1"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "canonical utility is a weakly decreasing submodular representation, strict exactly on total orders"
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        let u = canonical_utility(&s.ballot);
        let failure = if !is_representation(&u, &s.relation) {
            Some(note("canonical utility is not a representation"))
        } else if let Some(w) = submodularity_violation(&u, &s.relation) {
            Some(w)
        } else if !is_submodular(&u, &s.relation) {
            Some(note("canonical utility is not total"))
        } else if !is_weakly_decreasing(&u, &s.ballot) {
            Some(note("canonical utility is not weakly decreasing"))
        } else {
            let expected = if s.ballot.is_total() {
                RationalizabilityClass::Strict
            } else {
                RationalizabilityClass::AlmostStrict
            };
            let class = rationalizability_class(&u, &s.record);
            (class != expected).then(|| note(format!("class {class}, expected {expected}")))
        };
        Ok(ClaimReport::from_check(self.id(), &s.label, failure))
    }
}

struct FullRecordCondition;

impl Claim for FullRecordCondition {
    fn id(&self) -> &'static str {
        "T3"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "the full pair record satisfies one of the two disjuncts"
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        if s.record.is_empty() {
            return Ok(ClaimReport::vacuous(self.id(), &s.label));
        }
        let verdict = theorem3_check(&s.ballot, &s.record)?;
        let failure = (verdict.disjunct == Disjunct::Fails).then(|| Witness::SubRecord {
            pairs: s.record.to_vec(),
        });
        Ok(ClaimReport::from_check(self.id(), &s.label, failure))
    }
}

/// Re-checks a verdict's witness against the definitions.
pub fn revalidate(ballot: &RankedBallot, sub: &PairRecord, verdict: &Theorem3Verdict) -> bool {
    let Ok(extreme) = extreme_points(ballot, &sub.candidates()) else {
        return false;
    };
    match &verdict.witness {
        Theorem3Witness::ExtremePoint(x) => extreme.contains(x) && !sub.y_set().contains(x),
        Theorem3Witness::SubRecord(pairs) => {
            let inner: PairRecord = pairs.iter().cloned().collect();
            let rest: PairRecord = sub
                .pairs()
                .filter(|(x, y)| !inner.contains(x, y))
                .map(|(x, y)| (x.clone(), y.clone()))
                .collect();
            let y_inner = inner.y_set();
            !inner.is_empty()
                && inner.is_subset_of(sub)
                && inner.n_set() == y_inner
                && y_inner.is_subset(&extreme)
                && y_inner.is_disjoint(&rest.y_set())
        }
        Theorem3Witness::Failure { .. } => true,
    }
}

struct SubRecordSweep;

impl Claim for SubRecordSweep {
    fn id(&self) -> &'static str {
        "T3.sweep"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "every nonempty sub-record mentioning a ranked candidate satisfies a disjunct with a valid witness"
    }
    fn max_n(&self) -> Option<usize> {
        Some(SWEEP_MAX_N)
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        if s.record.is_empty() {
            return Ok(ClaimReport::vacuous(self.id(), &s.label));
        }
        let mut invalid: Option<Vec<(CandidateId, CandidateId)>> = None;
        let summary = theorem3_sweep(&s.ballot, &s.record, |sub, verdict| {
            if invalid.is_none() && !revalidate(&s.ballot, sub, verdict) {
                invalid = Some(sub.to_vec());
            }
        })?;
        let failure = summary
            .fails_other
            .first()
            .cloned()
            .or(invalid)
            .map(|pairs| Witness::SubRecord { pairs });
        Ok(ClaimReport::from_check(self.id(), &s.label, failure))
    }
}

struct AllUnrankedBoundary;

impl Claim for AllUnrankedBoundary {
    fn id(&self) -> &'static str {
        "T3.boundary"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Informational
    }
    fn description(&self) -> &'static str {
        "sub-records among unranked candidates only have no extreme points and satisfy neither disjunct"
    }
    fn max_n(&self) -> Option<usize> {
        Some(SWEEP_MAX_N)
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        if s.ballot.unranked().len() < 2 {
            return Ok(ClaimReport::vacuous(self.id(), &s.label));
        }
        let summary = theorem3_sweep(&s.ballot, &s.record, |_, _| {})?;
        let failure = summary
            .first_all_unranked
            .map(|pairs| Witness::SubRecord { pairs });
        Ok(ClaimReport::from_check(self.id(), &s.label, failure))
    }
}

struct ConcaveWitness {
    trials: usize,
    seed: u64,
}

impl Claim for ConcaveWitness {
    fn id(&self) -> &'static str {
        "T4"
    }
    fn class(&self) -> ClaimClass {
        ClaimClass::Must
    }
    fn description(&self) -> &'static str {
        "spatial witness is strictly concave and almost strictly rationalizes the ballot"
    }
    fn check(&self, s: &Subject) -> Result<ClaimReport> {
        let witness = concave_witness(&s.ballot);
        let u = witness.utility();
        let k = s.ballot.ranked().len() as i64;
        let mismatch = s.ballot.preference_order().find(|c| {
            let expected = if s.ballot.is_ranked(c) {
                let distance = s.ballot.position(c).expect("member") as i64 - 1;
                -distance * distance
            } else {
                -k * k
            };
            u.get(c) != Some(Rational::from_integer(expected))
        });
        let class = rationalizability_class(&u, &s.record);
        let failure = if let Some(c) = mismatch {
            Some(Witness::Candidate {
                candidate: c.clone(),
            })
        } else if !class.satisfies(RationalizabilityClass::AlmostStrict) {
            Some(note(format!("witness utility is only {class}")))
        } else {
            let report = verify_concavity(&witness, self.trials, self.seed);
            report.violation.map(|v| {
                note(format!(
                    "{:?} violated at lambda {}: {} <= {}",
                    v.kind, v.lambda, v.lhs, v.rhs
                ))
            })
        };
        Ok(ClaimReport::from_check(self.id(), &s.label, failure))
    }
}

fn note(detail: impl Into<String>) -> Witness {
    Witness::Note {
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub subject: String,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimSummary {
    pub claim: String,
    pub class: ClaimClass,
    pub description: String,
    /// False when `n` exceeds the claim's evaluation cap.
    pub evaluated: bool,
    pub holds: u64,
    pub fails: u64,
    pub vacuous: u64,
    pub witnesses: Vec<WitnessEntry>,
}

impl ClaimSummary {
    fn record(&mut self, report: ClaimReport) {
        match report.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::Vacuous => self.vacuous += 1,
            Verdict::Fails => {
                self.fails += 1;
                self.witnesses.push(WitnessEntry {
                    subject: report.subject,
                    witness: report.witness.expect("failing reports carry a witness"),
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub n: usize,
    pub ballot_count: u64,
    pub caps: BTreeMap<String, usize>,
    pub claims: Vec<ClaimSummary>,
}

impl VerifySummary {
    pub fn claim(&self, id: &str) -> Option<&ClaimSummary> {
        self.claims.iter().find(|c| c.claim == id)
    }

    /// True when any `must` claim failed on some ballot.
    pub fn must_hold_failed(&self) -> bool {
        self.claims
            .iter()
            .any(|c| c.class == ClaimClass::Must && c.fails > 0)
    }
}

/// Runs the selected claims over every ballot on `n` default candidates.
pub fn exhaustive_verify(n: usize, claims: &[&dyn Claim]) -> Result<VerifySummary> {
    let candidates = default_candidates(n);
    let stream = enumerate_ballots(&candidates)?;
    let mut summaries: Vec<ClaimSummary> = claims
        .iter()
        .map(|c| ClaimSummary {
            claim: c.id().to_string(),
            class: c.class(),
            description: c.description().to_string(),
            evaluated: c.max_n().is_none_or(|cap| n <= cap),
            holds: 0,
            fails: 0,
            vacuous: 0,
            witnesses: Vec::new(),
        })
        .collect();
    let mut count = 0u64;
    for ballot in stream {
        count += 1;
        let subject = Subject::new(ballot)?;
        for (claim, summary) in claims.iter().zip(summaries.iter_mut()) {
            if summary.evaluated {
                summary.record(claim.check(&subject)?);
            }
        }
    }
    debug_assert_eq!(count, ballot_count(n));
    let caps = BTreeMap::from([
        ("enumeration_n".to_string(), enumeration_cap()),
        ("sweep_n".to_string(), SWEEP_MAX_N),
        (
            "sweep_record_size".to_string(),
            crate::representation::SUBSET_SWEEP_CAP,
        ),
    ]);
    Ok(VerifySummary {
        n,
        ballot_count: count,
        caps,
        claims: summaries,
    })
}
