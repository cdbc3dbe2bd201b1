//! Voting records `P ⊆ C × C` and the concave-rationalizability condition.
//!
//! For a record `P`, `Y(P)` collects the first components (candidates weakly
//! preferred to someone), `N(P)` the second components and `C(P)` both. The
//! extreme points of a candidate set follow the combinatorial rule for
//! ballots: the highest-ranked member together with either every unranked
//! member or, when there is none, the lowest-ranked member. A set made only of
//! unranked candidates has no extreme points.
//!
//! The condition checked by [`theorem3_check`] for a nonempty `P'` is: some
//! extreme point of `C(P')` lies outside `Y(P')`, or some nonempty
//! `P'' ⊆ P'` has `N(P'') = Y(P'') ⊆ E(C(P'))` and
//! `Y(P'') ∩ Y(P' \ P'') = ∅`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ballot::{CandidateId, RankedBallot};
use crate::error::{Error, Result};

/// Largest record whose nonempty sub-records [`theorem3_sweep`] will visit.
pub const SUBSET_SWEEP_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PairRecord {
    pairs: BTreeSet<(CandidateId, CandidateId)>,
}

impl PairRecord {
    pub fn new(pairs: impl IntoIterator<Item = (CandidateId, CandidateId)>) -> Self {
        PairRecord {
            pairs: pairs.into_iter().filter(|(x, y)| x != y).collect(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&CandidateId, &CandidateId)> {
        self.pairs.iter().map(|(x, y)| (x, y))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: &CandidateId, y: &CandidateId) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn to_vec(&self) -> Vec<(CandidateId, CandidateId)> {
        self.pairs.iter().cloned().collect()
    }

    /// `Y(P)`.
    pub fn y_set(&self) -> BTreeSet<CandidateId> {
        self.pairs.iter().map(|(x, _)| x.clone()).collect()
    }

    /// `N(P)`.
    pub fn n_set(&self) -> BTreeSet<CandidateId> {
        self.pairs.iter().map(|(_, y)| y.clone()).collect()
    }

    /// `C(P)`: every candidate mentioned by some pair.
    pub fn candidates(&self) -> BTreeSet<CandidateId> {
        self.pairs
            .iter()
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect()
    }

    pub fn is_subset_of(&self, other: &PairRecord) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

impl FromIterator<(CandidateId, CandidateId)> for PairRecord {
    fn from_iter<I: IntoIterator<Item = (CandidateId, CandidateId)>>(iter: I) -> Self {
        PairRecord::new(iter)
    }
}

/// Every `(x, y)` with `x ≿ y` and `x ≠ y`; tied candidates contribute both
/// directions.
pub fn pair_record(ballot: &RankedBallot) -> PairRecord {
    let order: Vec<&CandidateId> = ballot.preference_order().collect();
    let mut pairs = BTreeSet::new();
    for x in &order {
        for y in &order {
            if x != y && ballot.position(x) <= ballot.position(y) {
                pairs.insert(((*x).clone(), (*y).clone()));
            }
        }
    }
    PairRecord { pairs }
}

pub fn extreme_points(
    ballot: &RankedBallot,
    subset: &BTreeSet<CandidateId>,
) -> Result<BTreeSet<CandidateId>> {
    if let Some(unknown) = subset.iter().find(|c| !ballot.contains(c)) {
        return Err(Error::UnknownCandidate(unknown.clone()));
    }
    let ranked: Vec<&CandidateId> = ballot
        .ranked()
        .iter()
        .filter(|c| subset.contains(*c))
        .collect();
    let Some(highest) = ranked.first() else {
        return Ok(BTreeSet::new());
    };
    let mut out: BTreeSet<CandidateId> = subset
        .iter()
        .filter(|c| ballot.unranked().contains(*c))
        .cloned()
        .collect();
    if out.is_empty() {
        out.insert((*ranked.last().expect("nonempty")).clone());
    }
    out.insert((*highest).clone());
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjunct {
    Disjunct1,
    Disjunct2,
    Fails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem3Witness {
    /// An extreme point of `C(P')` outside `Y(P')`.
    ExtremePoint(CandidateId),
    /// The sub-record `P''` satisfying the second disjunct.
    SubRecord(Vec<(CandidateId, CandidateId)>),
    /// Neither disjunct holds; `all_unranked` records whether `C(P')` consists
    /// only of unranked candidates (so `E(C(P')) = ∅`).
    Failure { all_unranked: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem3Verdict {
    pub disjunct: Disjunct,
    pub witness: Theorem3Witness,
}

/// Decides the disjunction for a nonempty sub-record of the ballot's record.
///
/// A valid `P''` must contain every pair of `P'` whose source lies in
/// `Y(P'')`, so it is determined by its source set `S = Y(P'') ⊆ Y(P') ∩ E`.
/// The search runs over those source sets and returns the `P''` that comes
/// first in increasing-size, lexicographic subset order over `P'`.
pub fn theorem3_check(ballot: &RankedBallot, sub: &PairRecord) -> Result<Theorem3Verdict> {
    if sub.is_empty() {
        return Err(Error::EmptyRecord);
    }
    for (x, y) in sub.pairs() {
        if !ballot.contains(x) {
            return Err(Error::UnknownCandidate(x.clone()));
        }
        if !ballot.contains(y) {
            return Err(Error::UnknownCandidate(y.clone()));
        }
        if ballot.position(x) > ballot.position(y) {
            return Err(Error::PairNotInRecord(x.clone(), y.clone()));
        }
    }

    let mentioned = sub.candidates();
    let extreme = extreme_points(ballot, &mentioned)?;
    let sources = sub.y_set();

    if let Some(x) = ballot
        .preference_order()
        .find(|c| extreme.contains(*c) && !sources.contains(*c))
    {
        return Ok(Theorem3Verdict {
            disjunct: Disjunct::Disjunct1,
            witness: Theorem3Witness::ExtremePoint(x.clone()),
        });
    }

    if let Some(found) = disjunct2_search(sub, &extreme) {
        return Ok(Theorem3Verdict {
            disjunct: Disjunct::Disjunct2,
            witness: Theorem3Witness::SubRecord(found),
        });
    }

    Ok(Theorem3Verdict {
        disjunct: Disjunct::Fails,
        witness: Theorem3Witness::Failure {
            all_unranked: mentioned.iter().all(|c| ballot.unranked().contains(c)),
        },
    })
}

fn disjunct2_search(
    sub: &PairRecord,
    extreme: &BTreeSet<CandidateId>,
) -> Option<Vec<(CandidateId, CandidateId)>> {
    let pairs = sub.to_vec();
    let pool: Vec<CandidateId> = sub
        .y_set()
        .into_iter()
        .filter(|c| extreme.contains(c))
        .collect();

    let mut best: Option<Vec<usize>> = None;
    for mask in 1u64..(1u64 << pool.len()) {
        let chosen: BTreeSet<&CandidateId> = pool
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, c)| c)
            .collect();
        let indices: Vec<usize> = pairs
            .iter()
            .enumerate()
            .filter(|(_, (x, _))| chosen.contains(x))
            .map(|(i, _)| i)
            .collect();
        let targets: BTreeSet<&CandidateId> = indices.iter().map(|&i| &pairs[i].1).collect();
        if targets != chosen {
            continue;
        }
        let better = match &best {
            None => true,
            Some(current) => (indices.len(), &indices) < (current.len(), current),
        };
        if better {
            best = Some(indices);
        }
    }
    best.map(|indices| indices.into_iter().map(|i| pairs[i].clone()).collect())
}

/// Tally of [`theorem3_check`] over every nonempty sub-record of a record.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub sub_records: u64,
    pub disjunct1: u64,
    pub disjunct2: u64,
    pub fails_all_unranked: u64,
    /// Sub-records that fail although they mention a ranked candidate.
    pub fails_other: Vec<Vec<(CandidateId, CandidateId)>>,
    /// First failing all-unranked sub-record, if any.
    pub first_all_unranked: Option<Vec<(CandidateId, CandidateId)>>,
}

/// Runs [`theorem3_check`] on every nonempty `P' ⊆ record`, calling
/// `inspect` with each sub-record and its verdict.
pub fn theorem3_sweep(
    ballot: &RankedBallot,
    record: &PairRecord,
    mut inspect: impl FnMut(&PairRecord, &Theorem3Verdict),
) -> Result<SweepSummary> {
    if record.len() > SUBSET_SWEEP_CAP {
        return Err(Error::RecordTooLarge {
            size: record.len(),
            cap: SUBSET_SWEEP_CAP,
        });
    }
    let pairs = record.to_vec();
    let mut summary = SweepSummary::default();
    for mask in 1u64..(1u64 << pairs.len()) {
        let sub: PairRecord = pairs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        let verdict = theorem3_check(ballot, &sub)?;
        summary.sub_records += 1;
        match &verdict.witness {
            Theorem3Witness::ExtremePoint(_) => summary.disjunct1 += 1,
            Theorem3Witness::SubRecord(_) => summary.disjunct2 += 1,
            Theorem3Witness::Failure { all_unranked: true } => {
                summary.fails_all_unranked += 1;
                summary
                    .first_all_unranked
                    .get_or_insert_with(|| sub.to_vec());
            }
            Theorem3Witness::Failure {
                all_unranked: false,
            } => summary.fails_other.push(sub.to_vec()),
        }
        inspect(&sub, &verdict);
    }
    Ok(summary)
}
