use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{tabulate_irv, ElectionProfile, TabulationResult};
use crate::ballot::CandidateId;
use crate::enumeration::enumerate_ballots;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationReport {
    pub by_length: BTreeMap<usize, TabulationResult>,
    /// Length pairs `[l1, l2]` with `l1 < l2` whose winners differ.
    pub winner_divergence: Vec<[usize; 2]>,
}

impl TruncationReport {
    pub fn winner(&self, length: usize) -> Option<&CandidateId> {
        self.by_length.get(&length).map(|r| &r.winner)
    }
}

/// Re-tabulates the profile with every ballot cut to its first `L` ranked
/// entries, for each `L` in `lengths`.
pub fn truncation_experiment(
    profile: &ElectionProfile,
    lengths: &BTreeSet<usize>,
) -> Result<TruncationReport> {
    let max = profile.candidates().len();
    if let Some(&length) = lengths.iter().find(|&&l| l == 0 || l > max) {
        return Err(Error::InvalidLength { length, max });
    }
    let by_length: BTreeMap<usize, TabulationResult> = lengths
        .iter()
        .map(|&l| (l, tabulate_irv(&profile.truncated(l))))
        .collect();
    let mut winner_divergence = Vec::new();
    for (i, (l1, r1)) in by_length.iter().enumerate() {
        for (l2, r2) in by_length.iter().skip(i + 1) {
            if r1.winner != r2.winner {
                winner_divergence.push([*l1, *l2]);
            }
        }
    }
    Ok(TruncationReport {
        by_length,
        winner_divergence,
    })
}

/// Searches profiles over `candidates` in order of voter count, then as
/// nondecreasing sequences of ballot types in enumeration order, and returns
/// the first whose winners at lengths `short` and `long` differ. Voters are
/// named `v1, v2, …`.
pub fn find_divergent_profile(
    candidates: &BTreeSet<CandidateId>,
    max_voters: usize,
    short: usize,
    long: usize,
) -> Result<Option<ElectionProfile>> {
    let types: Vec<Vec<CandidateId>> = enumerate_ballots(candidates)?
        .map(|b| b.ranked().to_vec())
        .collect();
    let lengths = BTreeSet::from([short, long]);
    for voters in 1..=max_voters {
        let mut picks = vec![0usize; voters];
        loop {
            let profile = ElectionProfile::from_rankings(
                candidates.clone(),
                picks.iter().map(|&t| types[t].clone()),
            )?;
            if !truncation_experiment(&profile, &lengths)?
                .winner_divergence
                .is_empty()
            {
                return Ok(Some(profile));
            }
            if !next_multiset(&mut picks, types.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances a nondecreasing index sequence over `0..kinds`.
fn next_multiset(picks: &mut [usize], kinds: usize) -> bool {
    let Some(pos) = picks.iter().rposition(|&p| p + 1 < kinds) else {
        return false;
    };
    let value = picks[pos] + 1;
    for p in &mut picks[pos..] {
        *p = value;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::parse_candidate_list;

    fn profile(rankings: &[&[&str]]) -> ElectionProfile {
        ElectionProfile::from_rankings(
            parse_candidate_list("a,b,c").unwrap(),
            rankings
                .iter()
                .map(|r| r.iter().map(|s| CandidateId::new(*s).unwrap()).collect()),
        )
        .unwrap()
    }

    #[test]
    fn multiset_count() {
        let mut picks = vec![0; 3];
        let mut count = 1;
        while next_multiset(&mut picks, 4) {
            count += 1;
        }
        assert_eq!(count, 20);
    }

    #[test]
    fn full_length_is_untruncated() {
        let p = profile(&[&["a", "b"], &["b", "c"], &["c"], &["c", "a"], &["b"]]);
        let report = truncation_experiment(&p, &BTreeSet::from([3])).unwrap();
        assert_eq!(report.by_length[&3], tabulate_irv(&p));
    }

    #[test]
    fn transfers_decide_at_full_length() {
        let mut rankings: Vec<&[&str]> = vec![&["a"]; 4];
        rankings.extend([&["b", "c"][..]; 3]);
        rankings.extend([&["c", "b"][..]; 2]);
        let report =
            truncation_experiment(&profile(&rankings), &BTreeSet::from([1, 2, 3])).unwrap();
        assert_eq!(report.winner(1).unwrap().as_str(), "a");
        assert_eq!(report.winner(3).unwrap().as_str(), "b");
        assert_eq!(report.winner_divergence, vec![[1, 2], [1, 3]]);
    }

    #[test]
    fn bullet_votes_are_unchanged() {
        let p = profile(&[&["a"], &["b"], &["b"], &["c"]]);
        let report = truncation_experiment(&p, &BTreeSet::from([1, 2, 3])).unwrap();
        assert!(report.winner_divergence.is_empty());
    }

    #[test]
    fn lengths_are_bounded() {
        let p = profile(&[&["a"]]);
        assert!(matches!(
            truncation_experiment(&p, &BTreeSet::from([0])),
            Err(Error::InvalidLength { length: 0, max: 3 })
        ));
        assert!(matches!(
            truncation_experiment(&p, &BTreeSet::from([4])),
            Err(Error::InvalidLength { length: 4, max: 3 })
        ));
    }

    #[test]
    fn search_finds_a_divergence() {
        let set = parse_candidate_list("a,b,c").unwrap();
        let found = find_divergent_profile(&set, 9, 1, 3).unwrap().unwrap();
        let report = truncation_experiment(&found, &BTreeSet::from([1, 3])).unwrap();
        assert_eq!(report.winner_divergence, vec![[1, 3]]);
    }
}
