use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::ElectionProfile;
use crate::ballot::CandidateId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    /// Votes per continuing candidate.
    pub tallies: BTreeMap<CandidateId, u64>,
    pub eliminated: Option<CandidateId>,
    /// Ballots whose ranked candidates are all eliminated.
    pub exhausted: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TabulationResult {
    pub rounds: Vec<Round>,
    pub winner: CandidateId,
}

/// Instant-runoff count.
///
/// Each round credits a ballot to its highest ranked continuing candidate.
/// Unranked candidates never receive a ballot, so a ballot whose ranked
/// candidates are all eliminated is exhausted. A candidate holding more than
/// half of the non-exhausted ballots wins, as does the last continuing
/// candidate. Otherwise the lowest tally is eliminated, ties going to the
/// fewest votes in the previous round and then to the smallest id.
pub fn tabulate_irv(profile: &ElectionProfile) -> TabulationResult {
    let mut continuing: BTreeSet<&CandidateId> = profile.candidates().iter().collect();
    let mut rounds: Vec<Round> = Vec::new();
    loop {
        let mut tallies: BTreeMap<CandidateId, u64> =
            continuing.iter().map(|c| ((*c).clone(), 0)).collect();
        let mut exhausted = 0;
        for entry in profile.ballots() {
            match entry
                .ballot
                .ranked()
                .iter()
                .find(|c| continuing.contains(c))
            {
                Some(c) => *tallies.get_mut(c).expect("continuing") += 1,
                None => exhausted += 1,
            }
        }
        let active = profile.len() as u64 - exhausted;
        let leader = tallies
            .iter()
            .find(|(_, &v)| 2 * v > active)
            .map(|(c, _)| c.clone());
        let winner = leader.or_else(|| {
            (continuing.len() == 1).then(|| (*continuing.first().expect("nonempty")).clone())
        });
        if let Some(winner) = winner {
            rounds.push(Round {
                tallies,
                eliminated: None,
                exhausted,
            });
            return TabulationResult { rounds, winner };
        }
        let previous = rounds.last().map(|r| &r.tallies);
        let loser = tallies
            .iter()
            .min_by_key(|(c, &v)| {
                (
                    v,
                    previous.and_then(|p| p.get(*c)).copied().unwrap_or(0),
                    *c,
                )
            })
            .map(|(c, _)| c.clone())
            .expect("at least two continuing candidates");
        continuing.remove(&loser);
        rounds.push(Round {
            tallies,
            eliminated: Some(loser),
            exhausted,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::parse_candidate_list;

    fn profile(candidates: &str, rankings: &[&[&str]]) -> ElectionProfile {
        ElectionProfile::from_rankings(
            parse_candidate_list(candidates).unwrap(),
            rankings
                .iter()
                .map(|r| r.iter().map(|s| CandidateId::new(*s).unwrap()).collect()),
        )
        .unwrap()
    }

    fn tally(round: &Round) -> Vec<(String, u64)> {
        round
            .tallies
            .iter()
            .map(|(c, v)| (c.to_string(), *v))
            .collect()
    }

    #[test]
    fn unanimous_single_round() {
        let p = profile("w,x,y", &[&["w"], &["w"], &["w"]]);
        let r = tabulate_irv(&p);
        assert_eq!(r.winner.as_str(), "w");
        assert_eq!(r.rounds.len(), 1);
    }

    #[test]
    fn elimination_transfers() {
        let p = profile(
            "a,b,c",
            &[&["a", "b"], &["a", "b"], &["b"], &["b"], &["c", "a"]],
        );
        let r = tabulate_irv(&p);
        assert_eq!(r.rounds.len(), 2);
        assert_eq!(
            tally(&r.rounds[0]),
            vec![("a".into(), 2), ("b".into(), 2), ("c".into(), 1)]
        );
        assert_eq!(r.rounds[0].eliminated.as_ref().unwrap().as_str(), "c");
        assert_eq!(tally(&r.rounds[1]), vec![("a".into(), 3), ("b".into(), 2)]);
        assert_eq!(r.winner.as_str(), "a");
    }

    #[test]
    fn unranked_candidates_get_no_transfer() {
        // Bullet votes exhaust once their candidate is out.
        let p = profile(
            "a,b,c,d",
            &[
                &["a"],
                &["a"],
                &["a"],
                &["b"],
                &["b"],
                &["c"],
                &["c"],
                &["d", "c"],
            ],
        );
        let r = tabulate_irv(&p);
        let last = r.rounds.last().unwrap();
        assert!(last.exhausted > 0);
        for round in &r.rounds {
            assert_eq!(round.tallies.values().sum::<u64>() + round.exhausted, 8);
        }
    }

    #[test]
    fn tie_break_uses_previous_round_then_id() {
        // Round 1: a=3 b=2 c=2 d=1 e=1 f=0; f goes first by tally.
        let p = profile(
            "a,b,c,d,e,f",
            &[
                &["a"],
                &["a"],
                &["a"],
                &["b"],
                &["b"],
                &["c"],
                &["c"],
                &["d"],
                &["e"],
            ],
        );
        let r = tabulate_irv(&p);
        let order: Vec<&str> = r
            .rounds
            .iter()
            .filter_map(|x| x.eliminated.as_ref().map(|c| c.as_str()))
            .collect();
        assert_eq!(order[..3], ["f", "d", "e"]);
    }

    #[test]
    fn previous_round_breaks_ties() {
        // Round one: a=4 b=3 c=2 d=1. Once d moves to c, b and c tie at 3 and
        // c has fewer prior votes, although b sorts first.
        let p = profile(
            "a,b,c,d",
            &[
                &["a"],
                &["a"],
                &["a"],
                &["a"],
                &["b"],
                &["b"],
                &["b"],
                &["c"],
                &["c"],
                &["d", "c"],
            ],
        );
        let r = tabulate_irv(&p);
        assert_eq!(r.rounds[0].eliminated.as_ref().unwrap().as_str(), "d");
        assert_eq!(tally(&r.rounds[1])[1..], [("b".into(), 3), ("c".into(), 3)]);
        assert_eq!(r.rounds[1].eliminated.as_ref().unwrap().as_str(), "c");
        assert_eq!(r.winner.as_str(), "a");
    }

    #[test]
    fn json_shape() {
        let p = profile("w,x,y", &[&["w"]]);
        assert_eq!(
            serde_json::to_string(&tabulate_irv(&p)).unwrap(),
            r#"{"rounds":[{"tallies":{"w":1,"x":0,"y":0},"eliminated":null,"exhausted":0}],"winner":"w"}"#
        );
    }
}
