//! Structural claims about ballot relations, checked by finite model checking.
//!
//! Every check returns a [`ClaimReport`]; a `fails` verdict always carries a
//! witness that can be replayed against the primitives in
//! [`crate::relation`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ballot::CandidateId;
use crate::relation::OrderRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The claim's hypothesis is not met, so nothing was checked.
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Vacuous => "vacuous",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Pair {
        x: CandidateId,
        y: CandidateId,
    },
    Triple {
        x: CandidateId,
        y: CandidateId,
        z: CandidateId,
    },
    Candidate {
        candidate: CandidateId,
    },
    Elements {
        elements: Vec<CandidateId>,
    },
    Count {
        count: usize,
        elements: Vec<CandidateId>,
    },
    /// A join-irreducible element together with a pair that is not strictly
    /// ordered.
    IrreducibleWithTie {
        irreducible: CandidateId,
        x: CandidateId,
        y: CandidateId,
    },
    SubRecord {
        pairs: Vec<(CandidateId, CandidateId)>,
    },
    Note {
        detail: String,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair { x, y } => write!(f, "({x}, {y})"),
            Witness::Triple { x, y, z } => write!(f, "({x}, {y}, {z})"),
            Witness::Candidate { candidate } => write!(f, "{candidate}"),
            Witness::Elements { elements } => write!(f, "{{{}}}", join_ids(elements)),
            Witness::Count { count, elements } => {
                write!(f, "count {count} {{{}}}", join_ids(elements))
            }
            Witness::IrreducibleWithTie { irreducible, x, y } => {
                write!(f, "{irreducible} irreducible, ({x}, {y}) unordered")
            }
            Witness::SubRecord { pairs } => {
                let parts: Vec<String> = pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
                write!(f, "{{{}}}", parts.join(" "))
            }
            Witness::Note { detail } => f.write_str(detail),
        }
    }
}

fn join_ids(ids: &[CandidateId]) -> String {
    ids.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub subject: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl ClaimReport {
    pub fn holds(claim: &str, subject: impl Into<String>) -> Self {
        ClaimReport {
            claim: claim.to_string(),
            subject: subject.into(),
            verdict: Verdict::Holds,
            witness: None,
        }
    }

    pub fn vacuous(claim: &str, subject: impl Into<String>) -> Self {
        ClaimReport {
            verdict: Verdict::Vacuous,
            ..ClaimReport::holds(claim, subject)
        }
    }

    pub fn fails(claim: &str, subject: impl Into<String>, witness: Witness) -> Self {
        ClaimReport {
            verdict: Verdict::Fails,
            witness: Some(witness),
            ..ClaimReport::holds(claim, subject)
        }
    }

    pub fn from_check(claim: &str, subject: impl Into<String>, failure: Option<Witness>) -> Self {
        match failure {
            None => ClaimReport::holds(claim, subject),
            Some(w) => ClaimReport::fails(claim, subject, w),
        }
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = subject.into();
        self
    }
}

/// First `(x, y, z)` with `x ≿ y`, `y ≿ z` and not `x ≿ z`.
pub fn transitivity_violation(r: &OrderRelation) -> Option<Witness> {
    let n = r.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if r.weak(i, j) && r.weak(j, k) && !r.weak(i, k) {
                    return Some(Witness::Triple {
                        x: r.id(i).clone(),
                        y: r.id(j).clone(),
                        z: r.id(k).clone(),
                    });
                }
            }
        }
    }
    None
}

/// Join-semilattice check: the relation must be a (weak or partial) order and
/// every pair must have a join.
pub fn is_join_semilattice(r: &OrderRelation) -> ClaimReport {
    const CLAIM: &str = "T1";
    let subject = r.digest();
    if !r.is_weak_order() {
        let witness = transitivity_violation(r).unwrap_or_else(|| Witness::Note {
            detail: "relation is not a weak order".to_string(),
        });
        return ClaimReport::fails(CLAIM, subject, witness);
    }
    let n = r.len();
    for i in 0..n {
        for j in i..n {
            if r.join_index(i, j).is_none() {
                return ClaimReport::fails(
                    CLAIM,
                    subject,
                    Witness::Pair {
                        x: r.id(i).clone(),
                        y: r.id(j).clone(),
                    },
                );
            }
        }
    }
    ClaimReport::holds(CLAIM, subject)
}

/// Strong quasisubmodularity: `x ∼ (x ∨ y)` implies `x ∨ z ∼ (x ∨ y) ∨ z`
/// for every `z`, where `∼` also covers equality. Triples with a missing
/// join are skipped.
pub fn is_modular(r: &OrderRelation) -> ClaimReport {
    const CLAIM: &str = "P1";
    let subject = r.digest();
    let same = |a: usize, b: usize| a == b || r.indifferent(a, b);
    let n = r.len();
    let mut evaluated = false;
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = r.join_index(x, y) else {
                continue;
            };
            for z in 0..n {
                let (Some(xz), Some(xyz)) = (r.join_index(x, z), r.join_index(xy, z)) else {
                    continue;
                };
                evaluated = true;
                if same(x, xy) && !same(xz, xyz) {
                    return ClaimReport::fails(
                        CLAIM,
                        subject,
                        Witness::Triple {
                            x: r.id(x).clone(),
                            y: r.id(y).clone(),
                            z: r.id(z).clone(),
                        },
                    );
                }
            }
        }
    }
    if evaluated {
        ClaimReport::holds(CLAIM, subject)
    } else {
        ClaimReport::vacuous(CLAIM, subject)
    }
}

/// Evaluates the four elementary remarks about top-truncated sets:
///
/// * `R1.1` every join-irreducible element is an atom,
/// * `R1.2` a top-truncated set with a join-irreducible element is totally ordered,
/// * `R1.3` there are exactly `n - 1` meet-irreducible elements,
/// * `R1.4` the number of co-atoms lies in `1..=n-1`.
///
/// Irreducibility is the covering definition: an element covering (or
/// covered by) exactly one element.
pub fn check_remark1(r: &OrderRelation) -> Vec<ClaimReport> {
    let subject = r.digest();
    let n = r.len();
    let join_irr = r.join_irreducibles();
    let atoms = r.atoms();

    let r11 = if join_irr.is_empty() {
        ClaimReport::vacuous("R1.1", subject.clone())
    } else {
        let offenders: Vec<CandidateId> = join_irr
            .iter()
            .filter(|c| !atoms.contains(*c))
            .cloned()
            .collect();
        if offenders.is_empty() {
            ClaimReport::holds("R1.1", subject.clone())
        } else {
            ClaimReport::fails(
                "R1.1",
                subject.clone(),
                Witness::Elements {
                    elements: offenders,
                },
            )
        }
    };

    let r12 = if join_irr.is_empty() || !r.is_top_truncated() {
        ClaimReport::vacuous("R1.2", subject.clone())
    } else {
        match unordered_pair(r) {
            None => ClaimReport::holds("R1.2", subject.clone()),
            Some((x, y)) => ClaimReport::fails(
                "R1.2",
                subject.clone(),
                Witness::IrreducibleWithTie {
                    irreducible: join_irr.first().expect("nonempty").clone(),
                    x,
                    y,
                },
            ),
        }
    };

    let meet_irr = r.meet_irreducibles();
    let r13 = if meet_irr.len() + 1 == n {
        ClaimReport::holds("R1.3", subject.clone())
    } else {
        ClaimReport::fails(
            "R1.3",
            subject.clone(),
            Witness::Count {
                count: meet_irr.len(),
                elements: meet_irr.into_iter().collect(),
            },
        )
    };

    let coatoms = r.coatoms();
    let r14 = if n < 2 {
        ClaimReport::vacuous("R1.4", subject)
    } else if (1..n).contains(&coatoms.len()) {
        ClaimReport::holds("R1.4", subject)
    } else {
        ClaimReport::fails(
            "R1.4",
            subject,
            Witness::Count {
                count: coatoms.len(),
                elements: coatoms.into_iter().collect(),
            },
        )
    };

    vec![r11, r12, r13, r14]
}

/// First pair of distinct elements that is not strictly ordered either way.
fn unordered_pair(r: &OrderRelation) -> Option<(CandidateId, CandidateId)> {
    let n = r.len();
    (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .find(|&(i, j)| !r.strict(i, j) && !r.strict(j, i))
        .map(|(i, j)| (r.id(i).clone(), r.id(j).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::parse_ballot;
    use crate::relation::relation_of;

    fn id(s: &str) -> CandidateId {
        CandidateId::new(s).unwrap()
    }

    fn ballot_relation(text: &str) -> OrderRelation {
        relation_of(&parse_ballot(text, None).unwrap()).unwrap()
    }

    fn relation(cands: &[&str], pairs: &[(&str, &str)]) -> OrderRelation {
        let pairs: Vec<(CandidateId, CandidateId)> =
            pairs.iter().map(|(x, y)| (id(x), id(y))).collect();
        OrderRelation::new(
            cands.iter().map(|s| id(s)),
            pairs.iter().map(|(x, y)| (x, y)),
        )
        .unwrap()
    }

    #[test]
    fn reference_ballot_is_join_semilattice() {
        assert_eq!(
            is_join_semilattice(&ballot_relation("x>y>z>a~b~c~d")).verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn antichain_fails_with_first_pair() {
        let report = is_join_semilattice(&relation(&["a", "b", "c"], &[]));
        assert_eq!(report.verdict, Verdict::Fails);
        assert_eq!(
            report.witness,
            Some(Witness::Pair {
                x: id("a"),
                y: id("b")
            })
        );
    }

    #[test]
    fn intransitive_relation_fails_with_triple() {
        let report = is_join_semilattice(&relation(&["p", "q", "r"], &[("p", "q"), ("q", "r")]));
        assert_eq!(report.verdict, Verdict::Fails);
        assert_eq!(
            report.witness,
            Some(Witness::Triple {
                x: id("p"),
                y: id("q"),
                z: id("r")
            })
        );
    }

    #[test]
    fn reference_ballot_is_modular() {
        assert_eq!(
            is_modular(&ballot_relation("x>y>z>a~b~c~d")).verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn modularity_on_non_minimal_tie() {
        // t above a tied pair p ~ q, both above r.
        let r = relation(
            &["t", "p", "q", "r"],
            &[
                ("t", "p"),
                ("t", "q"),
                ("t", "r"),
                ("p", "q"),
                ("q", "p"),
                ("p", "r"),
                ("q", "r"),
            ],
        );
        assert!(r.is_weak_order() && !r.is_top_truncated());
        assert_eq!(is_modular(&r).verdict, Verdict::Holds);
    }

    #[test]
    fn modularity_skips_missing_joins() {
        // No pair of distinct elements has a join; only triples built from
        // idempotent joins are evaluable.
        let r = relation(&["a", "b"], &[]);
        assert_eq!(is_modular(&r).verdict, Verdict::Holds);
    }

    #[test]
    fn order_claims_on_reference_ballot() {
        let reports = check_remark1(&ballot_relation("x>y>z>a~b~c~d"));
        let by_id = |c: &str| reports.iter().find(|r| r.claim == c).unwrap().clone();
        let r11 = by_id("R1.1");
        assert_eq!(r11.verdict, Verdict::Fails);
        assert_eq!(
            r11.witness,
            Some(Witness::Elements {
                elements: vec![id("x"), id("y")]
            })
        );
        let r12 = by_id("R1.2");
        assert_eq!(r12.verdict, Verdict::Fails);
        assert_eq!(by_id("R1.3").verdict, Verdict::Holds);
        assert_eq!(by_id("R1.4").verdict, Verdict::Holds);
    }

    #[test]
    fn order_claims_on_three_chain() {
        let reports = check_remark1(&ballot_relation("p>q>r"));
        let verdicts: Vec<Verdict> = reports.iter().map(|r| r.verdict).collect();
        // p covers only q, so it is join-irreducible without being an atom.
        assert_eq!(
            verdicts,
            vec![
                Verdict::Fails,
                Verdict::Holds,
                Verdict::Holds,
                Verdict::Holds
            ]
        );
        assert_eq!(
            reports[0].witness,
            Some(Witness::Elements {
                elements: vec![id("p")]
            })
        );
    }

    #[test]
    fn order_claims_on_two_chain_all_hold() {
        let reports = check_remark1(&ballot_relation("p>q"));
        assert!(reports.iter().all(|r| r.verdict == Verdict::Holds));
    }

    #[test]
    fn order_claims_without_join_irreducibles() {
        let reports = check_remark1(&ballot_relation("g>a~b~c"));
        assert_eq!(reports[0].verdict, Verdict::Vacuous);
        assert_eq!(reports[1].verdict, Verdict::Vacuous);
        assert_eq!(reports[2].verdict, Verdict::Holds);
        assert_eq!(reports[3].verdict, Verdict::Holds);
    }

    #[test]
    fn single_candidate_coatoms_vacuous() {
        let reports = check_remark1(&ballot_relation("a"));
        assert_eq!(reports[2].verdict, Verdict::Holds);
        assert_eq!(reports[3].verdict, Verdict::Vacuous);
    }

    #[test]
    fn report_json_shape() {
        let report = is_join_semilattice(&relation(&["a", "b"], &[]));
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["claim"], "T1");
        assert_eq!(json["verdict"], "fails");
        assert_eq!(json["witness"]["kind"], "pair");
        assert_eq!(json["witness"]["x"], "a");
    }
}
