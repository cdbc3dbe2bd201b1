use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{exact, PairRecord, Rational};
use crate::ballot::{CandidateId, RankedBallot};
use crate::lattice::Witness;
use crate::relation::OrderRelation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UtilityAssignment {
    #[serde(serialize_with = "exact::serialize_map")]
    values: BTreeMap<CandidateId, Rational>,
}

impl UtilityAssignment {
    pub fn new(values: BTreeMap<CandidateId, Rational>) -> Self {
        UtilityAssignment { values }
    }

    pub fn constant<'a>(candidates: impl IntoIterator<Item = &'a CandidateId>, value: i64) -> Self {
        UtilityAssignment {
            values: candidates
                .into_iter()
                .map(|c| (c.clone(), Rational::from_integer(value)))
                .collect(),
        }
    }

    pub fn get(&self, id: &CandidateId) -> Option<Rational> {
        self.values.get(id).copied()
    }

    pub fn values(&self) -> &BTreeMap<CandidateId, Rational> {
        &self.values
    }

    fn at(&self, r: &OrderRelation, i: usize) -> Option<Rational> {
        self.get(r.id(i))
    }
}

/// Integer utility: rank `i` of `k` ranked candidates scores `k - i + 1` and
/// every unranked candidate scores `0`.
pub fn canonical_utility(ballot: &RankedBallot) -> UtilityAssignment {
    let k = ballot.ranked().len() as i64;
    let mut values = BTreeMap::new();
    for (i, c) in ballot.ranked().iter().enumerate() {
        values.insert(c.clone(), Rational::from_integer(k - i as i64));
    }
    for c in ballot.unranked() {
        values.insert(c.clone(), Rational::from_integer(0));
    }
    UtilityAssignment { values }
}

/// `x ≿ y ⇒ u(x) ≥ u(y)` and `x ≻ y ⇒ u(x) > u(y)`.
pub fn is_representation(u: &UtilityAssignment, r: &OrderRelation) -> bool {
    let n = r.len();
    for i in 0..n {
        for j in 0..n {
            let (Some(ui), Some(uj)) = (u.at(r, i), u.at(r, j)) else {
                return false;
            };
            if (r.weak(i, j) && ui < uj) || (r.strict(i, j) && ui <= uj) {
                return false;
            }
        }
    }
    true
}

/// First pair whose meet exists and violates
/// `u(x ∧ y) + u(x ∨ y) ≤ u(x) + u(y)`. Pairs without a meet or join are
/// skipped.
pub fn submodularity_violation(u: &UtilityAssignment, r: &OrderRelation) -> Option<Witness> {
    let n = r.len();
    for i in 0..n {
        for j in i..n {
            let (Some(meet), Some(join)) = (r.meet_index(i, j), r.join_index(i, j)) else {
                continue;
            };
            let value = |k| u.at(r, k).unwrap_or_default();
            if value(meet) + value(join) > value(i) + value(j) {
                return Some(Witness::Pair {
                    x: r.id(i).clone(),
                    y: r.id(j).clone(),
                });
            }
        }
    }
    None
}

pub fn is_submodular(u: &UtilityAssignment, r: &OrderRelation) -> bool {
    r.candidates().iter().all(|c| u.get(c).is_some()) && submodularity_violation(u, r).is_none()
}

/// Utility is antitone in rank position: an earlier position never scores
/// less than a later one.
pub fn is_weakly_decreasing(u: &UtilityAssignment, ballot: &RankedBallot) -> bool {
    let order: Vec<&CandidateId> = ballot.preference_order().collect();
    order.iter().all(|x| {
        order.iter().all(|y| {
            let (px, py) = (ballot.position(x), ballot.position(y));
            px > py || matches!((u.get(x), u.get(y)), (Some(a), Some(b)) if a >= b)
        })
    })
}

/// The relation is antitone in rank position: `pos(x) ≤ pos(y) ⇒ x ≿ y`.
pub fn relation_is_weakly_decreasing(r: &OrderRelation, ballot: &RankedBallot) -> bool {
    ballot.candidates().iter().all(|x| {
        ballot
            .candidates()
            .iter()
            .all(|y| ballot.position(x) > ballot.position(y) || r.holds(x, y))
    })
}

/// Strongest rationalizability label a utility earns on a pair record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalizabilityClass {
    None,
    Rationalizable,
    AlmostStrict,
    Strict,
}

impl RationalizabilityClass {
    /// Strict rationalizability implies almost strict, which implies plain.
    pub fn satisfies(self, required: RationalizabilityClass) -> bool {
        self >= required
    }
}

impl fmt::Display for RationalizabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RationalizabilityClass::None => "none",
            RationalizabilityClass::Rationalizable => "rationalizable",
            RationalizabilityClass::AlmostStrict => "almost_strict",
            RationalizabilityClass::Strict => "strict",
        })
    }
}

pub fn rationalizability_class(u: &UtilityAssignment, p: &PairRecord) -> RationalizabilityClass {
    let mut all_strict = true;
    let mut one_way_strict = true;
    for (x, y) in p.pairs() {
        let (Some(ux), Some(uy)) = (u.get(x), u.get(y)) else {
            return RationalizabilityClass::None;
        };
        if ux < uy {
            return RationalizabilityClass::None;
        }
        if ux == uy {
            all_strict = false;
            if !p.contains(y, x) {
                one_way_strict = false;
            }
        }
    }
    if all_strict {
        RationalizabilityClass::Strict
    } else if one_way_strict {
        RationalizabilityClass::AlmostStrict
    } else {
        RationalizabilityClass::Rationalizable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballot::parse_ballot;
    use crate::relation::relation_of;
    use crate::representation::pair_record;

    fn id(s: &str) -> CandidateId {
        CandidateId::new(s).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn canonical_reference_ballot() {
        let b = parse_ballot("x>y>z>a~b~c~d", None).unwrap();
        let u = canonical_utility(&b);
        for (c, v) in [
            ("x", 3),
            ("y", 2),
            ("z", 1),
            ("a", 0),
            ("b", 0),
            ("c", 0),
            ("d", 0),
        ] {
            assert_eq!(u.get(&id(c)), Some(int(v)), "{c}");
        }
    }

    #[test]
    fn canonical_small_cases() {
        let u = canonical_utility(&parse_ballot("p>q", None).unwrap());
        assert_eq!(
            (u.get(&id("p")), u.get(&id("q"))),
            (Some(int(2)), Some(int(1)))
        );
        let u = canonical_utility(&parse_ballot("g>a~b", None).unwrap());
        assert_eq!(u.get(&id("g")), Some(int(1)));
        assert_eq!(u.get(&id("a")), Some(int(0)));
        assert_eq!(u.get(&id("b")), Some(int(0)));
    }

    #[test]
    fn canonical_is_submodular_representation() {
        let b = parse_ballot("x>y>z>a~b~c~d", None).unwrap();
        let r = relation_of(&b).unwrap();
        let u = canonical_utility(&b);
        assert!(is_representation(&u, &r));
        assert!(is_submodular(&u, &r));
        assert!(is_weakly_decreasing(&u, &b));
        assert!(relation_is_weakly_decreasing(&r, &b));
    }

    #[test]
    fn chain_pairs_meet_submodularity_with_equality() {
        let b = parse_ballot("x>y", None).unwrap();
        let r = relation_of(&b).unwrap();
        let u = canonical_utility(&b);
        let (x, y) = (id("x"), id("y"));
        let meet = r.meet(&x, &y).unwrap();
        let join = r.join(&x, &y).unwrap();
        assert_eq!(
            u.get(&meet).unwrap() + u.get(&join).unwrap(),
            u.get(&x).unwrap() + u.get(&y).unwrap()
        );
    }

    #[test]
    fn reversed_utility_is_not_a_representation() {
        let b = parse_ballot("p>q>r", None).unwrap();
        let r = relation_of(&b).unwrap();
        let u = UtilityAssignment::new(
            [("p", 1), ("q", 2), ("r", 3)]
                .iter()
                .map(|(c, v)| (id(c), int(*v)))
                .collect(),
        );
        assert!(!is_representation(&u, &r));
        assert!(!is_weakly_decreasing(&u, &b));
    }

    #[test]
    fn supermodular_utility_is_detected() {
        // Diamond: p and q are incomparable with meet b and join t.
        let cands: Vec<CandidateId> = ["t", "p", "q", "b"].iter().map(|s| id(s)).collect();
        let edges: Vec<(CandidateId, CandidateId)> =
            [("t", "p"), ("t", "q"), ("t", "b"), ("p", "b"), ("q", "b")]
                .iter()
                .map(|(x, y)| (id(x), id(y)))
                .collect();
        let r = OrderRelation::new(cands, edges.iter().map(|(x, y)| (x, y))).unwrap();
        let u = |vals: [i64; 4]| {
            UtilityAssignment::new(
                ["t", "p", "q", "b"]
                    .iter()
                    .zip(vals)
                    .map(|(c, v)| (id(c), int(v)))
                    .collect(),
            )
        };
        assert!(is_submodular(&u([3, 2, 2, 1]), &r));
        let bad = u([5, 0, 0, 5]);
        assert_eq!(
            submodularity_violation(&bad, &r),
            Some(Witness::Pair {
                x: id("p"),
                y: id("q")
            })
        );
        assert!(!is_submodular(&bad, &r));
        let partial = UtilityAssignment::new([(id("t"), int(1))].into_iter().collect());
        assert!(!is_submodular(&partial, &r));
    }

    #[test]
    fn classes() {
        let b = parse_ballot("x>y>z>a~b~c~d", None).unwrap();
        let p = pair_record(&b);
        assert_eq!(
            rationalizability_class(&canonical_utility(&b), &p),
            RationalizabilityClass::AlmostStrict
        );
        let zero = UtilityAssignment::constant(b.candidates(), 0);
        assert_eq!(
            rationalizability_class(&zero, &p),
            RationalizabilityClass::Rationalizable
        );

        let t = parse_ballot("p>q>r", None).unwrap();
        assert_eq!(
            rationalizability_class(&canonical_utility(&t), &pair_record(&t)),
            RationalizabilityClass::Strict
        );
        let reversed = UtilityAssignment::new(
            [("p", 0), ("q", 1), ("r", 2)]
                .iter()
                .map(|(c, v)| (id(c), int(*v)))
                .collect(),
        );
        assert_eq!(
            rationalizability_class(&reversed, &pair_record(&t)),
            RationalizabilityClass::None
        );
        assert!(RationalizabilityClass::Strict.satisfies(RationalizabilityClass::AlmostStrict));
        assert!(
            !RationalizabilityClass::Rationalizable.satisfies(RationalizabilityClass::AlmostStrict)
        );
    }

    #[test]
    fn utility_json() {
        let b = parse_ballot("p>q>r", None).unwrap();
        let json = serde_json::to_string(&canonical_utility(&b)).unwrap();
        assert_eq!(json, r#"{"values":{"p":3,"q":2,"r":1}}"#);
    }
}
