//! Explicit binary relations over a candidate set.
//!
//! A relation is stored as a full `n × n` table of `x ≿ y` flags so the order
//! classifiers can be run against arbitrary relations, not only ones derived
//! from ballots. Strict preference `x ≻ y` is `x ≿ y ∧ ¬(y ≿ x)` and
//! indifference `x ∼ y` is `x ≿ y ∧ y ≿ x` with `x ≠ y`.
//!
//! Lattice operations (joins, meets, covers) work on the strict part plus
//! equality, so mutually indifferent candidates behave like the incomparable
//! bottom elements of the Hasse diagram: in `x>y>z>a~b~c~d` the join of `a`
//! and `b` is `z` and their meet does not exist.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::ballot::{CandidateId, RankedBallot};
use crate::error::{Error, Result};

/// Largest candidate set accepted by relation-level operations.
pub const MAX_RELATION_CANDIDATES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderRelation {
    candidates: Vec<CandidateId>,
    table: Vec<bool>,
}

/// Hasse diagram edge: `upper ≻ lower` with nothing strictly between.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverPair {
    pub upper: CandidateId,
    pub lower: CandidateId,
}

/// Serialized form: every pair `(x, y)` with `x ≿ y`, reflexive pairs included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDump {
    pub candidates: Vec<CandidateId>,
    pub pairs: Vec<(CandidateId, CandidateId)>,
}

impl OrderRelation {
    /// Builds the reflexive closure of `pairs` over `candidates`.
    pub fn new<'a>(
        candidates: impl IntoIterator<Item = CandidateId>,
        pairs: impl IntoIterator<Item = (&'a CandidateId, &'a CandidateId)>,
    ) -> Result<Self> {
        let candidates: Vec<CandidateId> = candidates
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = candidates.len();
        if n > MAX_RELATION_CANDIDATES {
            return Err(Error::TooManyCandidates {
                n,
                cap: MAX_RELATION_CANDIDATES,
            });
        }
        let mut relation = OrderRelation {
            candidates,
            table: vec![false; n * n],
        };
        for i in 0..n {
            relation.table[i * n + i] = true;
        }
        for (x, y) in pairs {
            let i = relation.require(x)?;
            let j = relation.require(y)?;
            relation.table[i * n + j] = true;
        }
        Ok(relation)
    }

    pub fn from_dump(dump: &RelationDump) -> Result<Self> {
        OrderRelation::new(
            dump.candidates.iter().cloned(),
            dump.pairs.iter().map(|(x, y)| (x, y)),
        )
    }

    pub fn dump(&self) -> RelationDump {
        RelationDump {
            candidates: self.candidates.clone(),
            pairs: self
                .index_pairs()
                .filter(|&(i, j)| self.weak(i, j))
                .map(|(i, j)| (self.candidates[i].clone(), self.candidates[j].clone()))
                .collect(),
        }
    }

    /// Compact identifier: candidate list plus the row-major table in hex.
    pub fn digest(&self) -> String {
        let ids: Vec<&str> = self.candidates.iter().map(|c| c.as_str()).collect();
        let mut hex = String::new();
        for chunk in self.table.chunks(4) {
            let nibble = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &bit)| acc | (u8::from(bit) << (3 - i)));
            hex.push(char::from_digit(u32::from(nibble), 16).expect("nibble"));
        }
        format!("{}:{hex}", ids.join(","))
    }

    fn require(&self, id: &CandidateId) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownCandidate(id.clone()))
    }

    pub fn candidates(&self) -> &[CandidateId] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn index_of(&self, id: &CandidateId) -> Option<usize> {
        self.candidates.binary_search(id).ok()
    }

    pub fn id(&self, index: usize) -> &CandidateId {
        &self.candidates[index]
    }

    fn index_pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    // Index-level primitives.

    pub(crate) fn weak(&self, i: usize, j: usize) -> bool {
        self.table[i * self.len() + j]
    }

    pub(crate) fn strict(&self, i: usize, j: usize) -> bool {
        self.weak(i, j) && !self.weak(j, i)
    }

    pub(crate) fn indifferent(&self, i: usize, j: usize) -> bool {
        i != j && self.weak(i, j) && self.weak(j, i)
    }

    /// `i` is `j` or lies strictly above it.
    pub(crate) fn dominates(&self, i: usize, j: usize) -> bool {
        i == j || self.strict(i, j)
    }

    // Id-level queries. Unknown ids yield `false`.

    /// `x ≿ y`.
    pub fn holds(&self, x: &CandidateId, y: &CandidateId) -> bool {
        self.pair(x, y).is_some_and(|(i, j)| self.weak(i, j))
    }

    /// `x ≻ y`.
    pub fn prefers(&self, x: &CandidateId, y: &CandidateId) -> bool {
        self.pair(x, y).is_some_and(|(i, j)| self.strict(i, j))
    }

    /// `x ∼ y` with `x ≠ y`.
    pub fn indifferent_between(&self, x: &CandidateId, y: &CandidateId) -> bool {
        self.pair(x, y).is_some_and(|(i, j)| self.indifferent(i, j))
    }

    fn pair(&self, x: &CandidateId, y: &CandidateId) -> Option<(usize, usize)> {
        Some((self.index_of(x)?, self.index_of(y)?))
    }

    // Classifiers.

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.weak(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            (0..n).all(|j| !self.weak(i, j) || (0..n).all(|k| !self.weak(j, k) || self.weak(i, k)))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.index_pairs().all(|(i, j)| !self.indifferent(i, j))
    }

    /// Reflexive, transitive and antisymmetric.
    pub fn is_partial_order(&self) -> bool {
        self.is_reflexive() && self.is_transitive() && self.is_antisymmetric()
    }

    /// Reflexive and transitive, with indifference transitive as well.
    pub fn is_weak_order(&self) -> bool {
        let n = self.len();
        self.is_reflexive()
            && self.is_transitive()
            && (0..n).all(|i| {
                (0..n).all(|j| {
                    !self.indifferent(i, j)
                        || (0..n)
                            .all(|k| k == i || !self.indifferent(j, k) || self.indifferent(i, k))
                })
            })
    }

    /// Weak order whose only indifferences are between minimal elements, with
    /// the non-minimal elements forming a strict chain.
    pub fn is_top_truncated(&self) -> bool {
        if !self.is_weak_order() {
            return false;
        }
        let minimal = self.minimal_mask();
        self.index_pairs().all(|(i, j)| {
            if i == j {
                return true;
            }
            if self.indifferent(i, j) && !(minimal[i] && minimal[j]) {
                return false;
            }
            minimal[i] || minimal[j] || self.strict(i, j) || self.strict(j, i)
        })
    }

    /// Every pair is comparable.
    pub fn is_complete(&self) -> bool {
        self.index_pairs()
            .all(|(i, j)| self.weak(i, j) || self.weak(j, i))
    }

    /// Complete with every pair of distinct elements strictly ordered.
    pub fn is_total(&self) -> bool {
        self.index_pairs()
            .all(|(i, j)| i == j || self.strict(i, j) || self.strict(j, i))
    }

    fn minimal_mask(&self) -> Vec<bool> {
        let n = self.len();
        (0..n).map(|i| (0..n).all(|j| !self.strict(i, j))).collect()
    }

    pub fn minimal_elements(&self) -> BTreeSet<CandidateId> {
        self.collect_ids(self.minimal_mask())
    }

    fn collect_ids(&self, mask: Vec<bool>) -> BTreeSet<CandidateId> {
        mask.into_iter()
            .enumerate()
            .filter(|&(_, keep)| keep)
            .map(|(i, _)| self.candidates[i].clone())
            .collect()
    }

    // Lattice structure.

    pub(crate) fn join_index(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.len();
        let uppers: Vec<usize> = (0..n)
            .filter(|&u| self.dominates(u, i) && self.dominates(u, j))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&l| uppers.iter().all(|&u| self.dominates(u, l)))
    }

    pub(crate) fn meet_index(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.len();
        let lowers: Vec<usize> = (0..n)
            .filter(|&l| self.dominates(i, l) && self.dominates(j, l))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&g| lowers.iter().all(|&l| self.dominates(g, l)))
    }

    /// Least upper bound of `x` and `y`, if one exists.
    pub fn join(&self, x: &CandidateId, y: &CandidateId) -> Option<CandidateId> {
        let (i, j) = self.pair(x, y)?;
        self.join_index(i, j).map(|k| self.candidates[k].clone())
    }

    /// Greatest lower bound of `x` and `y`, if one exists.
    pub fn meet(&self, x: &CandidateId, y: &CandidateId) -> Option<CandidateId> {
        let (i, j) = self.pair(x, y)?;
        self.meet_index(i, j).map(|k| self.candidates[k].clone())
    }

    pub(crate) fn covers_index(&self, upper: usize, lower: usize) -> bool {
        self.strict(upper, lower)
            && !(0..self.len()).any(|z| self.strict(upper, z) && self.strict(z, lower))
    }

    pub fn covers(&self) -> Vec<CoverPair> {
        let mut out: Vec<CoverPair> = self
            .index_pairs()
            .filter(|&(i, j)| self.covers_index(i, j))
            .map(|(i, j)| CoverPair {
                upper: self.candidates[i].clone(),
                lower: self.candidates[j].clone(),
            })
            .collect();
        out.sort();
        out
    }

    fn lower_cover_counts(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .map(|i| (0..n).filter(|&j| self.covers_index(i, j)).count())
            .collect()
    }

    fn upper_cover_counts(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .map(|j| (0..n).filter(|&i| self.covers_index(i, j)).count())
            .collect()
    }

    /// Elements covering exactly one element.
    pub fn join_irreducibles(&self) -> BTreeSet<CandidateId> {
        self.collect_ids(
            self.lower_cover_counts()
                .into_iter()
                .map(|c| c == 1)
                .collect(),
        )
    }

    /// Elements covered by exactly one element.
    pub fn meet_irreducibles(&self) -> BTreeSet<CandidateId> {
        self.collect_ids(
            self.upper_cover_counts()
                .into_iter()
                .map(|c| c == 1)
                .collect(),
        )
    }

    pub(crate) fn least_index(&self) -> Option<usize> {
        (0..self.len()).find(|&l| (0..self.len()).all(|x| self.dominates(x, l)))
    }

    pub(crate) fn greatest_index(&self) -> Option<usize> {
        (0..self.len()).find(|&g| (0..self.len()).all(|x| self.dominates(g, x)))
    }

    pub fn least(&self) -> Option<CandidateId> {
        self.least_index().map(|i| self.candidates[i].clone())
    }

    pub fn greatest(&self) -> Option<CandidateId> {
        self.greatest_index().map(|i| self.candidates[i].clone())
    }

    /// Elements covering the least element; empty when there is none.
    pub fn atoms(&self) -> BTreeSet<CandidateId> {
        match self.least_index() {
            Some(l) => self.collect_ids((0..self.len()).map(|i| self.covers_index(i, l)).collect()),
            None => BTreeSet::new(),
        }
    }

    /// Elements covered by the greatest element; empty when there is none.
    pub fn coatoms(&self) -> BTreeSet<CandidateId> {
        match self.greatest_index() {
            Some(g) => self.collect_ids((0..self.len()).map(|i| self.covers_index(g, i)).collect()),
            None => BTreeSet::new(),
        }
    }
}

/// The weak-preference relation a ballot induces: ranked candidates in rank
/// order above every unranked candidate, unranked candidates mutually
/// indifferent.
pub fn relation_of(ballot: &RankedBallot) -> Result<OrderRelation> {
    let order: Vec<&CandidateId> = ballot.preference_order().collect();
    let position = |c: &CandidateId| ballot.position(c).expect("ballot member");
    let mut pairs = Vec::new();
    for x in &order {
        for y in &order {
            if position(x) <= position(y) {
                pairs.push((*x, *y));
            }
        }
    }
    OrderRelation::new(ballot.candidates().iter().cloned(), pairs)
}
