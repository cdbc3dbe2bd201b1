//! Candidates and ranked-choice ballots.
//!
//! A ballot is a strict chain of ranked candidates followed by a (possibly
//! empty) tail of unranked candidates that are mutually indifferent and sit
//! below every ranked candidate. The textual form is
//! `x>y>z>a~b~c~d`: `>` separates ranks and `~` joins the unranked tail,
//! which may only appear as the final group.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier of a single candidate. Nonempty ASCII letters, digits and `_`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CandidateId(String);

impl CandidateId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if !id.is_empty() && id.chars().all(is_id_char) {
            Ok(CandidateId(id))
        } else {
            Err(Error::InvalidCandidateId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for CandidateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CandidateId::new(s)
    }
}

impl TryFrom<String> for CandidateId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        CandidateId::new(s)
    }
}

impl From<CandidateId> for String {
    fn from(id: CandidateId) -> String {
        id.0
    }
}

impl AsRef<str> for CandidateId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Parses a comma separated candidate list such as `a,b,c`.
pub fn parse_candidate_list(text: &str) -> Result<BTreeSet<CandidateId>> {
    let mut out = BTreeSet::new();
    for part in text.split(',') {
        let id = CandidateId::new(part.trim())?;
        if !out.insert(id.clone()) {
            return Err(Error::DuplicateCandidate(id));
        }
    }
    Ok(out)
}

/// A voter's top-truncated order over a candidate set.
///
/// Invariants: `ranked` is nonempty and duplicate free, `ranked` and
/// `unranked` partition the candidate set, and `unranked` never holds exactly
/// one candidate (a lone unranked candidate is appended to `ranked`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankedBallot {
    candidates: BTreeSet<CandidateId>,
    ranked: Vec<CandidateId>,
    unranked: BTreeSet<CandidateId>,
}

impl RankedBallot {
    pub fn new(
        ranked: Vec<CandidateId>,
        unranked: impl IntoIterator<Item = CandidateId>,
    ) -> Result<Self> {
        if ranked.is_empty() {
            return Err(Error::EmptyRanking);
        }
        let mut candidates = BTreeSet::new();
        for id in &ranked {
            if !candidates.insert(id.clone()) {
                return Err(Error::DuplicateCandidate(id.clone()));
            }
        }
        let mut tail = BTreeSet::new();
        for id in unranked {
            if !candidates.insert(id.clone()) {
                return Err(Error::DuplicateCandidate(id));
            }
            tail.insert(id);
        }
        let mut ballot = RankedBallot {
            candidates,
            ranked,
            unranked: tail,
        };
        ballot.normalize();
        Ok(ballot)
    }

    /// Builds a ballot over `candidates` that ranks `ranked` and leaves every
    /// other candidate unranked.
    pub fn over(candidates: &BTreeSet<CandidateId>, ranked: Vec<CandidateId>) -> Result<Self> {
        for id in &ranked {
            if !candidates.contains(id) {
                return Err(Error::UnknownCandidate(id.clone()));
            }
        }
        let listed: BTreeSet<&CandidateId> = ranked.iter().collect();
        let rest: Vec<CandidateId> = candidates
            .iter()
            .filter(|c| !listed.contains(c))
            .cloned()
            .collect();
        RankedBallot::new(ranked, rest)
    }

    fn normalize(&mut self) {
        if self.unranked.len() == 1 {
            let last = self.unranked.pop_first().expect("one element");
            self.ranked.push(last);
        }
    }

    pub fn candidates(&self) -> &BTreeSet<CandidateId> {
        &self.candidates
    }

    pub fn ranked(&self) -> &[CandidateId] {
        &self.ranked
    }

    pub fn unranked(&self) -> &BTreeSet<CandidateId> {
        &self.unranked
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.unranked.is_empty()
    }

    pub fn contains(&self, id: &CandidateId) -> bool {
        self.candidates.contains(id)
    }

    pub fn is_ranked(&self, id: &CandidateId) -> bool {
        self.ranked.contains(id)
    }

    /// 1-based rank position. Every unranked candidate shares position `k + 1`
    /// where `k` is the number of ranked candidates.
    pub fn position(&self, id: &CandidateId) -> Option<usize> {
        if let Some(i) = self.ranked.iter().position(|c| c == id) {
            Some(i + 1)
        } else if self.unranked.contains(id) {
            Some(self.ranked.len() + 1)
        } else {
            None
        }
    }

    /// Candidates in preference order: ranked first, then the unranked tail
    /// in id order.
    pub fn preference_order(&self) -> impl Iterator<Item = &CandidateId> {
        self.ranked.iter().chain(self.unranked.iter())
    }

    /// Keeps the first `length` ranked entries and moves the rest to the
    /// unranked tail.
    pub fn truncated(&self, length: usize) -> RankedBallot {
        let keep = length.clamp(1, self.ranked.len());
        let ranked = self.ranked[..keep].to_vec();
        let tail = self.ranked[keep..]
            .iter()
            .chain(self.unranked.iter())
            .cloned();
        RankedBallot::new(ranked, tail).expect("truncation preserves ballot invariants")
    }
}

impl fmt::Display for RankedBallot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.ranked.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            write!(f, "{id}")?;
        }
        for (i, id) in self.unranked.iter().enumerate() {
            f.write_str(if i == 0 { ">" } else { "~" })?;
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

impl FromStr for RankedBallot {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_ballot(s, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TokenKind {
    Id,
    Prefer,
    Tie,
}

#[derive(Debug)]
struct Token<'a> {
    kind: TokenKind,
    text: &'a str,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token<'_>>> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().enumerate().peekable();
    while let Some((col, (start, c))) = chars.next() {
        let column = col + 1;
        match c {
            '>' => tokens.push(Token {
                kind: TokenKind::Prefer,
                text: &text[start..start + 1],
                column,
            }),
            '~' => tokens.push(Token {
                kind: TokenKind::Tie,
                text: &text[start..start + 1],
                column,
            }),
            c if c.is_whitespace() => {}
            c if is_id_char(c) => {
                let mut end = start + c.len_utf8();
                while let Some(&(_, (i, next))) = chars.peek() {
                    if !is_id_char(next) {
                        break;
                    }
                    end = i + next.len_utf8();
                    chars.next();
                }
                tokens.push(Token {
                    kind: TokenKind::Id,
                    text: &text[start..end],
                    column,
                });
            }
            other => {
                return Err(Error::Grammar {
                    column,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(tokens)
}

/// Parses the ballot grammar
///
/// ```text
/// ballot   := id ('>' id)* ('>' tiegroup)?
/// tiegroup := id ('~' id)+
/// ```
///
/// When `candidates` is given, every mentioned id must belong to it and the
/// unmentioned candidates join the unranked tail.
pub fn parse_ballot(
    text: &str,
    candidates: Option<&BTreeSet<CandidateId>>,
) -> Result<RankedBallot> {
    let tokens = tokenize(text)?;
    let end_column = text.chars().count() + 1;

    // Groups of ids separated by `>`; ids within a group are joined by `~`.
    let mut groups: Vec<Vec<&Token<'_>>> = vec![Vec::new()];
    let mut first_tie: Vec<Option<usize>> = vec![None];
    let mut expect_id = true;
    for token in &tokens {
        match (token.kind, expect_id) {
            (TokenKind::Id, true) => {
                groups.last_mut().expect("nonempty").push(token);
                expect_id = false;
            }
            (TokenKind::Prefer, false) => {
                groups.push(Vec::new());
                first_tie.push(None);
                expect_id = true;
            }
            (TokenKind::Tie, false) => {
                first_tie
                    .last_mut()
                    .expect("nonempty")
                    .get_or_insert(token.column);
                expect_id = true;
            }
            (_, true) => {
                return Err(Error::Grammar {
                    column: token.column,
                    message: format!("expected candidate id, found {:?}", token.text),
                })
            }
            (TokenKind::Id, false) => {
                return Err(Error::Grammar {
                    column: token.column,
                    message: format!("expected '>' or '~' before {:?}", token.text),
                })
            }
        }
    }
    if expect_id {
        return Err(Error::Grammar {
            column: end_column,
            message: "expected candidate id at end of ballot".to_string(),
        });
    }

    let last = groups.len() - 1;
    for (i, tie) in first_tie.iter().enumerate() {
        if let (Some(column), true) = (tie, i != last) {
            return Err(Error::Grammar {
                column: *column,
                message: "tie group '~' may only appear in the final position".to_string(),
            });
        }
    }

    let mut ranked = Vec::new();
    let mut tied = Vec::new();
    for group in &groups {
        let ids = group
            .iter()
            .map(|t| CandidateId::new(t.text))
            .collect::<Result<Vec<_>>>()?;
        if group.len() > 1 {
            tied = ids;
        } else {
            ranked.extend(ids);
        }
    }
    if ranked.is_empty() {
        return Err(Error::EmptyRanking);
    }

    match candidates {
        None => RankedBallot::new(ranked, tied),
        Some(set) => {
            let mut mentioned = BTreeSet::new();
            for id in ranked.iter().chain(tied.iter()) {
                if !set.contains(id) {
                    return Err(Error::UnknownCandidate(id.clone()));
                }
                if !mentioned.insert(id.clone()) {
                    return Err(Error::DuplicateCandidate(id.clone()));
                }
            }
            let rest = set.iter().filter(|c| !mentioned.contains(*c)).cloned();
            RankedBallot::new(ranked, tied.into_iter().chain(rest))
        }
    }
}

/// Renders a ballot in the grammar accepted by [`parse_ballot`].
pub fn format_ballot(ballot: &RankedBallot) -> String {
    ballot.to_string()
}
