//! Exhaustive generation of every top-truncated order on a small candidate set.
//!
//! Ballots are produced by ranked-prefix length `k = 1..=n` and, within a
//! length, in lexicographic order of the ranked sequence. Length `n - 1` is
//! skipped for `n ≥ 2` because it normalizes to the same relation as a full
//! ranking.

use std::collections::BTreeSet;

use crate::ballot::{CandidateId, RankedBallot};
use crate::error::{Error, Result};

/// Hard cap on enumeration size.
pub const MAX_ENUMERATION_N: usize = 7;

/// Environment variable that may lower (never raise) [`MAX_ENUMERATION_N`].
pub const MAX_N_ENV: &str = "BALLOT_LATTICE_MAX_N";

/// Effective cap after applying [`MAX_N_ENV`].
pub fn enumeration_cap() -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(MAX_ENUMERATION_N, |v| v.min(MAX_ENUMERATION_N))
}

/// Number of distinct ballots on `n` candidates:
/// `Σ_{k=1..n} n!/(n-k)!` minus the `n!/1!` rankings of length `n - 1`.
pub fn ballot_count(n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut total = 0u64;
    let mut falling = 1u64;
    for k in 1..=n {
        falling *= (n - k + 1) as u64;
        if !(n >= 2 && k == n - 1) {
            total += falling;
        }
    }
    total
}

/// Default candidate names `a, b, c, …`.
pub fn default_candidates(n: usize) -> BTreeSet<CandidateId> {
    (0..n)
        .map(|i| {
            let name = if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("c{i}")
            };
            CandidateId::new(name).expect("valid id")
        })
        .collect()
}

/// Lazy, deterministic stream of every ballot on a candidate set.
#[derive(Debug, Clone)]
pub struct EnumerationStream {
    candidates: Vec<CandidateId>,
    prefix_len: usize,
    /// Current ranked sequence as indices into `candidates`.
    current: Option<Vec<usize>>,
}

pub fn enumerate_ballots(candidates: &BTreeSet<CandidateId>) -> Result<EnumerationStream> {
    let n = candidates.len();
    if n == 0 {
        return Err(Error::EmptyCandidateSet);
    }
    let cap = enumeration_cap();
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    let mut stream = EnumerationStream {
        candidates: candidates.iter().cloned().collect(),
        prefix_len: 1,
        current: None,
    };
    stream.current = Some(stream.first_of_length(1));
    Ok(stream)
}

impl EnumerationStream {
    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    fn first_of_length(&self, k: usize) -> Vec<usize> {
        (0..k).collect()
    }

    fn skips(&self, k: usize) -> bool {
        let n = self.candidates.len();
        n >= 2 && k == n - 1
    }

    /// Next k-permutation in lexicographic order, if any.
    fn advance(&self, seq: &[usize]) -> Option<Vec<usize>> {
        let n = self.candidates.len();
        let k = seq.len();
        for pos in (0..k).rev() {
            let used: BTreeSet<usize> = seq[..pos].iter().copied().collect();
            if let Some(next) = (seq[pos] + 1..n).find(|v| !used.contains(v)) {
                let mut out = seq[..pos].to_vec();
                out.push(next);
                let mut taken: BTreeSet<usize> = out.iter().copied().collect();
                while out.len() < k {
                    let smallest = (0..n).find(|v| !taken.contains(v)).expect("k <= n");
                    taken.insert(smallest);
                    out.push(smallest);
                }
                return Some(out);
            }
        }
        None
    }

    fn build(&self, seq: &[usize]) -> RankedBallot {
        let ranked: Vec<CandidateId> = seq.iter().map(|&i| self.candidates[i].clone()).collect();
        let rest = (0..self.candidates.len())
            .filter(|i| !seq.contains(i))
            .map(|i| self.candidates[i].clone());
        RankedBallot::new(ranked, rest).expect("enumerated ballots are valid")
    }
}

impl Iterator for EnumerationStream {
    type Item = RankedBallot;

    fn next(&mut self) -> Option<RankedBallot> {
        let n = self.candidates.len();
        while self.skips(self.prefix_len) {
            self.prefix_len += 1;
            self.current = Some(self.first_of_length(self.prefix_len));
        }
        let seq = self.current.take()?;
        let ballot = self.build(&seq);
        self.current = match self.advance(&seq) {
            Some(next) => Some(next),
            None if self.prefix_len < n => {
                self.prefix_len += 1;
                Some(self.first_of_length(self.prefix_len))
            }
            None => None,
        };
        Some(ballot)
    }
}
