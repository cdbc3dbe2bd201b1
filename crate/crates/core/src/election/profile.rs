use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::Read;
use std::path::{Path, PathBuf};

use crate::ballot::{CandidateId, RankedBallot};
use crate::error::{Error, Result};

pub const MIN_ELECTION_CANDIDATES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoterBallot {
    pub voter_id: String,
    pub ballot: RankedBallot,
}

/// Voters' ballots over a shared candidate set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElectionProfile {
    candidates: BTreeSet<CandidateId>,
    ballots: Vec<VoterBallot>,
}

impl ElectionProfile {
    pub fn new(candidates: BTreeSet<CandidateId>, ballots: Vec<VoterBallot>) -> Result<Self> {
        if candidates.len() < MIN_ELECTION_CANDIDATES {
            return Err(Error::TooFewCandidates(candidates.len()));
        }
        let mut seen = HashSet::new();
        for entry in &ballots {
            if !seen.insert(entry.voter_id.as_str()) {
                return Err(Error::DuplicateVoter(entry.voter_id.clone()));
            }
            if entry.ballot.candidates() != &candidates {
                return Err(Error::CandidateSetMismatch(entry.voter_id.clone()));
            }
        }
        Ok(ElectionProfile {
            candidates,
            ballots,
        })
    }

    /// Builds a profile from ranked lists, naming voters `v1, v2, …`.
    pub fn from_rankings(
        candidates: BTreeSet<CandidateId>,
        rankings: impl IntoIterator<Item = Vec<CandidateId>>,
    ) -> Result<Self> {
        let ballots = rankings
            .into_iter()
            .enumerate()
            .map(|(i, ranked)| {
                Ok(VoterBallot {
                    voter_id: format!("v{}", i + 1),
                    ballot: RankedBallot::over(&candidates, ranked)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ElectionProfile::new(candidates, ballots)
    }

    pub fn candidates(&self) -> &BTreeSet<CandidateId> {
        &self.candidates
    }

    pub fn ballots(&self) -> &[VoterBallot] {
        &self.ballots
    }

    pub fn len(&self) -> usize {
        self.ballots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ballots.is_empty()
    }

    /// Same voters with every ballot cut to its first `length` ranked entries.
    pub fn truncated(&self, length: usize) -> ElectionProfile {
        ElectionProfile {
            candidates: self.candidates.clone(),
            ballots: self
                .ballots
                .iter()
                .map(|v| VoterBallot {
                    voter_id: v.voter_id.clone(),
                    ballot: v.ballot.truncated(length),
                })
                .collect(),
        }
    }

    /// CSV text in the layout accepted by [`load_profile`].
    pub fn to_csv(&self) -> String {
        let width = self
            .ballots
            .iter()
            .map(|v| v.ballot.ranked().len())
            .max()
            .unwrap_or(1);
        let mut out = String::from("voter_id");
        for j in 1..=width {
            out.push_str(&format!(",rank{j}"));
        }
        out.push('\n');
        for v in &self.ballots {
            out.push_str(&v.voter_id);
            for c in v.ballot.ranked() {
                out.push(',');
                out.push_str(c.as_str());
            }
            out.push('\n');
        }
        out
    }
}

/// Reads a profile from a CSV file with header `voter_id,rank1,…,rankJ`.
///
/// Each row lists a voter's ranked candidates in order; blank cells may only
/// trail the filled ones. Candidates a row does not mention are unranked.
/// The candidate set is the union of every mentioned candidate unless
/// `candidates` is given, in which case mentions outside it are rejected.
pub fn load_profile(
    path: &Path,
    candidates: Option<&BTreeSet<CandidateId>>,
) -> Result<ElectionProfile> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_profile(file, path, candidates)
}

/// As [`load_profile`], reading from any source; `path` only labels errors.
pub fn read_profile(
    source: impl Read,
    path: &Path,
    candidates: Option<&BTreeSet<CandidateId>>,
) -> Result<ElectionProfile> {
    let fail = |line: u64, message: String| Error::Csv {
        path: PathBuf::from(path),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        Some(record) => record.map_err(|e| fail(csv_line(&e), e.to_string()))?,
        None => return Err(fail(1, "missing header".into())),
    };
    let width = check_header(&header).map_err(|m| fail(1, m))?;

    let mut rows: Vec<(u64, String, Vec<CandidateId>)> = Vec::new();
    let mut first_line: HashMap<String, u64> = HashMap::new();
    for record in records {
        let record = record.map_err(|e| fail(csv_line(&e), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() > width + 1 {
            return Err(fail(
                line,
                format!("{} rank cells, header declares {width}", record.len() - 1),
            ));
        }
        let voter = record[0].to_string();
        if voter.is_empty() {
            return Err(fail(line, "blank voter_id".into()));
        }
        let mut ranked = Vec::new();
        let mut gap = false;
        for cell in record.iter().skip(1) {
            if cell.is_empty() {
                gap = true;
                continue;
            }
            if gap {
                return Err(fail(
                    line,
                    "gap in ranking: blank cell before a filled cell".into(),
                ));
            }
            let id = CandidateId::new(cell).map_err(|e| fail(line, e.to_string()))?;
            if ranked.contains(&id) {
                return Err(fail(line, format!("duplicate candidate {id}")));
            }
            if let Some(allowed) = candidates {
                if !allowed.contains(&id) {
                    return Err(fail(line, format!("unknown candidate {id}")));
                }
            }
            ranked.push(id);
        }
        if ranked.is_empty() {
            return Err(fail(line, format!("voter {voter} ranks no candidate")));
        }
        if let Some(first) = first_line.insert(voter.clone(), line) {
            return Err(fail(
                line,
                format!("duplicate voter_id {voter} (first on line {first})"),
            ));
        }
        rows.push((line, voter, ranked));
    }

    let universe: BTreeSet<CandidateId> = match candidates {
        Some(set) => set.clone(),
        None => rows
            .iter()
            .flat_map(|(_, _, r)| r.iter().cloned())
            .collect(),
    };
    if universe.len() < MIN_ELECTION_CANDIDATES {
        return Err(Error::TooFewCandidates(universe.len()));
    }
    let ballots = rows
        .into_iter()
        .map(|(line, voter_id, ranked)| {
            let ballot =
                RankedBallot::over(&universe, ranked).map_err(|e| fail(line, e.to_string()))?;
            Ok(VoterBallot { voter_id, ballot })
        })
        .collect::<Result<Vec<_>>>()?;
    ElectionProfile::new(universe, ballots)
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.line())
}

fn check_header(header: &csv::StringRecord) -> std::result::Result<usize, String> {
    if header.get(0) != Some("voter_id") {
        return Err("header must start with voter_id".into());
    }
    for (j, name) in header.iter().enumerate().skip(1) {
        if name != format!("rank{j}") {
            return Err(format!("expected header column rank{j}, found {name:?}"));
        }
    }
    if header.len() < 2 {
        return Err("header declares no rank columns".into());
    }
    Ok(header.len() - 1)
}
