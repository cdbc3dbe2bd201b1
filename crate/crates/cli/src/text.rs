use std::collections::BTreeSet;
use std::io::{Result, Write};

use ballot_lattice::claims::VerifySummary;
use ballot_lattice::election::{ProfileReport, TabulationResult, TruncationReport};
use ballot_lattice::representation::Theorem3Witness;
use ballot_lattice::CandidateId;

use crate::report::{AnalyzeReport, Theorem3Report, WitnessReport};

fn list<'a>(ids: impl IntoIterator<Item = &'a CandidateId>) -> String {
    let names: Vec<&str> = ids.into_iter().map(|c| c.as_str()).collect();
    if names.is_empty() {
        "(none)".to_string()
    } else {
        names.join(", ")
    }
}

fn pairs(pairs: &[(CandidateId, CandidateId)]) -> String {
    let items: Vec<String> = pairs.iter().map(|(x, y)| format!("({x},{y})")).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn analyze(out: &mut dyn Write, r: &AnalyzeReport) -> Result<()> {
    let c = &r.classification;
    writeln!(out, "ballot: {}", r.ballot)?;
    writeln!(out, "ranked: {}", list(&r.ranked))?;
    writeln!(out, "unranked: {}", list(&r.unranked))?;
    writeln!(
        out,
        "order: partial_order={} weak_order={} top_truncated={} total={}",
        c.is_partial_order, c.is_weak_order, c.is_top_truncated, c.is_total
    )?;
    writeln!(out, "hasse:")?;
    let uppers: BTreeSet<&CandidateId> = r.covers.iter().map(|e| &e.upper).collect();
    for upper in r.ranked.iter().filter(|c| uppers.contains(c)) {
        writeln!(out, "  {upper}")?;
        for edge in r.covers.iter().filter(|e| &e.upper == upper) {
            writeln!(out, "    {}", edge.lower)?;
        }
    }
    writeln!(out, "join-irreducible: {}", list(&r.join_irreducibles))?;
    writeln!(
        out,
        "meet-irreducible ({}): {}",
        r.meet_irreducible_count,
        list(&r.meet_irreducibles)
    )?;
    writeln!(out, "atoms: {}", list(&r.atoms))?;
    writeln!(out, "coatoms: {}", list(&r.coatoms))?;
    let utility: Vec<String> = r
        .ranked
        .iter()
        .chain(&r.unranked)
        .map(|c| {
            format!(
                "{c}={}",
                r.canonical_utility.get(c).expect("every candidate")
            )
        })
        .collect();
    writeln!(
        out,
        "canonical utility: {} ({})",
        utility.join(" "),
        r.canonical_class
    )?;
    writeln!(out, "claims:")?;
    for entry in &r.claims {
        let report = &entry.report;
        write!(
            out,
            "  {:<12} {:<13} {}",
            report.claim, entry.class, report.verdict
        )?;
        match &report.witness {
            Some(w) => writeln!(out, "  {w}")?,
            None => writeln!(out)?,
        }
    }
    Ok(())
}

pub fn profile(out: &mut dyn Write, r: &ProfileReport) -> Result<()> {
    writeln!(out, "candidates: {}", list(&r.candidates))?;
    writeln!(out, "voters: {}", r.voters)?;
    writeln!(out, "mean ranked fraction: {:.4}", r.mean_ranked_fraction)?;
    for b in &r.ballots {
        writeln!(
            out,
            "  {:<10} {:<24} ranked={} meet_irreducibles={} coatoms={} class={}",
            b.voter_id,
            b.ballot,
            b.ranked,
            b.meet_irreducibles,
            list(&b.coatoms),
            b.canonical_class
        )?;
    }
    Ok(())
}

pub fn verify(out: &mut dyn Write, s: &VerifySummary) -> Result<()> {
    writeln!(out, "n = {}, {} ballots", s.n, s.ballot_count)?;
    for c in &s.claims {
        if !c.evaluated {
            writeln!(
                out,
                "{:<12} {:<13} skipped above n = {}",
                c.claim, c.class, s.caps["sweep_n"]
            )?;
            continue;
        }
        writeln!(
            out,
            "{:<12} {:<13} holds {}/{}  fails {}  vacuous {}",
            c.claim, c.class, c.holds, s.ballot_count, c.fails, c.vacuous
        )?;
        for w in c.witnesses.iter().take(3) {
            writeln!(out, "    {}: {}", w.subject, w.witness)?;
        }
        if c.witnesses.len() > 3 {
            writeln!(out, "    ... {} more", c.witnesses.len() - 3)?;
        }
    }
    Ok(())
}

pub fn theorem3(out: &mut dyn Write, r: &Theorem3Report) -> Result<()> {
    writeln!(out, "ballot: {}", r.ballot)?;
    writeln!(out, "pair record: {} pairs", r.record_size)?;
    match &r.full {
        None => writeln!(out, "full record: empty")?,
        Some(v) => {
            let witness = match &v.witness {
                Theorem3Witness::ExtremePoint(x) => format!("extreme point {x}"),
                Theorem3Witness::SubRecord(p) => format!("sub-record {}", pairs(p)),
                Theorem3Witness::Failure { all_unranked } => {
                    format!("no witness (all unranked: {all_unranked})")
                }
            };
            writeln!(out, "full record: {:?} via {witness}", v.disjunct)?;
        }
    }
    if let Some(s) = &r.sweep {
        writeln!(
            out,
            "sub-records: {}  disjunct1 {}  disjunct2 {}  fails (all unranked) {}  fails (other) {}",
            s.sub_records,
            s.disjunct1,
            s.disjunct2,
            s.fails_all_unranked,
            s.fails_other.len()
        )?;
        if let Some(first) = &s.first_all_unranked {
            writeln!(out, "first all-unranked failure: {}", pairs(first))?;
        }
        for failure in &s.fails_other {
            writeln!(out, "failure: {}", pairs(failure))?;
        }
    }
    Ok(())
}

pub fn witness(out: &mut dyn Write, r: &WitnessReport) -> Result<()> {
    writeln!(out, "ballot: {}", r.ballot)?;
    writeln!(out, "dimension: {}", r.witness.dimension)?;
    for (c, p) in &r.witness.points {
        let coords: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        writeln!(
            out,
            "  {c}: ({})  u = {}",
            coords.join(", "),
            r.utility.get(c).expect("every candidate")
        )?;
    }
    writeln!(out, "class: {}", r.class)?;
    match &r.concavity.violation {
        None => writeln!(out, "concavity: passed {} trials", r.concavity.trials)?,
        Some(v) => writeln!(
            out,
            "concavity: FAILED ({:?} at lambda {}: {} vs {})",
            v.kind, v.lambda, v.lhs, v.rhs
        )?,
    }
    Ok(())
}

pub fn tabulation(out: &mut dyn Write, r: &TabulationResult) -> Result<()> {
    for (i, round) in r.rounds.iter().enumerate() {
        let tallies: Vec<String> = round
            .tallies
            .iter()
            .map(|(c, v)| format!("{c}={v}"))
            .collect();
        write!(
            out,
            "round {}: {}  exhausted={}",
            i + 1,
            tallies.join(" "),
            round.exhausted
        )?;
        match &round.eliminated {
            Some(c) => writeln!(out, "  eliminated {c}")?,
            None => writeln!(out)?,
        }
    }
    writeln!(out, "winner: {}", r.winner)
}

pub fn truncation(out: &mut dyn Write, r: &TruncationReport) -> Result<()> {
    for (length, result) in &r.by_length {
        writeln!(
            out,
            "L={length}: winner {} after {} rounds",
            result.winner,
            result.rounds.len()
        )?;
    }
    if r.winner_divergence.is_empty() {
        writeln!(out, "winner divergence: none")
    } else {
        let items: Vec<String> = r
            .winner_divergence
            .iter()
            .map(|[a, b]| format!("L={a}/L={b}"))
            .collect();
        writeln!(out, "winner divergence: {}", items.join(", "))
    }
}
