//! Command-line front end. [`run`] parses arguments, dispatches a subcommand
//! and returns the process exit status:
//!
//! * `0` on success,
//! * `1` on any input, grammar, CSV or cap error (reported as one `error:` line),
//! * `2` when a must-hold claim fails.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use ballot_lattice::claims::{ClaimRegistry, Subject};
use ballot_lattice::election::{load_profile, profile_report, tabulate_irv, truncation_experiment};
use ballot_lattice::representation::{
    concave_witness, pair_record, rationalizability_class, theorem3_check, theorem3_sweep,
    verify_concavity, Disjunct, RationalizabilityClass,
};
use ballot_lattice::{
    default_candidates, enumerate_ballots, exhaustive_verify, parse_ballot, parse_candidate_list,
    Error, RankedBallot,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod report;
mod text;

use report::{AnalyzeReport, Theorem3Report, WitnessReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CLAIM_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ballot-lattice",
    version,
    about = "Lattice analysis of ranked-choice ballots"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify one ballot's order, or summarize every ballot in a profile
    Analyze(AnalyzeArgs),
    /// Check the registered claims on every ballot over n candidates
    Verify {
        #[arg(long)]
        n: usize,
        /// Comma-separated claim ids (default: all)
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
    },
    /// List every ballot over n candidates
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Check the pair-record condition on a ballot
    Theorem3 {
        #[arg(long)]
        ballot: String,
        /// Check only the full pair record (default)
        #[arg(long, conflicts_with = "all_subsets")]
        full: bool,
        /// Also sweep every nonempty sub-record
        #[arg(long)]
        all_subsets: bool,
    },
    /// Build the spatial witness for a ballot and sample its concavity
    Witness {
        #[arg(long)]
        ballot: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Instant-runoff count of a CSV profile
    Tabulate(ProfileArgs),
    /// Re-count a CSV profile at several ballot lengths
    Truncate {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Comma-separated lengths (default: 1 to the number of candidates)
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Ballot in the `x>y>a~b` grammar
    #[arg(long)]
    ballot: Option<String>,
    /// CSV profile with header voter_id,rank1,...
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: Source,
    /// Comma-separated candidate universe
    #[arg(long)]
    candidates: Option<String>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated candidate universe
    #[arg(long)]
    candidates: Option<String>,
}

impl ProfileArgs {
    fn load(&self) -> Result<ballot_lattice::election::ElectionProfile, Error> {
        let universe = self
            .candidates
            .as_deref()
            .map(parse_candidate_list)
            .transpose()?;
        load_profile(&self.input, universe.as_ref())
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let rendered = e.render().to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(err, "error: {}", first.trim_start_matches("error: "));
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        // A reader that closed early (e.g. `| head`) is not an error.
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", single_line(&e.to_string()));
            EXIT_INVALID
        }
    }
}

fn single_line(message: &str) -> String {
    message.lines().collect::<Vec<_>>().join(" ")
}

enum Failure {
    Domain(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Domain(e) => e.fmt(f),
            Failure::Io(e) => write!(f, "writing output: {e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit<T: Serialize>(
    format: Format,
    out: &mut dyn Write,
    value: &T,
    text: impl FnOnce(&mut dyn Write, &T) -> std::io::Result<()>,
) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let json = serde_json::to_string_pretty(value).expect("reports serialize");
            writeln!(out, "{json}")?;
        }
        Format::Text => text(out, value)?,
    }
    Ok(())
}

fn parse(text: &str) -> Result<RankedBallot, Error> {
    parse_ballot(text, None)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Analyze(args) => {
            if let Some(path) = &args.source.input {
                let universe = args
                    .candidates
                    .as_deref()
                    .map(parse_candidate_list)
                    .transpose()?;
                let profile = load_profile(path, universe.as_ref())?;
                let report = profile_report(&profile)?;
                emit(format, out, &report, text::profile)?;
                return Ok(EXIT_OK);
            }
            let ballot_text = args.source.ballot.as_deref().expect("clap group");
            let ballot = match &args.candidates {
                Some(list) => parse_ballot(ballot_text, Some(&parse_candidate_list(list)?))?,
                None => parse(ballot_text)?,
            };
            let report = AnalyzeReport::build(&ballot, &ClaimRegistry::builtin())?;
            emit(format, out, &report, text::analyze)?;
            Ok(if report.must_hold_failed() {
                EXIT_CLAIM_FAILED
            } else {
                EXIT_OK
            })
        }
        Command::Verify { n, claims } => {
            let registry = ClaimRegistry::builtin();
            let selected = registry.select(claims)?;
            let summary = exhaustive_verify(*n, &selected)?;
            emit(format, out, &summary, text::verify)?;
            Ok(if summary.must_hold_failed() {
                EXIT_CLAIM_FAILED
            } else {
                EXIT_OK
            })
        }
        Command::Enumerate { n } => {
            let stream = enumerate_ballots(&default_candidates(*n))?;
            match format {
                Format::Text => {
                    for ballot in stream {
                        writeln!(out, "{ballot}")?;
                    }
                }
                Format::Json => {
                    let ballots: Vec<String> = stream.map(|b| b.to_string()).collect();
                    let value = serde_json::json!({
                        "n": n,
                        "ballot_count": ballots.len(),
                        "ballots": ballots,
                    });
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string_pretty(&value).expect("json")
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Theorem3 {
            ballot,
            all_subsets,
            ..
        } => {
            let ballot = parse(ballot)?;
            let subject = Subject::new(ballot)?;
            let full = if subject.record.is_empty() {
                None
            } else {
                Some(theorem3_check(&subject.ballot, &subject.record)?)
            };
            let sweep = if *all_subsets {
                Some(theorem3_sweep(&subject.ballot, &subject.record, |_, _| {})?)
            } else {
                None
            };
            let report = Theorem3Report {
                ballot: subject.label.clone(),
                record_size: subject.record.len(),
                full,
                sweep,
            };
            emit(format, out, &report, text::theorem3)?;
            let failed = report
                .full
                .as_ref()
                .is_some_and(|v| v.disjunct == Disjunct::Fails)
                || report
                    .sweep
                    .as_ref()
                    .is_some_and(|s| !s.fails_other.is_empty());
            Ok(if failed { EXIT_CLAIM_FAILED } else { EXIT_OK })
        }
        Command::Witness {
            ballot,
            trials,
            seed,
        } => {
            let ballot = parse(ballot)?;
            let witness = concave_witness(&ballot);
            let utility = witness.utility();
            let class = rationalizability_class(&utility, &pair_record(&ballot));
            let concavity = verify_concavity(&witness, *trials, *seed);
            let report = WitnessReport {
                ballot: ballot.to_string(),
                witness,
                utility,
                class,
                concavity,
            };
            emit(format, out, &report, text::witness)?;
            let ok =
                report.concavity.passed && class.satisfies(RationalizabilityClass::AlmostStrict);
            Ok(if ok { EXIT_OK } else { EXIT_CLAIM_FAILED })
        }
        Command::Tabulate(args) => {
            let profile = args.load()?;
            emit(format, out, &tabulate_irv(&profile), text::tabulation)?;
            Ok(EXIT_OK)
        }
        Command::Truncate { profile, lengths } => {
            let profile = profile.load()?;
            let lengths: BTreeSet<usize> = if lengths.is_empty() {
                (1..=profile.candidates().len()).collect()
            } else {
                lengths.iter().copied().collect()
            };
            let report = truncation_experiment(&profile, &lengths)?;
            emit(format, out, &report, text::truncation)?;
            Ok(EXIT_OK)
        }
    }
}
