use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use dilates::search::DEFAULT_BUDGET;
use dilates::{
    affine_rank, check_dist_lemma_all, construct_an, coset_partition, evaluate_bounds, evaluate_bounds_for, is_reduced,
    reduce, search_min, search_min_with_workers, sum_of_dilates_len, verify_construction, BoundReport, PointSet,
    SearchTask,
};

use crate::error::CliError;
use crate::pointfile::{format_points, parse_points};
use crate::report::{digest, ConstructResults, Parameters, ReportDocument, Results, VerifyResults};

pub const BUDGET_ENV: &str = "DILATE_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "dilates", version, about = "Exact sums of dilates A + q·A for finite sets of integer points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Point file; standard input when omitted.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    #[value(name = "AN")]
    An,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print |A|, affine rank, number of occupied cosets and |A + q·A|.
    Compute {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map A to a set whose differences generate Z^d.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Reduced point file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report with the transform and lattice index.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check every lower bound that applies to A; exits 1 if one fails.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a plain table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Write a member of a known family.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        big_n: i64,
        /// Also compute |A + q·A| and check it against the known values.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
        /// Point file; standard output when omitted and no --q is given.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report path when --q is given; standard output when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Minimize |A + q·A| over n-point subsets of {0..grid}^d.
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        grid: i64,
        /// Sample this many random subsets instead of enumerating all.
        #[arg(long, value_name = "COUNT")]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        workers: Option<usize>,
        /// Maximum subsets to examine (overrides DILATE_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Source {
    text: String,
    digest: String,
}

fn read_source(input: &Input) -> Result<Source, CliError> {
    let bytes = match &input.input {
        Some(path) => std::fs::read(path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?,
        None => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(|e| CliError::io("cannot read standard input", e))?;
            buf
        }
    };
    let digest = digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::parse(None, "input is not valid UTF-8".into()))?;
    Ok(Source { text, digest })
}

fn read_points(input: &Input) -> Result<(PointSet, String), CliError> {
    let src = read_source(input)?;
    let parsed = parse_points(&src.text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok((parsed.set, src.digest))
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::io(format!("cannot write {}", p.display()), e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::io("cannot write output", e))
        }
    }
}

pub fn compute_line(a: &PointSet, q: i64) -> Result<String, CliError> {
    let value = sum_of_dilates_len(a, q)?;
    let r = coset_partition(a, q)?.r();
    Ok(format!("|A|={} rank={} r={} |A+qA|={}", a.len(), affine_rank(a)?, r, value))
}

/// Builds the verification report. `computed` replaces the true `|A + q·A|`
/// and exists only to exercise the failure path.
pub fn verify_document(
    a: &PointSet,
    q: i64,
    input_digest: Option<String>,
    computed: Option<usize>,
) -> Result<ReportDocument, CliError> {
    let bounds = match computed {
        Some(c) => evaluate_bounds_for(a, q, c)?,
        None => evaluate_bounds(a, q)?,
    };
    let reduced = bounds.rank == a.dim() && is_reduced(a)?;
    let dist_lemma = if reduced { Some(check_dist_lemma_all(a, q)?) } else { None };
    let failures: Vec<String> = bounds.failures().map(|r| r.name.clone()).collect();
    let witness = (!failures.is_empty()).then(|| a.clone());
    let params = Parameters { q: Some(q), d: Some(a.dim()), n: Some(a.len()), ..Default::default() };
    let results = Results::Verify(VerifyResults { input: a.clone(), bounds, reduced, dist_lemma, failures, witness });
    Ok(ReportDocument::new("verify", input_digest, params, results))
}

fn opt(v: Option<i64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn bounds_table(b: &BoundReport) -> String {
    let mut s = format!("|A|={} d={} rank={} r={} q={} |A+qA|={}\n", b.n, b.d, b.rank, b.r, b.q, b.computed);
    if let Some(l) = b.line_cover {
        writeln!(s, "line cover: {l}").unwrap();
    }
    if let Some(h) = b.hyperplane_cover {
        writeln!(s, "hyperplane cover: {h}").unwrap();
    }
    writeln!(s, "{:<14} {:>6} {:>9} {:>9} {:>7}  hypothesis", "bound", "slope", "required", "slack", "verdict").unwrap();
    for r in &b.rows {
        let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        writeln!(s, "{:<14} {:>6} {:>9} {:>9} {:>7}  {}", r.name, r.slope, opt(r.required), opt(r.slack), verdict, r.hypothesis)
            .unwrap();
    }
    s
}

fn search_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute { input, q, out } => {
            let (a, _) = read_points(&input)?;
            let line = compute_line(&a, q)?;
            write_output(out.as_deref(), &format!("{line}\n"))?;
            Ok(0)
        }
        Command::Reduce { input, out, report } => {
            let (a, digest) = read_points(&input)?;
            let record = reduce(&a)?;
            write_output(out.as_deref(), &format_points(&record.output))?;
            if let Some(path) = report {
                let params = Parameters { d: Some(a.dim()), n: Some(a.len()), ..Default::default() };
                let doc = ReportDocument::new("reduce", Some(digest), params, Results::Reduce(record));
                write_output(Some(&path), &doc.to_json()?)?;
            }
            Ok(0)
        }
        Command::Verify { input, q, out, table } => {
            let (a, digest) = read_points(&input)?;
            let doc = verify_document(&a, q, Some(digest), None)?;
            let Results::Verify(v) = &doc.results else { unreachable!("verify builds verify results") };
            let text = if table { bounds_table(&v.bounds) } else { doc.to_json()? };
            write_output(out.as_deref(), &text)?;
            if v.failures.is_empty() {
                Ok(0)
            } else {
                eprintln!("bound violated: {}", v.failures.join(", "));
                Ok(1)
            }
        }
        Command::Construct { family: Family::An, d, big_n, q, out, report } => {
            let set = construct_an(d, big_n)?;
            match q {
                None => write_output(out.as_deref(), &format_points(&set))?,
                Some(q) => {
                    let record = verify_construction(d, big_n, q)?;
                    if let Some(path) = &out {
                        write_output(Some(path), &format_points(&set))?;
                    }
                    let params = Parameters {
                        q: Some(q),
                        d: Some(d),
                        big_n: Some(big_n),
                        family: Some("AN".into()),
                        ..Default::default()
                    };
                    let doc = ReportDocument::new("construct", None, params, Results::Construct(ConstructResults { set, record }));
                    write_output(report.as_deref(), &doc.to_json()?)?;
                }
            }
            Ok(0)
        }
        Command::Search { d, q, n, grid, random, seed, workers, budget, out } => {
            let budget = search_budget(budget)?;
            let task = match random {
                Some(samples) => SearchTask::random(d, q, n, grid, samples, seed),
                None => SearchTask::exhaustive(d, q, n, grid),
            }
            .with_budget(budget);
            let record = match workers {
                Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
                Some(w) => search_min_with_workers(&task, w)?,
                None => search_min(&task)?,
            };
            let params = Parameters {
                q: Some(q),
                d: Some(d),
                n: Some(n),
                grid: Some(grid),
                samples: random,
                seed: random.map(|_| seed),
                budget: Some(budget),
                ..Default::default()
            };
            let doc = ReportDocument::new("search", None, params, Results::Search(record));
            write_output(out.as_deref(), &doc.to_json()?)?;
            Ok(0)
        }
    }
}
