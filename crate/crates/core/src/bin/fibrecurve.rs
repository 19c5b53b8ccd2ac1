use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use fibrecurve::field::is_prime;
use fibrecurve::fixtures::load_fixtures;
use fibrecurve::search::SearchConfigFile;
use fibrecurve::{
    bundled_fixtures, full_report, hws_bound, ingest_records, run_search, throughput_probe,
    verify_all, CurveSystem, Error, FieldSpec, Poly, SearchConfig, Strategy,
};

/// Genus and point counts of fibre products y_i^2 = f_i(x) over finite fields.
#[derive(Parser)]
#[command(name = "fibrecurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full report for one system as JSON.
    Count {
        /// Field: `p`, `p^n` or `p^n:c0,..,cn`.
        #[arg(long)]
        field: String,
        /// Ascending coefficients of one f_i; repeat for each polynomial.
        #[arg(long = "poly", required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
    },
    /// Recompute the bundled (or given) example fixtures.
    VerifyPaper {
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Search for systems with many points; JSON lines on stdout.
    Search(SearchArgs),
    /// Print the candidate evaluation rate.
    Probe {
        #[arg(long)]
        field: String,
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print q + 1 + g*floor(2*sqrt(q)).
    Bound {
        #[arg(long)]
        q: String,
        #[arg(long)]
        genus: u64,
    },
}

#[derive(Args)]
struct SearchArgs {
    /// JSON config file; replaces every other search flag.
    #[arg(long, conflicts_with_all = ["field", "degrees", "strategy", "budget", "seed",
        "lc_classes", "no_normalize", "top", "patience", "exhaustive_cap"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    field: Option<String>,
    #[arg(long, value_delimiter = ',', required_unless_present = "config")]
    degrees: Vec<usize>,
    #[arg(long, default_value = "random")]
    strategy: String,
    /// Candidates to draw; exhaustive defaults to the whole space.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Let leading coefficients range over {1, a non-square}.
    #[arg(long)]
    lc_classes: bool,
    /// Keep f_1's second coefficient unrestricted.
    #[arg(long)]
    no_normalize: bool,
    #[arg(long, default_value_t = fibrecurve::search::DEFAULT_TOP)]
    top: usize,
    #[arg(long, default_value_t = fibrecurve::search::DEFAULT_PATIENCE)]
    patience: u64,
    #[arg(long, default_value_t = fibrecurve::search::DEFAULT_EXHAUSTIVE_CAP)]
    exhaustive_cap: u64,
    /// Known-bounds CSV (`g,q,lower,upper,source`).
    #[arg(long)]
    records: Option<PathBuf>,
}

fn parse_field(text: &str) -> Result<FieldSpec, Error> {
    Ok(text.parse::<FieldSpec>()?)
}

/// A field spec or a bare prime power such as `25`.
fn parse_q(text: &str) -> Result<u64, Error> {
    if let Ok(spec) = text.parse::<FieldSpec>() {
        return Ok(spec.q());
    }
    let q: u64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("cannot parse q `{text}`")))?;
    let p = (2..=q)
        .take_while(|d| d * d <= q)
        .find(|d| q.is_multiple_of(*d))
        .unwrap_or(q);
    let mut rest = q;
    while q >= 2 && rest.is_multiple_of(p) {
        rest /= p;
    }
    if q < 2 || rest != 1 || !is_prime(p) {
        return Err(Error::Usage(format!("{q} is not a prime power")));
    }
    Ok(q)
}

fn search_config(args: &SearchArgs) -> Result<SearchConfig, Error> {
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
        let file: SearchConfigFile = serde_json::from_str(&text)
            .map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
        return Ok(file.into_config()?);
    }
    let field = parse_field(args.field.as_deref().expect("required by clap"))?;
    let strategy: Strategy = args.strategy.parse()?;
    let mut cfg = SearchConfig::new(field, args.degrees.clone());
    cfg.strategy = strategy;
    cfg.budget = match (args.budget, strategy) {
        (Some(b), _) => b,
        (None, Strategy::Exhaustive) => u64::MAX,
        (None, _) => cfg.budget,
    };
    cfg.seed = args.seed;
    cfg.monic_only = !args.lc_classes;
    cfg.normalize = !args.no_normalize;
    cfg.top = args.top;
    cfg.patience = args.patience;
    cfg.exhaustive_cap = args.exhaustive_cap;
    Ok(cfg)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Count { field, polys } => {
            let spec = parse_field(&field)?;
            let polys = polys
                .iter()
                .map(|s| Poly::parse(&spec, s))
                .collect::<Result<Vec<_>, _>>()?;
            let sys = CurveSystem::new(&spec, polys)?;
            writeln!(out, "{}", to_json(&full_report(&sys)?)).ok();
        }
        Command::VerifyPaper { fixtures, json } => {
            let rows = match fixtures {
                Some(path) => load_fixtures(path)?,
                None => bundled_fixtures(),
            };
            let report = verify_all(&rows)?;
            if json {
                writeln!(out, "{}", to_json(&report)).ok();
            } else {
                write!(out, "{}", report.render()).ok();
            }
            if !report.passed() {
                let failed = report.failed_labels();
                return Err(Error::Validation(format!(
                    "{} consistent row(s) did not reproduce: {}",
                    failed.len(),
                    failed.join(", ")
                )));
            }
        }
        Command::Search(args) => {
            let cfg = search_config(&args)?;
            let table = args.records.as_ref().map(ingest_records).transpose()?;
            let start = Instant::now();
            let mut outcome = run_search(&cfg)?;
            let seconds = start.elapsed().as_secs_f64();
            for entry in &mut outcome.entries {
                if let Some(t) = &table {
                    entry.annotate(t);
                }
                writeln!(out, "{}", to_json(entry)).ok();
            }
            writeln!(out, "{}", to_json(&json!({ "summary": outcome.stats }))).ok();
            let drawn = outcome.stats.evaluated + outcome.stats.skipped;
            eprintln!(
                "{}",
                json!({ "wall_seconds": seconds, "throughput": drawn as f64 / seconds.max(1e-9) })
            );
        }
        Command::Probe { field, degrees, budget, seed } => {
            let mut cfg = SearchConfig::new(parse_field(&field)?, degrees);
            cfg.budget = budget;
            cfg.seed = seed;
            writeln!(out, "{}", to_json(&throughput_probe(&cfg)?)).ok();
        }
        Command::Bound { q, genus } => {
            writeln!(out, "{}", hws_bound(parse_q(&q)?, genus)).ok();
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("usage error").trim();
            eprintln!("{}", line);
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = e.to_string();
            let one_line: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
            eprintln!("error: {}", one_line.join(" "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
