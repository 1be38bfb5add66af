//! `opart` — build exact overpartition count tables, evaluate the explicit
//! series, reproduce the bound constants, and run certified verification
//! suites.
//!
//! Exit codes follow the verification contract: 0 when every checked index
//! certifiably holds, 1 when any index certifiably fails, 2 when the only
//! non-holding indices are undecided at the precision cap, 64 for usage
//! errors, 65 for malformed table data, 70 for internal inconsistencies,
//! and 74 for I/O failures.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use opart_core::counts::CountError;
use opart_core::{
    build_table, certified_compare, constants_for, convergence_probe, set_worker_threads,
    truncated_series, truncation_error_bound, verify_corollaries, verify_lemmas, verify_main1,
    verify_main2, CertifiedOrder, ConstantsError, DifferenceError, FormulaError, Interval,
    OverpartitionTable, PrecisionPolicy, SeriesParams, VerificationReport, VerifierError,
};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FAILS: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_TABLE_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "opart",
    version,
    about = "Certified computation and verification for overpartition counts",
    after_help = "Exit codes: 0 all checks hold; 1 some check certifiably fails; \
2 undecided checks only; 64 usage; 65 malformed table; 70 internal inconsistency; 74 I/O.\n\
Environment: OPART_PRECISION_BITS sets the base interval precision (the --precision-bits flag wins)."
)]
struct Cli {
    /// Base interval precision in bits (≥ 8; overrides OPART_PRECISION_BITS).
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Hard cap for precision escalation in bits (≥ base precision).
    #[arg(long, global = true)]
    max_precision_bits: Option<u32>,
    /// Worker threads for parallel suites (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the exact count table up to an index and write it as CSV.
    Compute {
        /// Largest index to tabulate.
        #[arg(long)]
        max_n: u64,
        /// Destination CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the truncated explicit series at one index, with the
    /// certified truncation bound (and the containment verdict when an
    /// exact table is supplied).
    Zuckerman {
        /// Index to evaluate at.
        #[arg(long)]
        n: u64,
        /// Truncation level: odd moduli up to this value enter the sum.
        #[arg(long)]
        terms: u64,
        /// Optional exact count table for the containment check.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Print the constant family (C, C₁, C₂, N₁, N₂, N₃, N) for one order,
    /// or for every order in --r ..= --r-max.
    Constants {
        /// Difference order (≥ 2).
        #[arg(long)]
        r: u32,
        /// Upper end of an inclusive order range.
        #[arg(long)]
        r_max: Option<u32>,
    },
    /// Run a certified verification suite over an index range.
    Verify {
        /// Which claim family to verify.
        #[arg(value_enum)]
        suite: Suite,
        /// Difference order: required meaning depends on the suite
        /// (main2: the order, default 2; lemmas: the maximal order,
        /// default 4; main1/corollaries: not accepted).
        #[arg(long)]
        r: Option<u32>,
        /// Exact count table produced by `opart compute`.
        #[arg(long)]
        table: PathBuf,
        /// First index to check.
        #[arg(long)]
        from: u64,
        /// Last index to check (inclusive).
        #[arg(long)]
        to: u64,
        /// Report rendering.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sample the scaled signed difference at chosen indices and certify it
    /// against the theorem-implied envelope.
    Probe {
        /// Difference order (≥ 1).
        #[arg(long)]
        r: u32,
        /// Comma-separated sample indices.
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<u64>,
        /// Exact count table produced by `opart compute`.
        #[arg(long)]
        table: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Main1,
    Main2,
    Corollaries,
    Lemmas,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    TableData(String),
    #[error("{0}")]
    Internal(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::TableData(_) => EXIT_TABLE_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let policy = build_policy(&cli)?;
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        set_worker_threads(threads)
            .map_err(|err| CliError::Internal(format!("thread pool: {err}")))?;
    }
    match cli.command {
        Command::Compute { max_n, out } => run_compute(max_n, &out),
        Command::Zuckerman { n, terms, table } => {
            run_zuckerman(n, terms, table.as_deref(), &policy)
        }
        Command::Constants { r, r_max } => run_constants(r, r_max, &policy),
        Command::Verify {
            suite,
            r,
            table,
            from,
            to,
            format,
        } => run_verify(suite, r, &table, (from, to), format, &policy),
        Command::Probe { r, points, table } => run_probe(r, &points, &table, &policy),
    }
}

fn build_policy(cli: &Cli) -> Result<PrecisionPolicy, CliError> {
    let mut policy = PrecisionPolicy::default();
    let env_bits = match std::env::var("OPART_PRECISION_BITS") {
        Ok(raw) => Some(raw.parse::<u32>().map_err(|_| {
            CliError::Usage(format!(
                "OPART_PRECISION_BITS must be an unsigned integer, got '{raw}'"
            ))
        })?),
        Err(_) => None,
    };
    if let Some(bits) = cli.precision_bits.or(env_bits) {
        if bits < 8 {
            return Err(CliError::Usage(
                "base precision must be at least 8 bits".into(),
            ));
        }
        policy.base_bits = bits;
    }
    if let Some(max_bits) = cli.max_precision_bits {
        if max_bits < policy.base_bits {
            return Err(CliError::Usage(format!(
                "--max-precision-bits {max_bits} is below the base precision {}",
                policy.base_bits
            )));
        }
        policy.max_bits = max_bits;
    }
    Ok(policy)
}

fn run_compute(max_n: u64, out: &Path) -> Result<u8, CliError> {
    let table = build_table(max_n).map_err(|err| map_count_error(err, out))?;
    let file = File::create(out)
        .map_err(|err| CliError::Io(format!("cannot write '{}': {err}", out.display())))?;
    table
        .save(BufWriter::new(file))
        .map_err(|err| map_count_error(err, out))?;
    println!(
        "wrote overpartition counts for 0..={} to {}",
        max_n,
        out.display()
    );
    Ok(0)
}

fn run_zuckerman(
    n: u64,
    terms: u64,
    table_path: Option<&Path>,
    policy: &PrecisionPolicy,
) -> Result<u8, CliError> {
    let table = table_path.map(load_table).transpose()?;
    if let Some(table) = &table {
        if n > table.max_n() {
            return Err(CliError::Usage(format!(
                "index {n} exceeds the table maximum {}",
                table.max_n()
            )));
        }
    }
    let mut bits = policy.working_bits(n, 1);
    let mut series = evaluate_series(n, terms, bits)?;
    let mut bound = truncation_error_bound(n, terms, bits).map_err(map_formula_error)?;
    let mut containment = None;
    if let Some(table) = &table {
        let exact = table.count(n).expect("bounds checked");
        for ladder_bits in policy.ladder(policy.working_bits(n, 1)) {
            bits = ladder_bits;
            series = evaluate_series(n, terms, bits)?;
            bound = truncation_error_bound(n, terms, bits).map_err(map_formula_error)?;
            let error = Interval::from_integer(exact, bits).sub(&series).abs();
            match certified_compare(&error, &bound) {
                CertifiedOrder::Less => {
                    containment = Some("holds");
                    break;
                }
                CertifiedOrder::Greater => {
                    containment = Some("fails");
                    break;
                }
                CertifiedOrder::Undecided => continue,
            }
        }
    }
    let mut report = serde_json::json!({
        "n": n,
        "terms": terms,
        "precision_bits": bits,
        "series": { "lo": series.lo_string(30), "hi": series.hi_string(30) },
        "truncation_bound": bound.hi_string(30),
    });
    if let Some(table) = &table {
        report["exact"] = table.count(n).expect("bounds checked").to_string().into();
        report["containment"] = containment.unwrap_or("undecided").into();
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(match containment {
        None | Some("holds") => 0,
        Some("fails") => EXIT_FAILS,
        Some(_) => EXIT_UNDECIDED,
    })
}

fn evaluate_series(n: u64, terms: u64, bits: u32) -> Result<Interval, CliError> {
    let params = SeriesParams::new(n, terms, bits).map_err(map_formula_error)?;
    truncated_series(&params).map_err(map_formula_error)
}

fn run_constants(r: u32, r_max: Option<u32>, policy: &PrecisionPolicy) -> Result<u8, CliError> {
    let hi = r_max.unwrap_or(r);
    if hi < r {
        return Err(CliError::Usage(format!("--r-max {hi} is below --r {r}")));
    }
    let sets = (r..=hi)
        .map(|order| constants_for(order, policy))
        .collect::<Result<Vec<_>, _>>()
        .map_err(map_constants_error)?;
    let rendered = if r_max.is_some() {
        serde_json::to_string_pretty(&sets)
    } else {
        serde_json::to_string_pretty(&sets[0])
    }
    .expect("json");
    println!("{rendered}");
    Ok(0)
}

fn run_verify(
    suite: Suite,
    r: Option<u32>,
    table_path: &Path,
    range: (u64, u64),
    format: Format,
    policy: &PrecisionPolicy,
) -> Result<u8, CliError> {
    if range.0 > range.1 {
        return Err(CliError::Usage(format!(
            "--from {} exceeds --to {}",
            range.0, range.1
        )));
    }
    let table = load_table(table_path)?;
    let reports = match suite {
        Suite::Main1 => {
            if !matches!(r, None | Some(1)) {
                return Err(CliError::Usage(
                    "suite main1 is first-order; omit --r".into(),
                ));
            }
            verify_main1(range, &table, policy).map_err(map_verifier_error)?
        }
        Suite::Main2 => {
            let r = r.unwrap_or(2);
            if r < 2 {
                return Err(CliError::Usage("suite main2 needs --r at least 2".into()));
            }
            let constants = constants_for(r, policy).map_err(map_constants_error)?;
            verify_main2(r, range, &table, &constants, policy).map_err(map_verifier_error)?
        }
        Suite::Corollaries => {
            if r.is_some() {
                return Err(CliError::Usage(
                    "suite corollaries checks fixed orders; omit --r".into(),
                ));
            }
            verify_corollaries(range, &table, policy).map_err(map_verifier_error)?
        }
        Suite::Lemmas => {
            let r_max = r.unwrap_or(4);
            if r_max == 0 {
                return Err(CliError::Usage("suite lemmas needs --r at least 1".into()));
            }
            verify_lemmas(r_max, range, &table, policy).map_err(map_verifier_error)?
        }
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports).expect("json")),
        Format::Csv => print!("{}", render_csv(&reports)),
        Format::Text => print!("{}", render_text(&reports)),
    }
    Ok(exit_for_reports(&reports))
}

fn run_probe(
    r: u32,
    points: &[u64],
    table_path: &Path,
    policy: &PrecisionPolicy,
) -> Result<u8, CliError> {
    if r == 0 {
        return Err(CliError::Usage("--r must be at least 1".into()));
    }
    let table = load_table(table_path)?;
    let report = convergence_probe(r, points, &table, policy).map_err(map_verifier_error)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    let mut fails = false;
    let mut undecided = false;
    for point in &report.points {
        match point.inside {
            opart_core::VerificationStatus::Holds => {}
            opart_core::VerificationStatus::Fails => fails = true,
            opart_core::VerificationStatus::Undecided => undecided = true,
        }
    }
    Ok(if fails {
        EXIT_FAILS
    } else if undecided {
        EXIT_UNDECIDED
    } else {
        0
    })
}

/// Worst-status exit code over a set of reports: failures dominate,
/// undecided comes next, all-holds is success.
fn exit_for_reports(reports: &[VerificationReport]) -> u8 {
    if reports.iter().any(|r| !r.fails.is_empty()) {
        EXIT_FAILS
    } else if reports.iter().any(|r| !r.undecided.is_empty()) {
        EXIT_UNDECIDED
    } else {
        0
    }
}

fn load_table(path: &Path) -> Result<OverpartitionTable, CliError> {
    let file = File::open(path).map_err(|err| {
        if err.kind() == std::io::ErrorKind::NotFound {
            CliError::Io(format!(
                "table file '{}' not found; generate it with `opart compute --max-n N --out {}`",
                path.display(),
                path.display()
            ))
        } else {
            CliError::Io(format!("cannot read '{}': {err}", path.display()))
        }
    })?;
    OverpartitionTable::load(BufReader::new(file)).map_err(|err| map_count_error(err, path))
}

fn render_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for report in reports {
        let order = report.r.map(|r| format!(" (r={r})")).unwrap_or_default();
        writeln!(
            out,
            "{}{} over [{}, {}]: {} hold, {} fail, {} undecided; base {} bits; {:.3} s",
            report.claim_id,
            order,
            report.range[0],
            report.range[1],
            report.holds,
            report.fails.len(),
            report.undecided.len(),
            report.precision_base_bits,
            report.wall_time_s
        )
        .expect("string write");
        if !report.fails.is_empty() {
            writeln!(out, "  fails at: {}", preview(&report.fails)).expect("string write");
        }
        if !report.undecided.is_empty() {
            writeln!(out, "  undecided at: {}", preview(&report.undecided)).expect("string write");
        }
        if !report.exact_equalities.is_empty() {
            writeln!(
                out,
                "  exact equalities at: {}",
                preview(&report.exact_equalities)
            )
            .expect("string write");
        }
    }
    out
}

fn preview(indices: &[u64]) -> String {
    const LIMIT: usize = 12;
    let head: Vec<String> = indices.iter().take(LIMIT).map(u64::to_string).collect();
    if indices.len() > LIMIT {
        format!("{} … ({} more)", head.join(", "), indices.len() - LIMIT)
    } else {
        head.join(", ")
    }
}

fn render_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(
        "claim_id,r,range_lo,range_hi,holds,fails,undecided,exact_equalities,precision_base_bits,wall_time_s\n",
    );
    let join = |list: &[u64]| {
        list.iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";")
    };
    for report in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.6}",
            report.claim_id,
            report.r.map(|r| r.to_string()).unwrap_or_default(),
            report.range[0],
            report.range[1],
            report.holds,
            join(&report.fails),
            join(&report.undecided),
            join(&report.exact_equalities),
            report.precision_base_bits,
            report.wall_time_s
        )
        .expect("string write");
    }
    out
}

fn map_count_error(err: CountError, path: &Path) -> CliError {
    match err {
        CountError::Io(io) => CliError::Io(format!("table '{}': {io}", path.display())),
        CountError::OracleRange { .. } => CliError::Usage(err.to_string()),
        CountError::ResourceExhausted { .. } => CliError::Internal(err.to_string()),
        other => CliError::TableData(format!("table '{}': {other}", path.display())),
    }
}

fn map_formula_error(err: FormulaError) -> CliError {
    match err {
        FormulaError::BadParameters { .. }
        | FormulaError::BadModulus(_)
        | FormulaError::NotCoprime { .. }
        | FormulaError::PhaseOutOfRange { .. }
        | FormulaError::BeyondTable { .. } => CliError::Usage(err.to_string()),
        FormulaError::ImaginaryResidual { .. } | FormulaError::Interval(_) => {
            CliError::Internal(err.to_string())
        }
    }
}

fn map_constants_error(err: ConstantsError) -> CliError {
    match err {
        ConstantsError::BadOrder(_) | ConstantsError::BadThresholdOrder(_) => {
            CliError::Usage(err.to_string())
        }
        ConstantsError::ThresholdOverflow(_) | ConstantsError::Interval(_) => {
            CliError::Internal(err.to_string())
        }
    }
}

fn map_verifier_error(err: VerifierError) -> CliError {
    match err {
        VerifierError::EmptyRange { .. } | VerifierError::RangeBeyondTable { .. } => {
            CliError::Usage(format!(
                "{err}; rebuild the table with a larger --max-n if the range is intended"
            ))
        }
        VerifierError::NoProbePoints => CliError::Usage(err.to_string()),
        VerifierError::Difference(inner) => match inner {
            DifferenceError::BadOrder(_)
            | DifferenceError::BadIndex(_)
            | DifferenceError::TableTooShort { .. } => CliError::Usage(inner.to_string()),
            other => CliError::Internal(other.to_string()),
        },
        VerifierError::OrderMismatch { .. }
        | VerifierError::Constants(_)
        | VerifierError::Formula(_)
        | VerifierError::Interval(_) => CliError::Internal(err.to_string()),
    }
}
