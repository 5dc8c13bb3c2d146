//! Command-line front end: classify single members, construct the explicit
//! non-standard examples, run censuses, and run the verification suite.
//!
//! Exit codes are stable: 0 success, 1 verification failure, 2 invalid
//! input, 3 resource limit, 4 I/O error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use linkform::classify::{classify, Classification, ClassifyError, Verdict};
use linkform::family::{parse_raw, FamilyParams};
use linkform::search::{
    construct_corollary, corollary_census, distinct_types_report, enumerate, find_m, CensusRow,
    SearchSpec, VerdictFilter, CSV_HEADER,
};
use linkform::verify::run_suite;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "linkform",
    about = "Cohomology order, linking-form residues, and S3-bundle homotopy verdicts \
             for the two-triple family of 2-connected 7-manifolds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum FilterArg {
    #[default]
    All,
    Standard,
    Nonstandard,
}

impl From<FilterArg> for VerdictFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => VerdictFilter::All,
            FilterArg::Standard => VerdictFilter::Standard,
            FilterArg::Nonstandard => VerdictFilter::NonStandard,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify one member given as "a1,a2,a3;b1,b2,b3".
    Classify {
        /// Parameters, e.g. "5,5,-7;5,-7,9" (signed decimals, no spaces).
        params: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Construct and classify the explicit non-standard member for a prime
    /// p ≡ 1 mod 4.
    Construct {
        p: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Enumerate and classify members; write a census.
    Search {
        /// Bound on |entries|.
        #[arg(long, default_value_t = 5)]
        bound: i64,
        /// Pin a1 = b1 = P.
        #[arg(long)]
        pin_p: Option<i64>,
        /// Keep only rows with this verdict.
        #[arg(long, value_enum, default_value_t)]
        filter: FilterArg,
        /// Census the explicit constructions for primes ≡ 1 mod 4 up to N
        /// instead of enumerating (use with --corollary).
        #[arg(long)]
        primes_to: Option<u64>,
        /// Select the construction census (requires --primes-to).
        #[arg(long)]
        corollary: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write rows here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded self-verification suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_INVALID_INPUT, message: message.into() }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        Failure { code: EXIT_RESOURCE, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { code: EXIT_IO, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { params, format } => cmd_classify(&params, format),
        Command::Construct { p, format } => cmd_construct(p, format),
        Command::Search { bound, pin_p, filter, primes_to, corollary, format, out } => {
            cmd_search(bound, pin_p, filter, primes_to, corollary, format, out)
        }
        Command::Verify { seed, samples } => cmd_verify(seed, samples),
    }
}

fn parse_family(input: &str) -> Result<FamilyParams, Failure> {
    let raw = parse_raw(input).map_err(|e| Failure::invalid(e.to_string()))?;
    FamilyParams::validate(raw).map_err(|e| {
        let mut message = String::from("invalid parameters:\n");
        for v in &e.violations {
            let _ = writeln!(message, "  - {v}");
        }
        Failure::invalid(message.trim_end().to_string())
    })
}

fn cmd_classify(params: &str, format: Format) -> Result<(), Failure> {
    let family = parse_family(params)?;
    let classification = classify(&family)?;
    print_classification(&classification, format, None);
    Ok(())
}

fn cmd_construct(p: u64, format: Format) -> Result<(), Failure> {
    let m = find_m(p).map_err(|e| Failure::invalid(e.to_string()))?;
    let family = construct_corollary(p).map_err(|e| Failure::invalid(e.to_string()))?;
    let classification = classify(&family)?;
    debug_assert!(classification.verdict.is_nonstandard());
    print_classification(&classification, format, Some(m));
    Ok(())
}

fn print_classification(c: &Classification, format: Format, m: Option<u64>) {
    match format {
        Format::Table => {
            if let Some(m) = m {
                println!("{:<16}{}", "m", m);
            }
            print!("{}", classification_table(c));
        }
        Format::Json => {
            let mut value = c.to_json();
            if let Some(m) = m {
                value["m"] = serde_json::json!(m);
            }
            println!("{value}");
        }
        Format::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", CensusRow::from_family(&c.params).csv_record());
        }
    }
}

fn classification_table(c: &Classification) -> String {
    let mut out = String::new();
    let row = |out: &mut String, k: &str, v: String| {
        let _ = writeln!(out, "{k:<16}{v}");
    };
    row(&mut out, "family", c.params.to_string());
    row(&mut out, "validation", "ok".into());
    row(&mut out, "a0", c.invariants.a0.to_string());
    row(&mut out, "b0", c.invariants.b0.to_string());
    row(&mut out, "n", c.invariants.n.to_string());
    let h4 = if c.invariants.h4_order == 0 {
        "infinite (Z)".to_string()
    } else {
        c.invariants.h4_order.to_string()
    };
    row(&mut out, "|H4|", h4);
    row(&mut out, "snf", format!("({}, {})", c.snf.0, c.snf.1));
    if let Some(lf) = &c.linking {
        row(&mut out, "rho", lf.rho.to_string());
        row(&mut out, "kappa", lf.kappa.to_string());
        row(
            &mut out,
            "bezout",
            format!("e1={} e0={} f1={} f0={}", lf.cert.e1, lf.cert.e0, lf.cert.f1, lf.cert.f0),
        );
        row(&mut out, "sign", "ambiguous (both orientations checked)".into());
    }
    row(&mut out, "verdict", c.verdict.kind().to_string());
    match &c.verdict {
        Verdict::Standard { sign, lambda } => {
            row(&mut out, "witness", format!("lambda={lambda} with lambda^2 = {sign:+}rho mod |n|"));
        }
        Verdict::NonStandard { obstruction_plus, obstruction_minus } => {
            row(&mut out, "obstruction(+)", obstruction_plus.to_string());
            row(&mut out, "obstruction(-)", obstruction_minus.to_string());
        }
        _ => {}
    }
    if let Some(p) = c.egs_prime() {
        row(&mut out, "egs prime", p.to_string());
    }
    row(&mut out, "conclusion", c.conclusion().to_string());
    out
}

fn cmd_search(
    bound: i64,
    pin_p: Option<i64>,
    filter: FilterArg,
    primes_to: Option<u64>,
    corollary: bool,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let started = Instant::now();
    let rows = if corollary || primes_to.is_some() {
        let limit = primes_to
            .ok_or_else(|| Failure::invalid("--corollary requires --primes-to N"))?;
        corollary_census(limit)
    } else {
        if bound < 1 {
            return Err(Failure::invalid("--bound must be at least 1"));
        }
        let spec = SearchSpec {
            bound,
            pin_p,
            filter: filter.into(),
            require_finite: false,
            h4_range: None,
            dedup: true,
        };
        enumerate(&spec)
    };

    let rendered = render_rows(&rows, format);
    match &out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) })?,
        None => print!("{rendered}"),
    }

    let report = distinct_types_report(&rows);
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{} rows in {:.2}s; {} distinct |H4| orders among nonstandard rows",
        rows.len(),
        started.elapsed().as_secs_f64(),
        report.len()
    );
    for (order, (count, rep)) in &report.orders {
        let _ = writeln!(
            text,
            "  |H4| = {order}: {count} nonstandard row(s), e.g. {},{},{};{},{},{}",
            rep[0], rep[1], rep[2], rep[3], rep[4], rep[5]
        );
    }
    // Rows on stdout push the summary to stderr to keep the census clean.
    if out.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
    Ok(())
}

fn render_rows(rows: &[CensusRow], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(out, "{CSV_HEADER}");
            for row in rows {
                let _ = writeln!(out, "{}", row.csv_record());
            }
        }
        Format::Json => {
            for row in rows {
                let _ = writeln!(out, "{}", serde_json::to_string(row).expect("rows serialize"));
            }
        }
        Format::Table => {
            let _ = writeln!(
                out,
                "{:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>12} {:>10} {:>10} {:>10} {:<17} {:>9}",
                "a1", "a2", "a3", "b1", "b2", "b3", "n", "|H4|", "rho", "kappa", "verdict", "egs_p"
            );
            for r in rows {
                let opt = |v: Option<u64>| v.map_or(String::from("-"), |x| x.to_string());
                let _ = writeln!(
                    out,
                    "{:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>12} {:>10} {:>10} {:>10} {:<17} {:>9}",
                    r.a1,
                    r.a2,
                    r.a3,
                    r.b1,
                    r.b2,
                    r.b3,
                    r.n,
                    r.h4_order,
                    opt(r.rho),
                    opt(r.kappa),
                    r.verdict.label(),
                    opt(r.egs_prime)
                );
            }
        }
    }
    out
}

fn cmd_verify(seed: u64, samples: usize) -> Result<(), Failure> {
    if samples == 0 {
        return Err(Failure::invalid("--samples must be at least 1"));
    }
    let started = Instant::now();
    let report = run_suite(seed, samples);
    println!("verification suite: seed={} samples={}", report.seed, report.samples);
    for check in &report.checks {
        if check.passed() {
            println!("  PASS {} ({} cases)", check.name, check.cases);
        } else {
            println!(
                "  FAIL {} ({}/{} cases failed, counterexample: {})",
                check.name,
                check.failures,
                check.cases,
                check.counterexample.as_deref().unwrap_or("n/a")
            );
        }
    }
    println!("finished in {:.2}s", started.elapsed().as_secs_f64());
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY_FAILED, message: "verification suite failed".into() })
    }
}
