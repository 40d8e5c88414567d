//! `littlewood` command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails
//! (or the run itself fails), 2 on usage errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::fib::fib_unchecked;
use crate::lemma::{SearchConfig, Strategy};
use crate::nest::{build, verify_certificate, Certificate, DeltaSchedule};
use crate::oracle::{self, MinRecord};
use crate::rat::Rat;
use crate::report::BoundReport;
use crate::surd::{Surd, REPORT_DIGITS};
use crate::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Bound quoted by the earlier construction this one improves on.
pub const PRIOR_BOUND: &str = "0.005326";

#[derive(Parser, Debug)]
#[command(name = "littlewood", version, about = "Fibonacci nested-interval construction and exact checks")]
struct Cli {
    /// Worker threads for the residue scans (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a certificate and verify it.
    Construct {
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        n0: u32,
        #[arg(long, default_value = "pow2")]
        delta: String,
        #[arg(long, default_value = "auto")]
        strategy: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate file.
    VerifyCert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exhaustive minimum of the distance product for one numerator.
    MinScan {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        a: BigUint,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// CSV of the scaled minima for a range of indices.
    LimitTable {
        #[arg(long)]
        n_from: u32,
        #[arg(long)]
        n_to: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-convergent approximation bound.
    Q1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x_max: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Gap between two golden convergents.
    Q2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certified lower bound from a certificate.
    Littlewood {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        proxy: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Star discrepancy of the golden rotation.
    Discrepancy {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        count: u64,
        /// Upper cap on N D* / ln(N+1).
        #[arg(long, default_value = "3")]
        cap: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Parse `args` (including the program name) and run, writing the payload
/// to `out` and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(std::io::stderr(), "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut buf)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(cli.command, &mut buf),
    };
    let result = result.and_then(|pass| {
        out.write_all(&buf)?;
        Ok(pass)
    });
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_)
                | Error::Parse(_)
                | Error::InvalidInterval(_)
                | Error::NotCoprime { .. }
                | Error::ScanCapExceeded { .. }
                | Error::LevelOutOfRange { .. } => EXIT_USAGE,
                _ => EXIT_FAIL,
            }
        }
    }
}

fn emit(out: &mut Vec<u8>, report: &BoundReport, format: Format) -> crate::Result<bool> {
    let body = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json()? + "\n",
        Format::Csv => format!("{}\n{}\n", BoundReport::csv_header(), report.to_csv_row()),
    };
    out.write_all(body.as_bytes())?;
    Ok(report.pass)
}

fn read_cert(path: &PathBuf) -> crate::Result<Certificate> {
    Certificate::from_json(&std::fs::read_to_string(path)?)
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> crate::Result<bool> {
    match command {
        Command::Construct { depth, n0, delta, strategy, out: path } => {
            let schedule: DeltaSchedule = delta.parse()?;
            let cfg = SearchConfig::with_strategy(strategy.parse::<Strategy>()?);
            let cert = build(depth, schedule, n0, &cfg)?;
            let report = verify_certificate(&cert);
            let json = cert.to_json()?;
            match path {
                Some(p) => {
                    std::fs::write(&p, json)?;
                    emit(out, &report, Format::Text)
                }
                None => {
                    out.write_all(json.as_bytes())?;
                    eprint!("{}", report.to_text());
                    Ok(report.pass)
                }
            }
        }
        Command::VerifyCert { input, format } => emit(out, &verify_certificate(&read_cert(&input)?), format),
        Command::MinScan { n, a, format } => {
            let rec = oracle::min_product(n, &a)?;
            let report = oracle::check_q5(n, &a)?;
            if format == Format::Text {
                writeln!(out, "min_product n={} a={}", rec.n, rec.a)?;
                writeln!(out, "  value: {}", rec.value)?;
                writeln!(out, "  x_min: {}", rec.x_min)?;
                writeln!(out, "  scaled: {} ({})", rec.scaled, rec.scaled.to_decimal(REPORT_DIGITS))?;
            }
            emit(out, &report, format)
        }
        Command::LimitTable { n_from, n_to, out: path } => {
            if n_from < 3 || n_from > n_to {
                return Err(Error::InvalidArgument(format!("bad range {n_from}..{n_to}")));
            }
            let records = (n_from..=n_to)
                .map(|n| oracle::min_product(n, &BigUint::from(1u32)))
                .collect::<crate::Result<Vec<_>>>()?;
            let table = limit_table(&records);
            match path {
                Some(p) => std::fs::write(p, table)?,
                None => out.write_all(table.as_bytes())?,
            }
            Ok(true)
        }
        Command::Q1 { n, x_max, format } => emit(out, &oracle::check_q1(n, x_max)?, format),
        Command::Q2 { n, k, format } => {
            let report = oracle::gap_convergents(n, k)?;
            let closed = report.checks.iter().all(|c| c.pass);
            Ok(emit(out, &report, format)? && closed)
        }
        Command::Littlewood { cert, level, proxy, format } => {
            emit(out, &oracle::littlewood_lower_bound(&read_cert(&cert)?, level, proxy)?, format)
        }
        Command::Discrepancy { n, count, cap, format } => {
            let cap: Rat = cap.parse()?;
            emit(out, &oracle::star_discrepancy(n, count)?.report(&cap), format)
        }
    }
}

/// CSV `n,F_n,scaled_min,decimal,pass_strict` with a comparison footer.
pub fn limit_table(records: &[MinRecord]) -> String {
    let constant = Surd::inv_phi_squared();
    let mut s = String::from("n,F_n,scaled_min,decimal,pass_strict\n");
    for r in records {
        let strict = Surd::from(r.scaled.clone()) >= constant;
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.n,
            fib_unchecked(r.n),
            r.scaled,
            r.scaled.to_decimal(REPORT_DIGITS),
            strict
        );
    }
    s.push_str(&limit_table_footer(records));
    s
}

/// `# ...` line contrasting the achieved constants with the prior bound.
pub fn limit_table_footer(records: &[MinRecord]) -> String {
    let lo = records.iter().map(|r| &r.scaled).min();
    let hi = records.iter().map(|r| &r.scaled).max();
    let (lo, hi) = match (lo, hi) {
        (Some(lo), Some(hi)) => (lo.to_decimal(10), hi.to_decimal(10)),
        _ => ("-".into(), "-".into()),
    };
    format!(
        "# achieved F_n*min in [{lo}, {hi}] vs prior bound {PRIOR_BOUND}; theorem constant 2/(3+sqrt5) = {}\n",
        Surd::inv_phi_squared().to_decimal(10)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("littlewood").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn min_scan_text() {
        let (code, out) = run_capture(&["min-scan", "--n", "7", "--a", "1"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("5/13"));
        assert!(out.contains("pass_strict: true"));
    }

    #[test]
    fn min_scan_failing_check_exits_one() {
        let (code, out) = run_capture(&["min-scan", "--n", "6", "--a", "1", "--format", "csv"]);
        assert_eq!(code, EXIT_FAIL);
        assert!(out.starts_with("name,lhs,rhs,slack,pass,decimal,witness\n"));
    }

    #[test]
    fn q2_text() {
        let (code, out) = run_capture(&["q2", "--n", "6", "--k", "5"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("1/40"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["min-scan", "--n", "7"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["min-scan", "--n", "7", "--a", "1", "--bogus", "3"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["min-scan", "--n", "6", "--a", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["construct", "--depth", "1", "--delta", "linear"]).0, EXIT_USAGE);
    }

    #[test]
    fn construct_seed_only() {
        let (code, out) = run_capture(&["construct", "--depth", "0", "--n0", "5", "--delta", "pow2"]);
        assert_eq!(code, EXIT_PASS);
        let cert = Certificate::from_json(&out).unwrap();
        assert_eq!(cert.stages.len(), 1);
    }

    #[test]
    fn threads_do_not_change_output() {
        let a = run_capture(&["--threads", "1", "min-scan", "--n", "18", "--a", "5", "--format", "json"]);
        let b = run_capture(&["--threads", "4", "min-scan", "--n", "18", "--a", "5", "--format", "json"]);
        assert_eq!(a, b);
    }
}
