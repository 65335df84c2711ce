//! Command-line surface.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage error,
//! 3 I/O failure, 4 expansion budget exceeded.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigUint, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::coeff::Sign;
use crate::density::{
    alpha_direct_upto, alpha_recurrence, char_roots, density, growth_report, render_decimal,
    DensityError, DECIMAL_PLACES,
};
use crate::engine::{classify, coefficient, coefficient_u64, trace, StepCase};
use crate::expand::{expand, Budget, ExpandError};
use crate::fib::{fib, locate, NaturalIndex};
use crate::format::{self, Format};
use crate::oracle::{
    product_expand_oracle, OracleError, PartitionOracle, DEFAULT_ENUMERATION_LIMIT,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub const DEFAULT_SEED: u64 = 0x5eed_f1b0;

#[derive(Parser, Debug)]
#[command(
    name = "fibseries",
    version,
    about = "Coefficients of prod_{k>=2} (1 - x^F_k)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a(M) for a decimal position of any length.
    Coeff {
        m: String,
        /// Print one reduction step per line: case, n, next position, sign.
        #[arg(long)]
        steps: bool,
    },
    /// Write a(0..=N).
    Expand {
        n: String,
        #[arg(long, value_enum)]
        format: FormatArg,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check engine, expansion, oracles and bijections on 0..=N.
    Verify {
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        enumerate_limit: u64,
        /// Seed for the sampled identity checks at large interval indices.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Non-zero counts, densities and growth ratios up to NMAX.
    Stats {
        n_max: usize,
        #[arg(long, value_enum, default_value_t = StatsFormat::Table)]
        format: StatsFormat,
    },
    /// Dominant root of x^4 - x^3 - 2 by bisection.
    Roots {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Bfile,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Bfile => Format::BFile,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Table,
    Json,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Coeff { m, steps } => cmd_coeff(&m, steps, out),
        Command::Expand {
            n,
            format,
            out: path,
        } => cmd_expand(&n, format.into(), path, out),
        Command::Verify {
            n,
            enumerate_limit,
            seed,
            samples,
        } => cmd_verify(n, enumerate_limit, seed, samples, out),
        Command::Stats { n_max, format } => cmd_stats(n_max, format, out),
        Command::Roots { tol } => cmd_roots(tol, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Budget(#[from] ExpandError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<DensityError> for CliError {
    fn from(e: DensityError) -> Self {
        match e {
            DensityError::Expand(e) => CliError::Budget(e),
            DensityError::IndexTooLarge { n } => CliError::Budget(ExpandError::BudgetExceeded {
                requested: n,
                budget: Budget::from_env().max_coeffs,
            }),
            DensityError::InvalidTolerance(_) => CliError::Usage(e.to_string()),
        }
    }
}

fn parse_position(s: &str) -> Result<NaturalIndex, CliError> {
    s.parse()
        .map_err(|e| CliError::Usage(format!("invalid position {s:?}: {e}")))
}

pub fn cmd_coeff(m: &str, show_steps: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let m = parse_position(m)?;
    if show_steps {
        for step in trace(&m) {
            writeln!(out, "{step}")?;
        }
    }
    writeln!(out, "{}", coefficient(&m))?;
    Ok(EXIT_OK)
}

pub fn cmd_expand(
    n: &str,
    format: Format,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let n = parse_position(n)?;
    let budget = Budget::from_env();
    let last = n.to_usize().ok_or(ExpandError::BudgetExceeded {
        requested: usize::MAX,
        budget: budget.max_coeffs,
    })?;
    let arr = expand(last)?;
    match path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            format::write(&arr, format, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(out);
            format::write(&arr, format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Default)]
struct Check {
    name: &'static str,
    passed: u64,
    failed: u64,
    skipped: u64,
    failures: Vec<String>,
}

impl Check {
    const MAX_REPORTED: usize = 10;

    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < Self::MAX_REPORTED {
                self.failures.push(detail());
            }
        }
    }

    fn record_oracle<T>(&mut self, m: u64, result: Result<T, OracleError>) {
        match result {
            Ok(_) => self.passed += 1,
            Err(e) if e.is_falsification() => self.record(false, || format!("m={m}: {e}")),
            Err(_) => self.skipped += 1,
        }
    }
}

pub fn cmd_verify(
    n: usize,
    enumerate_limit: u64,
    seed: u64,
    samples: usize,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let arr = expand(n)?;
    let product = product_expand_oracle(n);

    let mut engine = Check::new("engine-vs-expansion");
    for (m, &c) in arr.iter().enumerate() {
        let got = coefficient_u64(m as u64);
        engine.record(got == c, || format!("m={m}: engine {got}, expansion {c}"));
    }

    let mut oracle = Check::new("product-oracle");
    match &product {
        Ok(p) => {
            for (m, (&a, &b)) in arr.iter().zip(p.iter()).enumerate() {
                oracle.record(a == b, || format!("m={m}: expansion {a}, product {b}"));
            }
        }
        Err(e) => oracle.record(false, || e.to_string()),
    }

    let partitions = PartitionOracle::with_limit(enumerate_limit);
    let top = (n as u64).min(enumerate_limit);
    let mut tally = Check::new("tally");
    let mut mid = Check::new("mid-pairing");
    let mut shift = Check::new("shift-bijection");
    let mut complement = Check::new("complement-bijection");
    for m in 0..=top {
        match partitions.tally(m) {
            Ok(t) => {
                let c = arr[m as usize];
                tally.record(t.difference() == c.value() as i64, || {
                    format!("m={m}: r_E - r_O = {}, coefficient {c}", t.difference())
                });
            }
            Err(_) => tally.skipped += 1,
        }
        match classify(&NaturalIndex::from(m)).case() {
            StepCase::Mid => mid.record_oracle(m, partitions.verify_mid_pairing(m)),
            StepCase::High => shift.record_oracle(m, partitions.verify_shift_bijection(m)),
            StepCase::Low => complement.record_oracle(m, partitions.verify_complement_bijection(m)),
            StepCase::Base => {}
        }
    }

    let sampled = sampled_identities(seed, samples);

    writeln!(
        out,
        "verify 0..={n} enumerate-limit={enumerate_limit} seed={seed}"
    )?;
    let checks = [engine, oracle, tally, mid, shift, complement, sampled];
    let mut all_ok = true;
    for c in &checks {
        writeln!(
            out,
            "{}: {} passed, {} failed, {} skipped",
            c.name, c.passed, c.failed, c.skipped
        )?;
        for f in &c.failures {
            writeln!(out, "  FAIL {}: {f}", c.name)?;
        }
        all_ok &= c.failed == 0;
    }
    writeln!(out, "result: {}", if all_ok { "pass" } else { "FAIL" })?;
    Ok(if all_ok { EXIT_OK } else { EXIT_FALSIFIED })
}

/// Zero band, reflection and shift identities at random positions of
/// intervals far beyond any dense expansion.
fn sampled_identities(seed: u64, samples: usize) -> Check {
    let mut check = Check::new("sampled-identities");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigUint::from(1u32);
    for _ in 0..samples {
        let n: usize = rng.gen_range(30..=200);
        let f_n = fib(n).into_biguint();
        let f_n2 = fib(n - 2).into_biguint();
        let f_n3 = fib(n - 3).into_biguint();
        let f_n4 = fib(n - 4).into_biguint();
        let sign = Sign::power_of_minus_one(n - 1);

        let j = rng.gen_biguint_below(&(&f_n4 + &one));
        let m = NaturalIndex::from(&f_n + &f_n3 - 1u32 + &j);
        let c = coefficient(&m);
        check.record(c.is_zero(), || format!("zero band n={n} m={m}: {c}"));

        let j = rng.gen_biguint_below(&(&f_n3 - &one));
        let m = NaturalIndex::from(&f_n + &j);
        let mirror = NaturalIndex::from(&f_n3 - 2u32 - &j);
        let (a, b) = (coefficient(&m), coefficient(&mirror));
        check.record(a == sign * b, || {
            format!("reflection n={n} m={m}: {a} vs {b}")
        });

        let j = NaturalIndex::from(rng.gen_biguint_below(&f_n3));
        let m = NaturalIndex::from(&f_n + &f_n2 + j.as_biguint());
        let (a, b) = (coefficient(&m), coefficient(&j));
        check.record(a == b, || format!("shift n={n} m={m}: {a} vs {b}"));

        let steps = trace(&m).len();
        let bound = locate(&m).expect("m >= F_30");
        check.record(steps <= bound, || {
            format!("trace n={n}: {steps} steps > {bound}")
        });
    }
    check
}

pub fn cmd_stats(n_max: usize, format: StatsFormat, out: &mut dyn Write) -> Result<i32, CliError> {
    if n_max < 5 {
        return Err(CliError::Usage(format!(
            "NMAX must be at least 5, got {n_max}"
        )));
    }
    let budget = Budget::from_env();
    let direct_max = (2..=n_max)
        .take_while(|&n| fib(n).to_usize().is_some_and(|f| f <= budget.max_coeffs))
        .last()
        .unwrap_or(2);
    let direct = alpha_direct_upto(direct_max)?;
    let series = alpha_recurrence(n_max);
    let growth = growth_report(n_max);
    let roots = char_roots(1e-12)?;

    let alpha = |n: usize| series.get(n).cloned().expect("series covers n_max");
    let mut all_ok = true;
    let mut rows = Vec::new();
    for (row, n) in growth.iter().zip(2..=n_max) {
        let report = density(n);
        let direct_n = direct.get(n - 2).copied();
        let recurrence_ok = n < 6 || alpha(n) + 1u32 == alpha(n - 1) + alpha(n - 4) * 2u32;
        let direct_ok = direct_n.is_none_or(|d| BigUint::from(d) == report.alpha);
        all_ok &= recurrence_ok && direct_ok;
        rows.push((n, report, direct_n, recurrence_ok && direct_ok, row));
    }

    let dec = |r| render_decimal(r, DECIMAL_PLACES);
    match format {
        StatsFormat::Table => {
            writeln!(
                out,
                "n\tF_n\talpha\talpha_direct\tp\tp_decimal\tcheck\talpha_ratio\tfib_ratio\talpha_over_fib"
            )?;
            for (n, report, direct_n, ok, g) in &rows {
                writeln!(
                    out,
                    "{n}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    report.fib,
                    report.alpha,
                    direct_n.map_or("-".to_string(), |d| d.to_string()),
                    report.p,
                    report.decimal(),
                    if *ok { "ok" } else { "FAIL" },
                    dec(&g.alpha_ratio),
                    dec(&g.fib_ratio),
                    dec(&g.alpha_over_fib),
                )?;
            }
            writeln!(out, "r1\t{:.12}", roots.r1)?;
            writeln!(out, "lambda\t{:.12}", roots.lambda)?;
        }
        StatsFormat::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(n, report, direct_n, ok, g)| {
                    json!({
                        "n": n,
                        "fib": report.fib.to_string(),
                        "alpha": report.alpha.to_string(),
                        "alpha_direct": direct_n.map(|d| d.to_string()),
                        "p": report.p.to_string(),
                        "p_decimal": report.decimal(),
                        "check": ok,
                        "alpha_ratio": dec(&g.alpha_ratio),
                        "fib_ratio": dec(&g.fib_ratio),
                        "alpha_over_fib": dec(&g.alpha_over_fib),
                    })
                })
                .collect();
            let doc = json!({
                "rows": rows,
                "r1": format!("{:.12}", roots.r1),
                "lambda": format!("{:.12}", roots.lambda),
            });
            serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_FALSIFIED })
}

pub fn cmd_roots(tol: f64, out: &mut dyn Write) -> Result<i32, CliError> {
    let roots = char_roots(tol)?;
    writeln!(out, "r1\t{:.12}", roots.r1)?;
    writeln!(out, "residual\t{:e}", roots.residual)?;
    writeln!(
        out,
        "r2\t-1\t{}",
        if roots.minus_one_is_root {
            "exact"
        } else {
            "FAIL"
        }
    )?;
    writeln!(out, "lambda\t{:.12}", roots.lambda)?;
    let below = roots.r1 + tol < roots.lambda;
    writeln!(out, "r1<lambda\t{below}")?;
    Ok(if roots.minus_one_is_root && below {
        EXIT_OK
    } else {
        EXIT_FALSIFIED
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fibseries").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn coeff_command() {
        assert_eq!(
            run_args(&["coeff", "12"]),
            (0, "-1\n".into(), String::new())
        );
        assert_eq!(run_args(&["coeff", "0"]).1, "1\n");
        let (code, out, _) = run_args(&["coeff", "18", "--steps"]);
        assert_eq!(code, 0);
        assert_eq!(out, "high 7 0 +1\nbase - 0 1\n1\n");
    }

    #[test]
    fn coeff_rejects_garbage() {
        let (code, out, err) = run_args(&["coeff", "12x"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("invalid position"));
        assert_eq!(run_args(&["coeff", "-5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn expand_to_stdout() {
        let (code, out, _) = run_args(&["expand", "4", "--format", "bfile"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0 1\n1 -1\n2 -1\n3 0\n4 1\n");
        assert_eq!(
            run_args(&["expand", "0", "--format", "csv"]).1,
            "position,coefficient\n0,1\n"
        );
        assert_eq!(run_args(&["expand", "4", "--format", "xml"]).0, EXIT_USAGE);
    }

    #[test]
    fn expand_beyond_machine_word_is_budget_error() {
        let huge = "9".repeat(40);
        assert_eq!(
            run_args(&["expand", &huge, "--format", "bfile"]).0,
            EXIT_BUDGET
        );
    }

    #[test]
    fn verify_small() {
        let (code, out, _) = run_args(&["verify", "18"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("engine-vs-expansion: 19 passed, 0 failed"));
        assert!(out.contains("product-oracle: 19 passed, 0 failed"));
        assert!(out.ends_with("result: pass\n"));
        assert_eq!(run_args(&["verify", "0"]).0, 0);
    }

    #[test]
    fn verify_is_deterministic() {
        assert_eq!(
            run_args(&["verify", "300", "--seed", "7"]),
            run_args(&["verify", "300", "--seed", "7"])
        );
    }

    #[test]
    fn stats_and_roots() {
        let (code, out, _) = run_args(&["stats", "12"]);
        assert_eq!(code, 0);
        let row5: Vec<&str> = out
            .lines()
            .find(|l| l.starts_with("5\t"))
            .unwrap()
            .split('\t')
            .collect();
        assert_eq!(&row5[..7], ["5", "5", "4", "4", "1/5", "0.200000", "ok"]);
        assert!(out.contains("r1\t1.5436"));
        assert!(out.contains("lambda\t1.6180"));
        assert_eq!(run_args(&["stats", "4"]).0, EXIT_USAGE);

        let (code, out, _) = run_args(&["stats", "8", "--format", "json"]);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["rows"][3]["alpha"], "4");

        let (code, out, _) = run_args(&["roots"]);
        assert_eq!(code, 0);
        assert!(out.contains("r2\t-1\texact"));
        assert!(out.contains("r1<lambda\ttrue"));
        assert_eq!(run_args(&["roots", "--tol", "0"]).0, EXIT_USAGE);
    }
}
