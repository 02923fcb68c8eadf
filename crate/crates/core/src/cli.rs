//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a violated identity or a conjecture violation
//! (a finding), 2 malformed input or an exceeded guard.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{bench_csv, bench_permanent, stability_csv, stability_experiment, BenchMethod};
use crate::conjecture::{hunt, ConjectureReport, HuntMode};
use crate::error::Error;
use crate::exact::Rational;
use crate::identities::{
    check_carlitz_levine_with, check_cauchy_binet, check_corollary_fn, check_corollary_fn1,
    check_lemma_q, check_main_identity_with, expected_charpoly_with, random_sweep, IdentityKind,
    IdentityReport,
};
use crate::linalg::Matrix;
use crate::permanent::{
    perm_auto_with, perm_naive_bounded, perm_rank2_determinantal, perm_ryser_bounded, Guards,
    PermanentMethod, PermanentResult,
};
use crate::symfunc::RationalVector;

#[derive(Parser, Debug)]
#[command(
    name = "permident",
    version,
    about = "Exact rank-2 permanents and determinantal identities"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PermMethodArg {
    Auto,
    Naive,
    Ryser,
    Det,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    Main,
    Cl,
    Cb,
    Fn1,
    Fn,
    Lemq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SignsArg {
    Pos,
    Mixed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Permanent of the matrix in FILE.
    Perm {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = PermMethodArg::Auto)]
        method: PermMethodArg,
    },
    /// Exact determinant of the matrix in FILE.
    Det { file: PathBuf },
    /// Entrywise P-th power of the matrix in FILE.
    Hpow {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        p: i64,
    },
    /// Check an identity on random input or on matrix files.
    ///
    /// File inputs: main and cl take one square matrix per file; cb takes two
    /// files A and B; fn1 and fn take a 2 x n matrix whose rows are u and v;
    /// lemq takes a 1 x n matrix holding x.
    Check {
        #[arg(value_enum)]
        identity: IdentityArg,
        files: Vec<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 9)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Row index set I for cb, 1-based (default 1..k).
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<usize>>,
        /// Column index set J for cb, 1-based (default 1..k).
        #[arg(long, value_delimiter = ',')]
        cols: Option<Vec<usize>>,
        /// Single k for lemq (default: every k in 0..=n).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Search for violations of the block-permanent bound.
    Hunt {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 9)]
        bound: i64,
        #[arg(long, value_enum, default_value_t = SignsArg::Mixed)]
        signs: SignsArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form expected characteristic polynomial evaluated at X.
    ExpectedCharpoly {
        #[arg(long = "eigs-a", allow_hyphen_values = true)]
        eigs_a: RationalVector,
        #[arg(long = "eigs-b", allow_hyphen_values = true)]
        eigs_b: RationalVector,
        #[arg(long, allow_hyphen_values = true)]
        x: Rational,
    },
    /// Time permanent engines on random rank-2 matrices.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "ryser,det")]
        methods: Vec<BenchMethod>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the exact values to this JSON file.
        #[arg(long)]
        values_json: Option<PathBuf>,
    },
    /// Float-vs-exact error of the determinantal formula as the matrix nears rank 1.
    Stability {
        #[arg(long)]
        n: usize,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,1/100,1/10000,1/1000000,1/100000000"
        )]
        epsilons: Vec<Rational>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Status {
    Ok,
    Finding,
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(format!("i/o error: {e}"))
    }
}

type CmdResult = Result<Status, Failure>;

/// Parses `args` (including the program name), runs one command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if informational { 0 } else { 2 };
        }
    };
    match execute(cli, out) {
        Ok(Status::Ok) => 0,
        Ok(Status::Finding) => 1,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    Matrix::parse_text(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn no_csv(command: &str) -> Failure {
    Failure(format!(
        "--format csv is only available for bench and stability, not {command}"
    ))
}

fn execute(cli: Cli, out: &mut dyn Write) -> CmdResult {
    let guards = Guards::from_env()?;
    let format = cli.format;
    match cli.command {
        Command::Perm { file, method } => cmd_perm(&file, method, format, &guards, out),
        Command::Det { file } => {
            let m = read_matrix(&file)?;
            let det = m.determinant()?;
            match format {
                Format::Text => writeln!(out, "{det}")?,
                Format::Json => json_line(out, &serde_json::json!({ "value": det }))?,
                Format::Csv => return Err(no_csv("det")),
            }
            Ok(Status::Ok)
        }
        Command::Hpow { file, p } => {
            let m = read_matrix(&file)?.hadamard_power(p)?;
            match format {
                Format::Text => write!(out, "{}", m.to_text())?,
                Format::Json => {
                    json_line(out, &serde_json::json!({ "p": p, "matrix": m.to_text() }))?
                }
                Format::Csv => return Err(no_csv("hpow")),
            }
            Ok(Status::Ok)
        }
        Command::Check {
            identity,
            files,
            random,
            n,
            trials,
            bound,
            seed,
            rows,
            cols,
            k,
        } => {
            if format == Format::Csv {
                return Err(no_csv("check"));
            }
            let reports = if random {
                if !files.is_empty() {
                    return Err(Failure(
                        "--random and FILE inputs are mutually exclusive".into(),
                    ));
                }
                let n = n.ok_or_else(|| Failure("--random requires --n".into()))?;
                if n == 0 || trials == 0 || bound < 1 {
                    return Err(Failure("--n, --trials and --bound must be positive".into()));
                }
                let kind = match identity {
                    IdentityArg::Main => IdentityKind::Main,
                    IdentityArg::Cl => IdentityKind::CarlitzLevine,
                    IdentityArg::Cb => IdentityKind::CauchyBinet,
                    IdentityArg::Fn1 => IdentityKind::CorollaryFn1,
                    IdentityArg::Fn => IdentityKind::CorollaryFn,
                    IdentityArg::Lemq => IdentityKind::LemmaQ,
                };
                random_sweep(kind, n, trials, bound, seed, &guards)?
            } else {
                if files.is_empty() {
                    return Err(Failure("check needs --random or at least one FILE".into()));
                }
                check_files(identity, &files, rows, cols, k, &guards)?
            };
            emit_reports(&reports, format, out)
        }
        Command::Hunt {
            n,
            trials,
            bound,
            signs,
            seed,
        } => {
            if format == Format::Csv {
                return Err(no_csv("hunt"));
            }
            if n == 0 || trials == 0 || bound < 1 {
                return Err(Failure("--n, --trials and --bound must be positive".into()));
            }
            let mode = match signs {
                SignsArg::Pos => HuntMode::Positive,
                SignsArg::Mixed => HuntMode::Mixed,
            };
            let reports = hunt(n, trials, bound, mode, seed, &guards)?;
            emit_hunt(&reports, format, out)
        }
        Command::ExpectedCharpoly { eigs_a, eigs_b, x } => {
            let value = expected_charpoly_with(&eigs_a, &eigs_b, &x, &guards)?;
            match format {
                Format::Text => writeln!(out, "{value}")?,
                Format::Json => json_line(out, &serde_json::json!({ "x": x, "value": value }))?,
                Format::Csv => return Err(no_csv("expected-charpoly")),
            }
            Ok(Status::Ok)
        }
        Command::Bench {
            sizes,
            methods,
            seed,
            values_json,
        } => {
            if methods.is_empty() {
                return Err(Failure("--methods must name at least one engine".into()));
            }
            let records = bench_permanent(&sizes, &methods, seed, &guards)?;
            if let Some(path) = values_json {
                let values: Vec<_> = records
                    .iter()
                    .map(|r| serde_json::json!({ "n": r.n, "method": r.method, "value": r.value }))
                    .collect();
                let text =
                    serde_json::to_string_pretty(&values).map_err(|e| Failure(e.to_string()))?;
                std::fs::write(&path, text + "\n")
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            }
            match format {
                Format::Csv => write!(out, "{}", bench_csv(&records))?,
                Format::Json => {
                    for r in &records {
                        json_line(out, r)?;
                    }
                }
                Format::Text => {
                    writeln!(
                        out,
                        "{:>4}  {:<14} {:>12}  {:>6}",
                        "n", "method", "wall_time_s", "digits"
                    )?;
                    for r in &records {
                        writeln!(
                            out,
                            "{:>4}  {:<14} {:>12.6}  {:>6}",
                            r.n,
                            r.method.to_string(),
                            r.wall_time,
                            r.value_digits
                        )?;
                    }
                }
            }
            Ok(Status::Ok)
        }
        Command::Stability { n, epsilons, seed } => {
            if n == 0 {
                return Err(Failure("--n must be positive".into()));
            }
            let outcomes = stability_experiment(n, &epsilons, seed, &guards)?;
            match format {
                Format::Csv => write!(out, "{}", stability_csv(&outcomes))?,
                Format::Json => {
                    for o in &outcomes {
                        match &o.result {
                            Ok(r) => json_line(out, r)?,
                            Err(e) => json_line(
                                out,
                                &serde_json::json!({ "epsilon": o.epsilon, "error": e.to_string() }),
                            )?,
                        }
                    }
                }
                Format::Text => {
                    writeln!(out, "{:<16} {:>14}  exact", "epsilon", "relative_error")?;
                    for o in &outcomes {
                        match &o.result {
                            Ok(r) => writeln!(
                                out,
                                "{:<16} {:>14.3e}  {}",
                                o.epsilon.to_string(),
                                r.relative_error,
                                r.exact_value
                            )?,
                            Err(e) => {
                                writeln!(out, "{:<16} {:>14}  ({e})", o.epsilon.to_string(), "-")?
                            }
                        }
                    }
                }
            }
            Ok(Status::Ok)
        }
    }
}

fn cmd_perm(
    file: &Path,
    method: PermMethodArg,
    format: Format,
    guards: &Guards,
    out: &mut dyn Write,
) -> CmdResult {
    let m = read_matrix(file)?;
    let result = match method {
        PermMethodArg::Auto => perm_auto_with(&m, guards)?,
        PermMethodArg::Naive => PermanentResult {
            value: perm_naive_bounded(&m, guards.naive_max)?,
            method: PermanentMethod::Naive,
            fallback_reason: None,
        },
        PermMethodArg::Ryser => PermanentResult {
            value: perm_ryser_bounded(&m, guards.ryser_max)?,
            method: PermanentMethod::Ryser,
            fallback_reason: None,
        },
        PermMethodArg::Det => PermanentResult {
            value: perm_rank2_determinantal(&m)?,
            method: PermanentMethod::Determinantal,
            fallback_reason: None,
        },
    };
    match format {
        Format::Text => {
            writeln!(out, "{}", result.value)?;
            writeln!(out, "method: {}", result.method)?;
            if let Some(reason) = &result.fallback_reason {
                writeln!(out, "fallback: {reason}")?;
            }
        }
        Format::Json => json_line(out, &result)?,
        Format::Csv => return Err(no_csv("perm")),
    }
    Ok(Status::Ok)
}

fn vector_pair(m: &Matrix, path: &Path) -> Result<(Vec<Rational>, Vec<Rational>), Failure> {
    if m.rows() != 2 {
        return Err(Failure(format!(
            "{}: expected a 2 x n matrix with rows u and v",
            path.display()
        )));
    }
    Ok((m.row(0).to_vec(), m.row(1).to_vec()))
}

fn check_files(
    identity: IdentityArg,
    files: &[PathBuf],
    rows: Option<Vec<usize>>,
    cols: Option<Vec<usize>>,
    k: Option<i64>,
    guards: &Guards,
) -> Result<Vec<IdentityReport>, Failure> {
    let mut reports = Vec::new();
    if identity == IdentityArg::Cb {
        let [a, b] = files else {
            return Err(Failure("check cb takes exactly two files, A and B".into()));
        };
        let (a, b) = (read_matrix(a)?, read_matrix(b)?);
        let k = a.rows().min(a.cols()).min(b.cols());
        let rows = rows.unwrap_or_else(|| (1..=k).collect());
        let cols = cols.unwrap_or_else(|| (1..=k).collect());
        reports.push(check_cauchy_binet(&a, &b, &rows, &cols)?);
        return Ok(reports);
    }
    for path in files {
        let m = read_matrix(path)?;
        match identity {
            IdentityArg::Main => reports.push(check_main_identity_with(&m, guards)?),
            IdentityArg::Cl => reports.push(check_carlitz_levine_with(&m, guards)?),
            IdentityArg::Fn1 => {
                let (u, v) = vector_pair(&m, path)?;
                reports.push(check_corollary_fn1(&u, &v)?);
            }
            IdentityArg::Fn => {
                let (u, v) = vector_pair(&m, path)?;
                reports.push(check_corollary_fn(&u, &v)?);
            }
            IdentityArg::Lemq => {
                if m.rows() != 1 {
                    return Err(Failure(format!(
                        "{}: expected a 1 x n matrix holding x",
                        path.display()
                    )));
                }
                let x = m.row(0);
                match k {
                    Some(k) => reports.push(check_lemma_q(x, k)?),
                    None => {
                        for k in 0..=x.len() as i64 {
                            reports.push(check_lemma_q(x, k)?);
                        }
                    }
                }
            }
            IdentityArg::Cb => unreachable!("handled above"),
        }
    }
    Ok(reports)
}

fn emit_reports(reports: &[IdentityReport], format: Format, out: &mut dyn Write) -> CmdResult {
    let violations = reports.iter().filter(|r| r.is_violation()).count();
    match format {
        Format::Json => {
            for r in reports {
                json_line(out, r)?;
            }
        }
        _ => {
            for r in reports {
                writeln!(out, "{r}")?;
            }
            let held = reports.iter().filter(|r| r.holds).count();
            let controls = reports.iter().filter(|r| !r.hypothesis_met).count();
            write!(out, "{held}/{} hold", reports.len())?;
            if controls > 0 {
                write!(out, " ({controls} outside the hypothesis)")?;
            }
            writeln!(out)?;
        }
    }
    Ok(if violations > 0 {
        Status::Finding
    } else {
        Status::Ok
    })
}

fn emit_hunt(reports: &[ConjectureReport], format: Format, out: &mut dyn Write) -> CmdResult {
    let violations: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
    match format {
        Format::Json => {
            for r in reports {
                json_line(out, r)?;
            }
        }
        _ => {
            let equal = reports.iter().filter(|r| r.lhs == r.rhs).count();
            writeln!(out, "trials: {}", reports.len())?;
            writeln!(out, "violations: {}", violations.len())?;
            writeln!(out, "equality cases: {equal}")?;
            if let Some(best) = reports
                .iter()
                .filter(|r| r.ratio.is_some())
                .max_by(|a, b| a.ratio.cmp(&b.ratio))
            {
                let ratio = best.ratio.as_ref().expect("filtered");
                writeln!(
                    out,
                    "max ratio: {ratio} (~{:.6}, trial {})",
                    ratio.to_f64(),
                    best.trial
                )?;
            }
            for v in &violations {
                json_line(out, v)?;
            }
        }
    }
    Ok(if violations.is_empty() {
        Status::Ok
    } else {
        Status::Finding
    })
}
