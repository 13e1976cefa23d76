//! The `tgoppa` command line.
//!
//! Exit codes: 0 success, 1 operational failure (or an oracle mismatch),
//! 2 usage error, 3 a parameter set whose dimension was not constant.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::affine::build_support;
use crate::error::{Error, Result};
use crate::experiment::{self, GridFile, ParamSet, TrialOptions};
use crate::galois::{checked_order, is_prime, Elem, Field, DEFAULT_SIZE_CAP};
use crate::goppa::{self, CodeSpec, CodeSpecDescription};
use crate::poly::{parse_u64_list, Polynomial};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONSTANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tgoppa",
    version,
    about = "Twisted Goppa codes: construction, dimension, determinism experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical field description.
    Field(FieldArgs),
    /// Print the orbit support built from (b, u).
    Support(SupportArgs),
    /// Compute n, mt, rank and k of one code.
    Dim(DimArgs),
    /// Test whether a word satisfies the defining congruence.
    Member(MemberArgs),
    /// Compare the rank-based dimension with exhaustive enumeration.
    OracleDim(CodeArgs),
    /// Run seeded trials for one parameter set and report whether k is constant.
    Determinism(DeterminismArgs),
    /// Run determinism checks over a grid of parameter sets.
    Sweep(SweepArgs),
}

fn parse_prime(s: &str) -> std::result::Result<u32, String> {
    let q: u32 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_prime(q as u64) {
        Ok(q)
    } else {
        Err(format!("q = {q} is not prime"))
    }
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long, value_parser = parse_prime)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    #[arg(long, value_parser = parse_prime)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub u: u64,
    /// Goppa polynomial whose roots are excluded (default: the constant 1).
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub orbits: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportKind {
    All,
    Orbit,
    List,
}

#[derive(Debug, Args)]
pub struct CodeArgs {
    /// CodeSpec JSON file; replaces the individual code flags.
    #[arg(long, conflicts_with_all = ["q", "m", "t", "g", "eta", "support", "b", "u", "orbits"])]
    pub spec: Option<PathBuf>,
    #[arg(long, value_parser = parse_prime, required_unless_present = "spec")]
    pub q: Option<u32>,
    #[arg(long, required_unless_present = "spec")]
    pub m: Option<u32>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Ascending coefficient encodings, e.g. 2,1,1.
    #[arg(long, required_unless_present = "spec")]
    pub g: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub eta: u32,
    /// `all`, `orbit`, or an explicit comma-separated list of encodings.
    #[arg(long, default_value = "all")]
    pub support: String,
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long)]
    pub u: Option<u64>,
    #[arg(long)]
    pub orbits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DimArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Also write the parity matrices as JSON.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Word over GF(q), comma-separated.
    #[arg(long)]
    pub word: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct DeterminismArgs {
    #[arg(long, value_parser = parse_prime)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub u: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub orbits: Option<usize>,
    #[arg(long)]
    pub allow_zero_eta: bool,
    #[arg(long)]
    pub exclude_degenerate_eta: bool,
    /// Write the trial records here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Grid file: {"grid":[{"q":2,"m":4,"t":3,"b":10,"u":3}],"trials":20,"seed":12345}
    #[arg(long)]
    pub grid: PathBuf,
    /// Overrides the grid file's trial count.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Overrides the grid file's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub allow_zero_eta: bool,
    #[arg(long)]
    pub exclude_degenerate_eta: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

fn usage(msg: impl std::fmt::Display) -> clap::Error {
    Cli::command().error(ErrorKind::ValueValidation, msg)
}

fn check_order(q: u32, m: u32) -> std::result::Result<u64, clap::Error> {
    if m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    checked_order(q as u64, m, DEFAULT_SIZE_CAP).map_err(usage)
}

fn check_element(name: &str, value: u64, order: u64) -> std::result::Result<(), clap::Error> {
    if value >= order {
        return Err(usage(format!(
            "--{name} {value} is not below q^m = {order}"
        )));
    }
    Ok(())
}

fn check_u(q: u32, u: u64, order: u64) -> std::result::Result<(), clap::Error> {
    if u == 1 || u == q as u64 || (u > 0 && (order - 1).is_multiple_of(u)) {
        Ok(())
    } else {
        Err(usage(format!(
            "--u {u} is neither 1, q, nor a divisor of q^m - 1"
        )))
    }
}

impl CodeArgs {
    fn validate(&self) -> std::result::Result<(), clap::Error> {
        if self.spec.is_some() {
            return Ok(());
        }
        let (q, m) = (self.q.expect("required"), self.m.expect("required"));
        let order = check_order(q, m)?;
        let coeffs = parse_u64_list(self.g.as_deref().expect("required")).map_err(usage)?;
        for &c in &coeffs {
            check_element("g", c, order)?;
        }
        let degree = coeffs.iter().rposition(|&c| c != 0);
        match degree {
            None | Some(0) => return Err(usage("--g must have degree at least 1")),
            Some(d) if self.t.is_some_and(|t| t != d) => {
                return Err(usage(format!("--t {} but deg g = {d}", self.t.unwrap())))
            }
            _ => {}
        }
        check_element("eta", self.eta as u64, order)?;
        match self.support_kind() {
            SupportKind::Orbit => {
                let (Some(b), Some(u)) = (self.b, self.u) else {
                    return Err(usage("--support orbit requires --b and --u"));
                };
                check_element("b", b as u64, order)?;
                check_u(q, u, order)?;
            }
            SupportKind::List => {
                for v in parse_u64_list(&self.support).map_err(usage)? {
                    check_element("support", v, order)?;
                }
            }
            SupportKind::All => {}
        }
        Ok(())
    }

    fn support_kind(&self) -> SupportKind {
        match self.support.as_str() {
            "all" => SupportKind::All,
            "orbit" => SupportKind::Orbit,
            _ => SupportKind::List,
        }
    }

    /// Builds the code; assumes [`CodeArgs::validate`] passed.
    pub fn build(&self) -> Result<CodeSpec> {
        if let Some(path) = &self.spec {
            let desc: CodeSpecDescription = serde_json::from_reader(File::open(path)?)?;
            return CodeSpec::from_description(&desc);
        }
        let field = Field::new(self.q.expect("required"), self.m.expect("required"))?;
        let g = Polynomial::parse(&field, self.g.as_deref().expect("required"))?;
        let eta = field.elem(self.eta as u64)?;
        let points = match self.support_kind() {
            SupportKind::All => build_support(&field, Elem::ZERO, 1, &g)?.points(),
            SupportKind::Orbit => {
                let b = field.elem(self.b.expect("validated") as u64)?;
                let mut s = build_support(&field, b, self.u.expect("validated"), &g)?;
                if let Some(count) = self.orbits {
                    s.truncate_orbits(count);
                }
                s.points()
            }
            SupportKind::List => parse_u64_list(&self.support)?
                .into_iter()
                .map(|v| field.elem(v))
                .collect::<Result<_>>()?,
        };
        CodeSpec::new(&field, points, g, eta)
    }
}

impl Cli {
    /// Flag checks that need more than one flag; run before any computation.
    pub fn validate(&self) -> std::result::Result<(), clap::Error> {
        match &self.command {
            Command::Field(a) => check_order(a.q, a.m).map(|_| ()),
            Command::Support(a) => {
                let order = check_order(a.q, a.m)?;
                check_element("b", a.b as u64, order)?;
                check_u(a.q, a.u, order)?;
                if let Some(g) = &a.g {
                    for c in parse_u64_list(g).map_err(usage)? {
                        check_element("g", c, order)?;
                    }
                }
                Ok(())
            }
            Command::Dim(a) => a.code.validate(),
            Command::Member(a) => {
                a.code.validate()?;
                parse_u64_list(&a.word).map(|_| ()).map_err(usage)
            }
            Command::OracleDim(a) => a.validate(),
            Command::Determinism(a) => {
                let order = check_order(a.q, a.m)?;
                check_element("b", a.b as u64, order)?;
                check_u(a.q, a.u, order)?;
                if a.t == 0 {
                    return Err(usage("--t must be at least 1"));
                }
                if a.trials == 0 {
                    return Err(usage("--trials must be at least 1"));
                }
                Ok(())
            }
            Command::Sweep(a) => {
                if a.trials == Some(0) {
                    return Err(usage("--trials must be at least 1"));
                }
                if a.format == Format::Table && a.out.is_some() {
                    return Err(usage("--format table writes to standard output only"));
                }
                Ok(())
            }
        }
    }
}

/// Parses and validates an argument vector (including the program name).
pub fn parse<I, T>(argv: I) -> std::result::Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    cli.validate()?;
    Ok(cli)
}

fn print_json<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct DimOutput {
    n: usize,
    mt: usize,
    rank: usize,
    k: usize,
}

#[derive(Serialize)]
struct OracleOutput {
    n: usize,
    rank_k: usize,
    brute_force_k: usize,
    #[serde(rename = "match")]
    matches: bool,
}

fn write_records(
    records: &[experiment::TrialRecord],
    path: &PathBuf,
    format: Format,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    match format {
        Format::Json => print_json(&mut w, &records)?,
        _ => experiment::write_csv(records, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn write_table<W: Write>(out: &mut W, outcome: &experiment::SweepOutcome) -> Result<()> {
    writeln!(
        out,
        "{:>3} {:>3} {:>3} {:>7} {:>7} {:>7} {:>7}  k histogram",
        "q", "m", "t", "b", "u", "n", "k"
    )?;
    for r in &outcome.reports {
        let p = r.params;
        let k = r.k_value.map_or("-".to_string(), |k| k.to_string());
        writeln!(
            out,
            "{:>3} {:>3} {:>3} {:>7} {:>7} {:>7} {:>7}  {:?}",
            p.q, p.m, p.t, p.b, p.u, r.n, k, r.k_histogram
        )?;
    }
    for f in &outcome.failures {
        writeln!(out, "error {:?}: {}", f.params, f.error)?;
    }
    Ok(())
}

/// Runs a validated command, writing primary output to `out`. Returns the
/// process exit code.
pub fn execute<W: Write>(cli: &Cli, out: &mut W) -> Result<i32> {
    match &cli.command {
        Command::Field(a) => {
            print_json(out, &Field::new(a.q, a.m)?.description())?;
        }
        Command::Support(a) => {
            let field = Field::new(a.q, a.m)?;
            let g = match &a.g {
                Some(s) => Polynomial::parse(&field, s)?,
                None => Polynomial::constant(&field, Elem::ONE),
            };
            let mut s = build_support(&field, field.elem(a.b as u64)?, a.u, &g)?;
            if let Some(count) = a.orbits {
                s.truncate_orbits(count);
            }
            print_json(out, &s.description())?;
        }
        Command::Dim(a) => {
            let spec = a.code.build()?;
            let pm = goppa::parity_matrix(&spec)?;
            let rank = pm.rank();
            if let Some(path) = &a.matrix_out {
                let mut w = BufWriter::new(File::create(path)?);
                print_json(&mut w, &pm.export())?;
                w.flush()?;
            }
            print_json(
                out,
                &DimOutput {
                    n: spec.n(),
                    mt: pm.base_rows.nrows(),
                    rank,
                    k: spec.n() - rank,
                },
            )?;
        }
        Command::Member(a) => {
            let spec = a.code.build()?;
            let word: Vec<u32> = parse_u64_list(&a.word)?
                .into_iter()
                .map(|v| u32::try_from(v).unwrap_or(u32::MAX))
                .collect();
            let member = goppa::is_codeword(&spec, &word)?;
            print_json(out, &serde_json::json!({ "codeword": member }))?;
        }
        Command::OracleDim(a) => {
            let spec = a.build()?;
            let rank_k = goppa::dimension(&spec)?;
            let brute_force_k = goppa::brute_force_dimension(&spec)?;
            let matches = rank_k == brute_force_k;
            print_json(
                out,
                &OracleOutput {
                    n: spec.n(),
                    rank_k,
                    brute_force_k,
                    matches,
                },
            )?;
            if !matches {
                eprintln!("tgoppa: rank-based k = {rank_k} but enumeration gives {brute_force_k}");
                return Ok(EXIT_FAILURE);
            }
        }
        Command::Determinism(a) => {
            let params = ParamSet::new(a.q, a.m, a.t, a.b, a.u);
            let options = TrialOptions {
                allow_zero_eta: a.allow_zero_eta,
                orbits: a.orbits,
                exclude_degenerate_eta: a.exclude_degenerate_eta,
            };
            let d = experiment::verify_determinism(params, a.trials, a.seed, options)?;
            if let Some(path) = &a.out {
                write_records(&d.records, path, a.format)?;
            }
            print_json(out, &d.report)?;
            if !d.report.invariant {
                return Ok(EXIT_NOT_CONSTANT);
            }
        }
        Command::Sweep(a) => {
            let file: GridFile = serde_json::from_reader(File::open(&a.grid)?)?;
            let trials = a.trials.unwrap_or(file.trials);
            if trials == 0 {
                return Err(Error::InvalidParams("trials must be at least 1".into()));
            }
            let options = TrialOptions {
                allow_zero_eta: a.allow_zero_eta || file.allow_zero_eta,
                orbits: None,
                exclude_degenerate_eta: a.exclude_degenerate_eta,
            };
            let outcome =
                experiment::sweep(&file.grid, trials, a.seed.unwrap_or(file.seed), options)?;
            let mut sink: Box<dyn Write + '_> = match &a.out {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(&mut *out),
            };
            match a.format {
                Format::Csv => experiment::write_csv(&outcome.records, &mut sink)?,
                Format::Json => print_json(&mut sink, &outcome)?,
                Format::Table => write_table(&mut sink, &outcome)?,
            }
            sink.flush()?;
            if !outcome.counterexamples.is_empty() {
                return Ok(EXIT_NOT_CONSTANT);
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let cli = parse(std::iter::once("tgoppa").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = execute(&cli, &mut buf).unwrap();
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn parses_subcommands() {
        let cli = parse([
            "tgoppa",
            "dim",
            "--q",
            "2",
            "--m",
            "2",
            "--t",
            "2",
            "--g",
            "2,1,1",
            "--eta",
            "1",
            "--support",
            "all",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Dim(_)));
        let cli = parse([
            "tgoppa",
            "determinism",
            "--q",
            "2",
            "--m",
            "6",
            "--t",
            "3",
            "--b",
            "4",
            "--u",
            "3",
            "--trials",
            "20",
            "--seed",
            "7",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Determinism(_)));
    }

    #[test]
    fn usage_errors() {
        let bad: &[&[&str]] = &[
            &["tgoppa", "dim", "--q", "4", "--m", "2", "--g", "1,1,1"],
            &[
                "tgoppa", "dim", "--q", "2", "--m", "2", "--g", "1,1,1", "--bogus",
            ],
            &[
                "tgoppa", "dim", "--q", "2", "--m", "2", "--t", "3", "--g", "2,1,1",
            ],
            &["tgoppa", "dim", "--q", "2", "--m", "2", "--g", "2,1,9"],
            &[
                "tgoppa",
                "dim",
                "--q",
                "2",
                "--m",
                "2",
                "--g",
                "2,1,1",
                "--support",
                "orbit",
            ],
            &[
                "tgoppa",
                "determinism",
                "--q",
                "2",
                "--m",
                "2",
                "--t",
                "2",
                "--b",
                "1",
                "--u",
                "5",
            ],
            &["tgoppa", "frobnicate"],
        ];
        for argv in bad {
            let err = parse(argv.iter().copied()).unwrap_err();
            assert_eq!(err.exit_code(), EXIT_USAGE, "{argv:?}");
        }
    }

    #[test]
    fn dim_worked_example() {
        let (code, out) = run(&[
            "dim",
            "--q",
            "2",
            "--m",
            "2",
            "--t",
            "2",
            "--g",
            "2,1,1",
            "--eta",
            "1",
            "--support",
            "all",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "{\"n\":4,\"mt\":4,\"rank\":2,\"k\":2}\n");
    }

    #[test]
    fn member_and_oracle() {
        let base = ["--q", "2", "--m", "2", "--g", "2,1,1", "--eta", "1"];
        let mut args = vec!["member"];
        args.extend(base);
        args.extend(["--word", "1,1,0,0"]);
        assert_eq!(run(&args).1, "{\"codeword\":true}\n");
        let mut args = vec!["oracle-dim"];
        args.extend(base);
        let (code, out) = run(&args);
        assert_eq!(code, EXIT_OK);
        assert_eq!(
            out,
            "{\"n\":4,\"rank_k\":2,\"brute_force_k\":2,\"match\":true}\n"
        );
    }

    #[test]
    fn field_and_support() {
        assert_eq!(
            run(&["field", "--q", "2", "--m", "4"]).1,
            "{\"q\":2,\"m\":4,\"modulus\":[1,1,0,0,1]}\n"
        );
        assert_eq!(
            run(&["support", "--q", "2", "--m", "2", "--b", "1", "--u", "2", "--g", "2,1,1"]).1,
            "{\"a\":1,\"b\":1,\"orbits\":[[0,1],[2,3]]}\n"
        );
    }

    #[test]
    fn determinism_single_trial() {
        let (code, out) = run(&[
            "determinism",
            "--q",
            "2",
            "--m",
            "4",
            "--t",
            "3",
            "--b",
            "10",
            "--u",
            "3",
            "--trials",
            "1",
            "--seed",
            "7",
        ]);
        assert_eq!(code, EXIT_OK);
        let report: experiment::DeterminismReport = serde_json::from_str(&out).unwrap();
        assert!(report.invariant);
        assert_eq!(report.trials, 1);
    }
}
