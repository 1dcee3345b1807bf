//! `cobweb` command-line front end.
//!
//! Exit statuses: 0 success, 1 domain error (bad coordinates, short
//! sequence, non-invertible), 2 usage error, 3 a verification or round-trip
//! check failed. Errors go to stderr as a single `error: <kind>: <reason>` line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cobweb::oracle::{enumerate_chains, ChainKind, ChainQuery, VerifyOptions};
use cobweb::{formulas, verify_suite, CobwebSequence, FinitePoset, NamedFunction, Scalar, Vertex, VertexFunction};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Largest poset an `eval` query materializes for its oracle cross-check.
const EVAL_ORACLE_CAP: usize = 300;

#[derive(Debug, Parser)]
#[command(name = "cobweb", version, about = "Cobweb posets and their incidence algebra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Materialize P_n and dump levels and Hasse edges as JSON.
    Build(BuildArgs),
    /// Evaluate a closed-form incidence function at one pair.
    Eval(EvalArgs),
    /// Count all chains or maximal chains between two vertices of P_n.
    Count(CountArgs),
    /// Dump the matrix of an incidence function on P_n.
    Matrix(MatrixArgs),
    /// Cross-check every closed form against matrices and enumeration.
    Verify(VerifyArgs),
    /// Random f, down-sum to g, recover f by Möbius inversion.
    InvertDemo(InvertDemoArgs),
}

#[derive(Debug, Args)]
pub struct PosetArgs {
    /// Sequence: fibonacci | constant:K | naturals | pow2 | list:N0,N1,...
    #[arg(long, value_parser = parse_seq)]
    pub seq: CobwebSequence,
    /// Depth of the finite subposet P_n.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub poset: PosetArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFunc {
    Zeta,
    Mu,
    Eta,
    Chi,
    Card,
    EtaPow,
    ChiPow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub func: EvalFunc,
    /// Power for eta-pow and chi-pow.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_parser = parse_seq)]
    pub seq: CobwebSequence,
    /// Vertex as `position,level`.
    #[arg(long, value_parser = parse_vertex)]
    pub x: Vertex,
    #[arg(long, value_parser = parse_vertex)]
    pub y: Vertex,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountKind {
    AllChains,
    MaximalChains,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long, value_enum)]
    pub kind: CountKind,
    #[command(flatten)]
    pub poset: PosetArgs,
    #[arg(long, value_parser = parse_vertex)]
    pub x: Vertex,
    #[arg(long, value_parser = parse_vertex)]
    pub y: Vertex,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// zeta | mu | eta | chi | C | M | C-inv | M-inv
    #[arg(long, value_parser = parse_named)]
    pub func: NamedFunction,
    #[command(flatten)]
    pub poset: PosetArgs,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub poset: PosetArgs,
    /// Check every pair when nu is at most this; sample otherwise.
    #[arg(long, default_value_t = VerifyOptions::default().pairs_cap)]
    pub pairs_cap: usize,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub rng_seed: u64,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InvertDemoArgs {
    #[command(flatten)]
    pub poset: PosetArgs,
    #[arg(long)]
    pub rng_seed: u64,
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
}

fn parse_seq(s: &str) -> Result<CobwebSequence, String> {
    s.parse::<CobwebSequence>().map_err(|e| e.to_string())
}

fn parse_named(s: &str) -> Result<NamedFunction, String> {
    s.parse()
}

/// `position,level`.
pub fn parse_vertex(s: &str) -> Result<Vertex, String> {
    let (p, l) = s
        .split_once(',')
        .ok_or_else(|| format!("vertex `{s}` must be `position,level`"))?;
    let position = p.trim().parse().map_err(|_| format!("bad position in `{s}`"))?;
    let level = l.trim().parse().map_err(|_| format!("bad level in `{s}`"))?;
    Ok(Vertex::new(position, level))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
    Check(String),
    Io(String),
}

impl From<cobweb::Error> for Failure {
    fn from(e: cobweb::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let reason = e.to_string();
            let line = reason.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "error: usage: {line}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let (code, kind, reason) = match f {
                Failure::Usage(r) => (EXIT_USAGE, "usage", r),
                Failure::Domain(r) => (EXIT_DOMAIN, "domain", r),
                Failure::Check(r) => (EXIT_CHECK_FAILED, "check", r),
                Failure::Io(r) => (EXIT_DOMAIN, "io", r),
            };
            let _ = writeln!(err, "error: {kind}: {}", reason.replace('\n', " "));
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Build(a) => build(a, out),
        Command::Eval(a) => eval(a, out),
        Command::Count(a) => count(a, out),
        Command::Matrix(a) => matrix(a, out),
        Command::Verify(a) => verify(a, out),
        Command::InvertDemo(a) => invert_demo(a, out),
    }
}

fn materialize(args: PosetArgs) -> Result<Arc<FinitePoset>, Failure> {
    Ok(Arc::new(FinitePoset::build(args.seq, args.n)?))
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn build(a: BuildArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = materialize(a.poset)?;
    emit(&json_line(&p.dump()), a.out.as_ref(), out)?;
    Ok(EXIT_OK)
}

/// Result of a pointwise query.
#[derive(Debug, Serialize)]
pub struct QueryReport {
    pub func: String,
    pub sequence: String,
    pub x: Vertex,
    pub y: Vertex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub value: String,
    pub method: &'static str,
    pub oracle: Option<String>,
    pub agree: Option<bool>,
}

impl QueryReport {
    fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
        let text = match format {
            Format::Json => json_line(self),
            Format::Pretty | Format::Csv => format!("{}\n", self.value),
        };
        emit(&text, None, out)
    }
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let needs_k = matches!(a.func, EvalFunc::EtaPow | EvalFunc::ChiPow);
    let k = match (needs_k, a.k) {
        (true, None) => return Err(Failure::Usage(format!("--k is required for {:?}", a.func))),
        (false, Some(_)) => return Err(Failure::Usage("--k only applies to eta-pow and chi-pow".into())),
        (_, k) => k,
    };
    let seq = &a.seq;
    let (x, y) = (a.x, a.y);
    let value: BigInt = match a.func {
        EvalFunc::Zeta => formulas::zeta_at(seq, x, y)?.into(),
        EvalFunc::Mu => formulas::mu_at(seq, x, y)?,
        EvalFunc::Eta => formulas::eta_at(seq, x, y)?.into(),
        EvalFunc::Chi => formulas::chi_at(seq, x, y)?.into(),
        EvalFunc::Card => formulas::card_interval(seq, x, y)?.into(),
        EvalFunc::EtaPow => formulas::eta_pow_at(seq, k.unwrap_or(0), x, y)?.into(),
        EvalFunc::ChiPow => formulas::chi_pow_at(seq, k.unwrap_or(0), x, y)?.into(),
    };

    // Cross-check on the smallest P_n holding both vertices, when it is small.
    let depth = x.level.max(y.level);
    let oracle = match FinitePoset::build(seq.clone(), depth) {
        Ok(p) if p.nu() <= EVAL_ORACLE_CAP => {
            let kind = match a.func {
                EvalFunc::Zeta => None,
                EvalFunc::Mu => Some(ChainKind::MoebiusRecurrence),
                EvalFunc::Eta => Some(ChainKind::ChainsOfLength(1)),
                EvalFunc::Chi => Some(ChainKind::MaximalChainsOfLength(1)),
                EvalFunc::Card => Some(ChainKind::IntervalSize),
                EvalFunc::EtaPow => Some(ChainKind::ChainsOfLength(k.unwrap_or(0))),
                EvalFunc::ChiPow => Some(ChainKind::MaximalChainsOfLength(k.unwrap_or(0))),
            };
            match kind {
                Some(kind) => Some(enumerate_chains(&ChainQuery { poset: &p, x, y, kind })?),
                None => Some(BigInt::from(u8::from(cobweb::leq(x, y)))),
            }
        }
        _ => None,
    };

    let report = QueryReport {
        func: format!("{:?}", a.func).to_lowercase(),
        sequence: seq.to_string(),
        x,
        y,
        k,
        value: value.to_string(),
        method: "closed-form",
        agree: oracle.as_ref().map(|o| *o == value),
        oracle: oracle.map(|o| o.to_string()),
    };
    report.write(a.format, out)?;
    Ok(EXIT_OK)
}

fn count(a: CountArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = materialize(a.poset)?;
    let (x, y) = (a.x, a.y);
    let (name, closed, kind) = match a.kind {
        CountKind::AllChains => ("all-chains", formulas::count_all_chains(&p, x, y)?, ChainKind::AllChains),
        CountKind::MaximalChains => (
            "maximal-chains",
            formulas::count_maximal_chains(&p, x, y)?,
            ChainKind::MaximalChains,
        ),
    };
    let closed = BigInt::from(closed);
    let oracle = enumerate_chains(&ChainQuery { poset: &p, x, y, kind })?;
    let report = QueryReport {
        func: name.into(),
        sequence: p.sequence().to_string(),
        x,
        y,
        k: None,
        value: closed.to_string(),
        method: "closed-form",
        agree: Some(oracle == closed),
        oracle: Some(oracle.to_string()),
    };
    report.write(a.format, out)?;
    Ok(EXIT_OK)
}

fn matrix(a: MatrixArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = materialize(a.poset)?;
    let m = a.func.matrix(&p)?.to_matrix();
    let text = match a.format {
        Format::Csv => m.to_csv(),
        Format::Json => json_line(&m.to_json()),
        Format::Pretty => m.to_pretty(),
    };
    emit(&text, a.out.as_ref(), out)?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = materialize(a.poset)?;
    let opts = VerifyOptions {
        pairs_cap: a.pairs_cap,
        seed: a.rng_seed,
    };
    let report = verify_suite(&p, &opts);
    let text = match a.format {
        Format::Json => json_line(&report),
        Format::Pretty | Format::Csv => report.to_pretty(),
    };
    emit(&text, None, out)?;
    if report.all_passed() {
        Ok(EXIT_OK)
    } else {
        let names: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
        Err(Failure::Check(format!("failed checks: {}", names.join(", "))))
    }
}

#[derive(Debug, Serialize)]
struct DemoRow {
    vertex: Vertex,
    f: String,
    g: String,
    recovered: String,
}

#[derive(Debug, Serialize)]
struct DemoReport {
    sequence: String,
    depth: usize,
    seed: u64,
    rows: Vec<DemoRow>,
    diff: Vec<Vertex>,
}

/// Seeded integer function with values in `-9..=9`.
pub fn random_function(p: &FinitePoset, seed: u64) -> VertexFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    p.vertices()
        .map(|v| (v, Scalar::from_integer(BigInt::from(rng.gen_range(-9i64..=9)))))
        .collect()
}

fn invert_demo(a: InvertDemoArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let p = materialize(a.poset)?;
    let f = random_function(&p, a.rng_seed);
    let g = formulas::down_sum(&p, &f)?;
    let recovered = formulas::mobius_inversion(&p, &g)?;
    let diff: Vec<Vertex> = p.vertices().filter(|v| f[v] != recovered[v]).collect();
    let report = DemoReport {
        sequence: p.sequence().to_string(),
        depth: p.depth(),
        seed: a.rng_seed,
        rows: p
            .vertices()
            .map(|v| DemoRow {
                vertex: v,
                f: f[&v].to_string(),
                g: g[&v].to_string(),
                recovered: recovered[&v].to_string(),
            })
            .collect(),
        diff,
    };
    let text = match a.format {
        Format::Json => json_line(&report),
        Format::Pretty | Format::Csv => {
            let mut s = format!("{:>10} {:>6} {:>8} {:>10}\n", "vertex", "f", "g", "recovered");
            for r in &report.rows {
                s.push_str(&format!("{:>10} {:>6} {:>8} {:>10}\n", r.vertex.to_string(), r.f, r.g, r.recovered));
            }
            if report.diff.is_empty() {
                s.push_str("diff: none\n");
            } else {
                let d: Vec<String> = report.diff.iter().map(ToString::to_string).collect();
                s.push_str(&format!("diff: {}\n", d.join(" ")));
            }
            s
        }
    };
    emit(&text, None, out)?;
    if report.diff.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Check(format!("{} vertices not recovered", report.diff.len())))
    }
}
