//! Command-line front end behind the thin `qsmp` binary.
//!
//! Four subcommands: `analyze` (width-bound report for a matrix file),
//! `simulate` (quantum referee runs over a protocol), `fact1` (trace-norm
//! lower bound pipeline for inner-product matrices), and `replay` (re-run a
//! recorded manifest). Every run writes a manifest with enough information
//! to reproduce its output byte for byte.
//!
//! Exit codes: 0 success, 2 input error, 3 consistency failure (a certified
//! lower bound above the best upper bound), 4 validation exhausted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BooleanMatrix, RealMatrix};
use crate::referee::{simulate_quantum_protocol, FingerprintMode, RefereeConfig};
use crate::smp::{ClassicalSmp, CorrectnessThresholds, TargetFunction};
use crate::svd;
use crate::width::{
    balance_decomposition, ip_lower_bound_check, rcw_lower_bound, svd_decomposition,
    trivial_decomposition, width_report, Decomposition, DEFAULT_BALANCE_ITERS,
};
use crate::zoo::{build_equality_protocol, ip_matrix, EqualityParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONSISTENCY: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "qsmp",
    version,
    about = "Simultaneous message protocols, quantum fingerprints, and width bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Width-bound report (JSON) for a matrix in the text format
    Analyze(AnalyzeArgs),
    /// Simulate the SWAP-test referee over a protocol
    Simulate(SimulateArgs),
    /// Trace-norm lower bound pipeline for the inner-product matrix
    Fact1(Fact1Args),
    /// Re-run the command recorded in a manifest
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Matrix file (boolean matrices get the full generator report)
    #[arg(long)]
    pub matrix: PathBuf,
    /// Write the report here instead of stdout; certificate matrices are
    /// written next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest destination (default: next to --out, or stderr)
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Protocol file in the protocol text format
    #[arg(long, conflicts_with = "eq")]
    pub protocol: Option<PathBuf>,
    /// Build an equality protocol: "n,L,t" (input bits, coins, hash bits)
    #[arg(long, value_name = "n,L,t")]
    pub eq: Option<String>,
    /// Target function as a boolean matrix file (rows = x, columns = y)
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// basic | decomp:trivial | decomp:svd | decomp:trivial-balanced |
    /// decomp:svd-balanced
    #[arg(long, default_value = "basic")]
    pub mode: String,
    /// Alice input (with --y); or use --all-pairs
    #[arg(long)]
    pub x: Option<usize>,
    /// Bob input (with --x)
    #[arg(long)]
    pub y: Option<usize>,
    /// Sweep every input pair in canonical order
    #[arg(long, conflicts_with_all = ["x", "y"])]
    pub all_pairs: bool,
    /// Target error probability of the quantum referee
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    /// Acceptance threshold for f = 0 pairs
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub alpha0: f64,
    /// Acceptance threshold for f = 1 pairs
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub alpha1: f64,
    /// Independent referee runs per input pair
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Override the Hoeffding copy count
    #[arg(long)]
    pub copies: Option<u64>,
    /// Master seed; per-pair streams split off it deterministically
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of CSV
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Fact1Args {
    /// Input length in bits (1..=7)
    #[arg(long)]
    pub n: u32,
    /// Emit JSON instead of the table
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    /// Manifest written by a previous run
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Record of one CLI run, sufficient to reproduce its output.
#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub master_seed: Option<u64>,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
}

struct CmdDone {
    content: String,
    exit: i32,
    out: Option<PathBuf>,
    manifest: Option<PathBuf>,
    seed: Option<u64>,
}

/// Entry point used by the binary: parse `std::env::args` and run.
pub fn main_entry() -> i32 {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    run_argv(&argv)
}

/// Parse and run an argument vector (without the binary name).
pub fn run_argv(argv: &[String]) -> i32 {
    let mut full = Vec::with_capacity(argv.len() + 1);
    full.push("qsmp".to_string());
    full.extend_from_slice(argv);
    let cli = match Cli::try_parse_from(&full) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    execute(cli.command, argv)
}

fn execute(command: Command, argv: &[String]) -> i32 {
    let started = unix_ms();
    let (name, result) = match &command {
        Command::Analyze(a) => ("analyze", run_analyze(a)),
        Command::Simulate(s) => ("simulate", run_simulate(s)),
        Command::Fact1(f) => ("fact1", run_fact1(f)),
        Command::Replay(r) => return run_replay(r),
    };
    match result {
        Ok(done) => {
            if let Err(e) = emit(&done.out, &done.content) {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
            let manifest = RunManifest {
                tool: "qsmp".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                command: name.into(),
                argv: argv.to_vec(),
                master_seed: done.seed,
                started_unix_ms: started,
                finished_unix_ms: unix_ms(),
            };
            if let Err(e) = write_manifest(&done, &manifest) {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
            done.exit
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidConfig(_)
        | Error::IndexOutOfRange(_)
        | Error::EmptyMatrix { .. }
        | Error::BadEntryCount { .. }
        | Error::NonFiniteEntry { .. }
        | Error::NonBooleanEntry { .. }
        | Error::NotSquare { .. }
        | Error::DimensionMismatch(_)
        | Error::DecompositionMismatch(_) => EXIT_INPUT,
        Error::Consistency { .. } => EXIT_CONSISTENCY,
        Error::ValidationExhausted(_) => EXIT_VALIDATION,
        _ => EXIT_INTERNAL,
    }
}

fn unix_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_millis() as u64
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(Error::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_manifest(done: &CmdDone, manifest: &RunManifest) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    match (&done.manifest, &done.out) {
        (Some(path), _) => fs::write(path, text + "\n")?,
        (None, Some(out)) => {
            let mut name = out.file_name().unwrap_or_default().to_os_string();
            name.push(".manifest.json");
            fs::write(out.with_file_name(name), text + "\n")?;
        }
        (None, None) => eprintln!("{}", serde_json::to_string(manifest).expect("manifest")),
    }
    Ok(())
}

// ---- analyze ---------------------------------------------------------------

/// Norm/rank analysis emitted for non-boolean real matrices, which have no
/// generator certificates.
#[derive(Debug, Serialize)]
struct RealMatrixAnalysis {
    rows: usize,
    cols: usize,
    boolean: bool,
    rank: usize,
    column_norm: f64,
    row_norm: f64,
    frobenius_norm: f64,
    operator_norm: f64,
    trace_norm: f64,
    rcw_lower_bound: Option<f64>,
}

fn run_analyze(args: &AnalyzeArgs) -> Result<CmdDone> {
    let text = fs::read_to_string(&args.matrix)?;
    let real = RealMatrix::parse(&text)?;
    let content = if real.is_boolean() && real.is_square() {
        let family = vec![BooleanMatrix::new(real)?];
        let mut report = width_report(&family)?;
        if let Some(out) = &args.out {
            report.certificate_files = write_certificates(out, &report.certificates)?;
        }
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        let analysis = RealMatrixAnalysis {
            rows: real.rows(),
            cols: real.cols(),
            boolean: real.is_boolean(),
            rank: svd::numeric_rank(&real, svd::DEFAULT_RANK_TOL)?,
            column_norm: real.column_norm(),
            row_norm: real.row_norm(),
            frobenius_norm: real.frobenius_norm(),
            operator_norm: svd::operator_norm(&real)?,
            trace_norm: svd::trace_norm(&real)?,
            rcw_lower_bound: if real.is_square() {
                Some(rcw_lower_bound(&real)?)
            } else {
                None
            },
        };
        serde_json::to_string_pretty(&analysis).expect("analysis serializes") + "\n"
    };
    Ok(CmdDone {
        content,
        exit: EXIT_OK,
        out: args.out.clone(),
        manifest: args.manifest.clone(),
        seed: None,
    })
}

fn write_certificates(
    out: &Path,
    certificates: &BTreeMap<String, Decomposition>,
) -> Result<BTreeMap<String, Vec<String>>> {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy().to_string();
    let mut refs = BTreeMap::new();
    for (method, d) in certificates {
        let mut files = Vec::new();
        for (l, (e, f)) in d.factors().iter().enumerate() {
            for (tag, m) in [("E", e), ("F", f)] {
                let name = format!("{stem}-{method}-{tag}{l}.mat");
                let path = out.with_file_name(&name);
                fs::write(&path, m.to_text())?;
                files.push(name);
            }
        }
        refs.insert(method.clone(), files);
    }
    Ok(refs)
}

// ---- simulate --------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompMethod {
    Trivial,
    Svd,
    TrivialBalanced,
    SvdBalanced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSpec {
    Basic,
    Decomposition(DecompMethod),
}

impl FromStr for ModeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" => Ok(Self::Basic),
            "decomp:trivial" => Ok(Self::Decomposition(DecompMethod::Trivial)),
            "decomp:svd" => Ok(Self::Decomposition(DecompMethod::Svd)),
            "decomp:trivial-balanced" => {
                Ok(Self::Decomposition(DecompMethod::TrivialBalanced))
            }
            "decomp:svd-balanced" => Ok(Self::Decomposition(DecompMethod::SvdBalanced)),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode {other:?}; expected basic or decomp:METHOD"
            ))),
        }
    }
}

/// Parse "n,L,t" equality parameters.
pub fn parse_eq_spec(s: &str, seed: u64) -> Result<EqualityParams> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidConfig(format!("--eq expects n,L,t, got {s:?}")));
    }
    let n = parts[0].parse().map_err(|_| Error::Parse(format!("bad n in --eq {s:?}")))?;
    let coin_count =
        parts[1].parse().map_err(|_| Error::Parse(format!("bad L in --eq {s:?}")))?;
    let hash_bits =
        parts[2].parse().map_err(|_| Error::Parse(format!("bad t in --eq {s:?}")))?;
    Ok(EqualityParams { n, coin_count, hash_bits, seed })
}

fn build_decomposition(family: &[BooleanMatrix], method: DecompMethod) -> Result<Decomposition> {
    Ok(match method {
        DecompMethod::Trivial => trivial_decomposition(family)?,
        DecompMethod::Svd => svd_decomposition(family)?,
        DecompMethod::TrivialBalanced => {
            balance_decomposition(&trivial_decomposition(family)?, DEFAULT_BALANCE_ITERS)
        }
        DecompMethod::SvdBalanced => {
            balance_decomposition(&svd_decomposition(family)?, DEFAULT_BALANCE_ITERS)
        }
    })
}

#[derive(Debug, Serialize)]
struct PairResult {
    x: usize,
    y: usize,
    f: u8,
    p_acc: f64,
    copies: u64,
    empirical_error: f64,
    total_qubits: u64,
}

fn run_simulate(args: &SimulateArgs) -> Result<CmdDone> {
    let thresholds = CorrectnessThresholds::new(args.alpha0, args.alpha1)?;
    let protocol = match (&args.protocol, &args.eq) {
        (Some(path), None) => ClassicalSmp::parse(&fs::read_to_string(path)?)?,
        (None, Some(spec)) => {
            build_equality_protocol(&parse_eq_spec(spec, args.seed)?, &thresholds)?
        }
        _ => {
            return Err(Error::InvalidConfig(
                "exactly one of --protocol or --eq is required".into(),
            ))
        }
    };

    let target = match &args.target {
        Some(path) => {
            let t = TargetFunction::from_matrix(&BooleanMatrix::parse(&fs::read_to_string(
                path,
            )?)?)?;
            if t.n() != protocol.n() {
                return Err(Error::DimensionMismatch(format!(
                    "target has n = {}, protocol has n = {}",
                    t.n(),
                    protocol.n()
                )));
            }
            Some(t)
        }
        None if args.eq.is_some() => Some(TargetFunction::equality(protocol.n())),
        None => None,
    };

    let mode: ModeSpec = args.mode.parse()?;
    let decomposition = match mode {
        ModeSpec::Basic => None,
        ModeSpec::Decomposition(method) => {
            let padded = protocol.pad_to_square();
            Some(build_decomposition(padded.referee_family(), method)?)
        }
    };
    let mut cfg = match &decomposition {
        None => RefereeConfig::basic(&protocol, args.alpha0, args.alpha1, args.delta)?,
        Some(d) => RefereeConfig::for_decomposition(d, args.alpha0, args.alpha1, args.delta)?,
    };
    if let Some(copies) = args.copies {
        cfg = cfg.with_copies(copies);
    }
    if args.trials == 0 {
        return Err(Error::InvalidConfig("--trials must be at least 1".into()));
    }

    let pairs: Vec<(usize, usize)> = if args.all_pairs {
        let m = protocol.input_count();
        (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).collect()
    } else {
        match (args.x, args.y) {
            (Some(x), Some(y)) => vec![(x, y)],
            _ => {
                return Err(Error::InvalidConfig(
                    "provide --x and --y, or --all-pairs".into(),
                ))
            }
        }
    };

    let mut rows = Vec::new();
    for (idx, &(x, y)) in pairs.iter().enumerate() {
        let p_acc = protocol.acceptance_probability(x, y)?;
        let f = match &target {
            Some(t) => t.value(x, y),
            None => {
                if p_acc >= args.alpha1 {
                    1
                } else if p_acc <= args.alpha0 {
                    0
                } else {
                    eprintln!(
                        "note: pair ({x}, {y}) has p_acc = {p_acc} outside the promise, skipped"
                    );
                    continue;
                }
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(idx as u64);
        let fp_mode = match &decomposition {
            None => FingerprintMode::Basic,
            Some(d) => FingerprintMode::Decomposition(d),
        };
        let mut wrong = 0u64;
        let mut stats = None;
        for _ in 0..args.trials {
            let s = simulate_quantum_protocol(&protocol, fp_mode, x, y, &cfg, &mut rng)?;
            if s.output != Some(f) {
                wrong += 1;
            }
            stats = Some(s);
        }
        let stats = stats.expect("at least one trial");
        rows.push(PairResult {
            x,
            y,
            f,
            p_acc,
            copies: stats.copies,
            empirical_error: wrong as f64 / args.trials as f64,
            total_qubits: stats.total_qubits,
        });
    }

    let content = if args.json {
        serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
    } else {
        let mut csv = String::from("x,y,f,p_acc,copies,empirical_error,total_qubits\n");
        for r in &rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                r.x, r.y, r.f, r.p_acc, r.copies, r.empirical_error, r.total_qubits
            );
        }
        csv
    };
    Ok(CmdDone {
        content,
        exit: EXIT_OK,
        out: args.out.clone(),
        manifest: args.manifest.clone(),
        seed: Some(args.seed),
    })
}

// ---- fact1 -----------------------------------------------------------------

#[derive(Debug, Serialize)]
struct Fact1Output {
    #[serde(flatten)]
    report: crate::width::IpLowerBoundReport,
    best_rcw_upper: f64,
    pass: bool,
}

fn run_fact1(args: &Fact1Args) -> Result<CmdDone> {
    let report = ip_lower_bound_check(args.n)?;
    let width = width_report(&[ip_matrix(args.n)?])?;
    let pass =
        report.all_checks_pass() && report.rcw_lower_bound <= width.best_rcw_upper + 1e-6;
    let out = Fact1Output { report, best_rcw_upper: width.best_rcw_upper, pass };

    let content = if args.json {
        serde_json::to_string_pretty(&out).expect("fact1 serializes") + "\n"
    } else {
        let r = &out.report;
        let mut s = String::new();
        let _ = writeln!(s, "n                         : {}", r.n);
        let _ = writeln!(s, "M                         : {}", r.m);
        let _ = writeln!(
            s,
            "D_pm^2 == M*I (exact)     : {}",
            if r.hadamard_identity { "yes" } else { "NO" }
        );
        let _ = writeln!(
            s,
            "trace_norm(D_pm)          : {:.6}  (expected M^1.5 = {:.6})",
            r.trace_norm_signed, r.trace_norm_signed_expected
        );
        let _ = writeln!(
            s,
            "trace_norm(D)             : {:.6}  (lower bound (M^1.5-M)/2 = {:.6})",
            r.trace_norm_ip, r.trace_norm_ip_lower
        );
        let _ = writeln!(s, "rcw lower bound tn(D)/M   : {:.6}", r.rcw_lower_bound);
        let _ = writeln!(s, "fact bound (sqrt(M)-1)/2  : {:.6}", r.fact_lower_bound);
        let _ = writeln!(s, "best rcw upper bound      : {:.6}", out.best_rcw_upper);
        let _ = writeln!(s, "lower <= upper            : {}", if out.pass { "PASS" } else { "FAIL" });
        s
    };
    Ok(CmdDone {
        content,
        exit: if out.pass { EXIT_OK } else { EXIT_CONSISTENCY },
        out: args.out.clone(),
        manifest: args.manifest.clone(),
        seed: None,
    })
}

// ---- replay ----------------------------------------------------------------

fn run_replay(args: &ReplayArgs) -> i32 {
    let manifest: RunManifest = match fs::read_to_string(&args.manifest)
        .map_err(Error::from)
        .and_then(|text| {
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("manifest: {e}")))
        }) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    if manifest.argv.first().map(String::as_str) == Some("replay") {
        eprintln!("error: refusing to replay a replay");
        return EXIT_INPUT;
    }
    run_argv(&manifest.argv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_spec_parses() {
        assert_eq!(ModeSpec::from_str("basic").unwrap(), ModeSpec::Basic);
        assert_eq!(
            ModeSpec::from_str("decomp:svd").unwrap(),
            ModeSpec::Decomposition(DecompMethod::Svd)
        );
        assert_eq!(
            ModeSpec::from_str("decomp:trivial-balanced").unwrap(),
            ModeSpec::Decomposition(DecompMethod::TrivialBalanced)
        );
        assert!(ModeSpec::from_str("gate-level").is_err());
    }

    #[test]
    fn eq_spec_parses() {
        let p = parse_eq_spec("4,64,3", 7).unwrap();
        assert_eq!(p.n, 4);
        assert_eq!(p.coin_count, 64);
        assert_eq!(p.hash_bits, 3);
        assert_eq!(p.seed, 7);
        assert!(parse_eq_spec("4,64", 0).is_err());
        assert!(parse_eq_spec("a,b,c", 0).is_err());
    }

    #[test]
    fn cli_arg_shapes() {
        let cli = Cli::try_parse_from(["qsmp", "fact1", "--n", "2", "--json"]).unwrap();
        match cli.command {
            Command::Fact1(f) => {
                assert_eq!(f.n, 2);
                assert!(f.json);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["qsmp", "simulate", "--eq", "2,4,1", "--all-pairs", "--x", "1"])
            .is_err());
    }
}
