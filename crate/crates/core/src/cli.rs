//! The `massey` command line: argument parsing, command runners and the
//! JSON reports they print.
//!
//! Every report is one JSON object whose keys appear in a fixed order:
//! `command`, `args`, the command-specific body, `exit_code`, and finally
//! `timing`. Everything before `timing` is a function of the arguments.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde::{Serialize, Serializer};

use crate::arith::{ExactRational, SquareClass};
use crate::error::{domain, Error, Result};
use crate::ffield::{sweep, FqField, SweepReport};
use crate::groupcoh::{
    brute_force_massey, triple_massey, u4_lift_exists, BruteForceMassey, Cochain1, Cochain2, FiniteGroup,
    MasseyResult, MasseyStatus, U4Element,
};
use crate::masseyq::{
    certify_point_with, decide_massey_q, massey_defined_local, LocalVerdict, MasseyVerdict, SearchOptions,
    SearchOutcome, SquareClassTriple,
};
use crate::places::Place;
use crate::torsor::{CheckResult, TorsorCheck};

/// Environment variable fixing the worker-thread count.
pub const THREADS_ENV: &str = "MASSEY_THREADS";

/// Field orders accepted by `ff-sweep`.
pub const SWEEP_FIELDS: [u32; 6] = [3, 5, 7, 9, 11, 13];

pub const DEFAULT_HEIGHT: u64 = 200;

pub fn ser_rational<S: Serializer>(v: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_rational_array<S: Serializer>(v: &[ExactRational; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    strings.serialize(s)
}

#[derive(Parser, Debug)]
#[command(name = "massey", version, about = "Decide and certify vanishing of mod-2 triple Massey products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Decide whether <a,b,c> over Q is defined and vanishes.
    Decide {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// Largest max|y_i| for the certificate search.
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
        /// Skip the certificate search.
        #[arg(long)]
        no_certificate: bool,
        /// Stop the certificate search after this many milliseconds.
        #[arg(long)]
        time_budget_ms: Option<u64>,
    },
    /// Hilbert symbols and local solvability at one place.
    Local {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// `inf` or a prime.
        #[arg(long)]
        place: String,
    },
    /// Exhaustive finite-field checks over F_q.
    FfSweep { q: u32 },
    /// Massey product of three characters of a finite group.
    MasseyGroup {
        groupfile: PathBuf,
        a: String,
        b: String,
        c: String,
        /// Cross-check against every defining system.
        #[arg(long)]
        brute_force: bool,
        /// Cross-check against the existence of a lift to U4.
        #[arg(long)]
        dwyer: bool,
    },
    /// Symbolic checks of the torsor construction.
    VerifyTorsor {
        /// Run the deliberately broken variants; each must fail.
        #[arg(long)]
        mutate: bool,
        /// Run a single check.
        #[arg(long, value_parser = parse_check)]
        only: Option<TorsorCheck>,
    },
}

fn parse_check(s: &str) -> std::result::Result<TorsorCheck, String> {
    TorsorCheck::from_str(s).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    args: &'a Command,
    #[serde(flatten)]
    body: T,
    exit_code: i32,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct ErrorBody {
    error: ErrorInfo,
}

#[derive(Serialize)]
struct ErrorInfo {
    kind: &'static str,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Unfactored(_) => "unfactored",
        Error::Size(_) => "size",
        Error::Parse(_) => "parse",
    }
}

fn parse_rational(s: &str) -> Result<ExactRational> {
    let v = ExactRational::from_str(s.trim()).map_err(|_| Error::Parse(format!("`{s}` is not a rational number")))?;
    if v == ExactRational::from_integer(0.into()) {
        return Err(domain("inputs must be nonzero"));
    }
    Ok(v)
}

#[derive(Serialize)]
struct ReducedInputs {
    square_classes: [SquareClass; 3],
    triple: SquareClassTriple,
}

fn reduce_inputs(a: &str, b: &str, c: &str) -> Result<ReducedInputs> {
    let values = [parse_rational(a)?, parse_rational(b)?, parse_rational(c)?];
    let (triple, square_classes) = SquareClassTriple::reduce(&values)?;
    Ok(ReducedInputs { square_classes, triple })
}

#[derive(Serialize)]
struct DecideBody {
    inputs: ReducedInputs,
    verdict: MasseyVerdict,
    search: Option<SearchOutcome>,
}

fn run_decide(
    a: &str,
    b: &str,
    c: &str,
    height: u64,
    no_certificate: bool,
    budget: Option<u64>,
) -> Result<(DecideBody, i32)> {
    let inputs = reduce_inputs(a, b, c)?;
    let mut verdict = decide_massey_q(&inputs.triple)?;
    let search = if verdict.vanishes && !no_certificate {
        let opts = SearchOptions {
            height,
            deadline: budget.map(|ms| Instant::now() + Duration::from_millis(ms)),
        };
        let outcome = certify_point_with(&inputs.triple, &opts);
        verdict.certificate = outcome.point.clone();
        Some(outcome)
    } else {
        None
    };
    let code = if verdict.vanishes { 0 } else { 1 };
    Ok((DecideBody { inputs, verdict, search }, code))
}

#[derive(Serialize)]
struct LocalBody {
    inputs: ReducedInputs,
    local: LocalVerdict,
}

fn run_local(a: &str, b: &str, c: &str, place: &str) -> Result<(LocalBody, i32)> {
    let place = Place::from_str(place)?;
    let inputs = reduce_inputs(a, b, c)?;
    let local = massey_defined_local(&inputs.triple, place);
    let code = if local.solvable { 0 } else { 1 };
    Ok((LocalBody { inputs, local }, code))
}

#[derive(Serialize)]
struct SweepCheck {
    name: &'static str,
    checked: usize,
    passed: bool,
}

#[derive(Serialize)]
struct SweepBody {
    q: u32,
    checks: Vec<SweepCheck>,
    passed: bool,
    report: SweepReport,
}

fn run_ff_sweep(q: u32) -> Result<(SweepBody, i32)> {
    if !SWEEP_FIELDS.contains(&q) {
        // let the field constructor explain characteristic 2 and non prime powers
        FqField::new(q)?;
        return Err(domain(format!("ff-sweep supports q in {SWEEP_FIELDS:?}, got {q}")));
    }
    let field = FqField::new(q)?;
    let report = sweep(&field)?;
    let checks = vec![
        SweepCheck {
            name: "norm-image-equality",
            checked: report.pairs_checked,
            passed: report.pair_mismatches.is_empty(),
        },
        SweepCheck {
            name: "points-exist",
            checked: report.triples_checked,
            passed: report.pointless_triples.is_empty(),
        },
    ];
    let passed = report.passed();
    Ok((SweepBody { q, checks, passed, report }, if passed { 0 } else { 1 }))
}

#[derive(Serialize)]
struct GroupInfo {
    name: String,
    order: usize,
    generators: Vec<usize>,
}

#[derive(Serialize)]
struct BruteForceCheck {
    #[serde(flatten)]
    result: BruteForceMassey,
    /// Brute-force classes equal the coset base + span(indeterminacy).
    coset_law_holds: bool,
    agrees: bool,
}

#[derive(Serialize)]
struct DwyerCheck {
    lift: Option<Vec<U4Element>>,
    agrees: bool,
}

#[derive(Serialize)]
struct MasseyGroupBody {
    group: GroupInfo,
    result: MasseyResult,
    value_classes: Vec<Cochain2>,
    brute_force: Option<BruteForceCheck>,
    dwyer: Option<DwyerCheck>,
    all_agree: bool,
}

fn run_massey_group(
    file: &PathBuf,
    a: &str,
    b: &str,
    c: &str,
    brute: bool,
    dwyer: bool,
) -> Result<(MasseyGroupBody, i32)> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", file.display())))?;
    let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let g = FiniteGroup::parse(&text)?.with_name(stem);
    let (a, b, c) = (Cochain1::parse(&g, a)?, Cochain1::parse(&g, b)?, Cochain1::parse(&g, c)?);
    let result = triple_massey(&g, &a, &b, &c)?;
    let value_classes: Vec<Cochain2> = result.value_classes(&g).into_iter().collect();
    let brute_force = if brute {
        let bf = brute_force_massey(&g, &a, &b, &c)?;
        let coset_law_holds = bf.classes.iter().eq(value_classes.iter());
        let agrees = bf.status == result.status && coset_law_holds;
        Some(BruteForceCheck { result: bf, coset_law_holds, agrees })
    } else {
        None
    };
    let dwyer = if dwyer {
        let lift = u4_lift_exists(&g, &a, &b, &c)?;
        let agrees = lift.is_some() == (result.status == MasseyStatus::ContainsZero);
        Some(DwyerCheck { lift, agrees })
    } else {
        None
    };
    let all_agree = brute_force.as_ref().is_none_or(|x| x.agrees) && dwyer.as_ref().is_none_or(|x| x.agrees);
    let group = GroupInfo { name: g.name().to_string(), order: g.order(), generators: g.generators().to_vec() };
    let body = MasseyGroupBody { group, result, value_classes, brute_force, dwyer, all_agree };
    Ok((body, if all_agree { 0 } else { 1 }))
}

#[derive(Serialize)]
struct TorsorLine {
    check: TorsorCheck,
    #[serde(flatten)]
    result: CheckResult,
    /// In mutation mode: the broken variant was detected.
    #[serde(skip_serializing_if = "Option::is_none")]
    mutation_caught: Option<bool>,
}

#[derive(Serialize)]
struct TorsorBody {
    mutate: bool,
    checks: Vec<TorsorLine>,
    all_ok: bool,
}

fn run_verify_torsor(mutate: bool, only: Option<TorsorCheck>) -> (TorsorBody, i32) {
    let selected: Vec<TorsorCheck> = match only {
        Some(c) => vec![c],
        None => TorsorCheck::ALL.to_vec(),
    };
    let checks: Vec<TorsorLine> = selected
        .into_iter()
        .map(|check| {
            let result = check.run(mutate);
            let mutation_caught = mutate.then_some(!result.passed);
            TorsorLine { check, result, mutation_caught }
        })
        .collect();
    let all_ok = checks.iter().all(|l| l.mutation_caught.unwrap_or(l.result.passed));
    let code = if all_ok { 0 } else { 1 };
    (TorsorBody { mutate, checks, all_ok }, code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decide { .. } => "decide",
        Command::Local { .. } => "local",
        Command::FfSweep { .. } => "ff-sweep",
        Command::MasseyGroup { .. } => "massey-group",
        Command::VerifyTorsor { .. } => "verify-torsor",
    }
}

/// A finished command: the printed report (pretty JSON with a trailing
/// newline), the exit code and, on failure, the error message.
#[derive(Debug, Clone)]
pub struct Execution {
    pub report: String,
    pub exit_code: i32,
    pub error: Option<String>,
}

pub fn execute(command: &Command) -> Execution {
    let start = Instant::now();
    let name = command_name(command);
    let render = |body: &dyn erased::Body, code: i32| -> String {
        let timing = Timing { elapsed_ms: start.elapsed().as_millis() };
        body.render(name, command, code, timing)
    };
    let outcome: Result<(Box<dyn erased::Body>, i32)> = match command {
        Command::Decide { a, b, c, height, no_certificate, time_budget_ms } => {
            run_decide(a, b, c, *height, *no_certificate, *time_budget_ms).map(erased::boxed)
        }
        Command::Local { a, b, c, place } => run_local(a, b, c, place).map(erased::boxed),
        Command::FfSweep { q } => run_ff_sweep(*q).map(erased::boxed),
        Command::MasseyGroup { groupfile, a, b, c, brute_force, dwyer } => {
            run_massey_group(groupfile, a, b, c, *brute_force, *dwyer).map(erased::boxed)
        }
        Command::VerifyTorsor { mutate, only } => Ok(erased::boxed(run_verify_torsor(*mutate, *only))),
    };
    match outcome {
        Ok((body, code)) => Execution { report: render(body.as_ref(), code), exit_code: code, error: None },
        Err(e) => {
            let body = ErrorBody { error: ErrorInfo { kind: error_kind(&e), message: e.to_string() } };
            Execution { report: render(&body, 2), exit_code: 2, error: Some(e.to_string()) }
        }
    }
}

/// Object-safe wrapper so every command's body goes through one envelope.
mod erased {
    use super::*;

    pub trait Body {
        fn render(&self, name: &str, args: &Command, code: i32, timing: Timing) -> String;
    }

    impl<T: Serialize> Body for T {
        fn render(&self, name: &str, args: &Command, code: i32, timing: Timing) -> String {
            let env = Envelope { command: name, args, body: self, exit_code: code, timing };
            let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
            s.push('\n');
            s
        }
    }

    pub fn boxed<T: Serialize + 'static>((body, code): (T, i32)) -> (Box<dyn Body>, i32) {
        (Box::new(body), code)
    }
}

/// Sizes the global worker pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| domain(format!("cannot size the worker pool: {e}")))
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("massey: {e}");
        return 2;
    }
    let run = execute(&cli.command);
    print!("{}", run.report);
    if let Some(msg) = run.error {
        eprintln!("massey: {msg}");
    }
    run.exit_code
}
