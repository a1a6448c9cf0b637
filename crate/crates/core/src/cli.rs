//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a mathematical violation was found (details are
//! in the output), 2 usage or size error. Output is JSON lines or CSV and is
//! fully buffered before it is written, so equal inputs give equal bytes.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{frobenius_descent, scan_bounds, verify_descent, BoundsError};
use crate::curve::{scan_corpus, CurvePoint, CurveRecord};
use crate::dweight::{check_qminus1_lemma, DParams, DTable, DEFAULT_STATE_CAP};
use crate::field::is_prime;
use crate::funcfield::{make_coord, make_line, Coord, TrackedFunction};
use crate::pairing::{DhInstance, DhTraceJson, PairingContext};

/// Default bound on q^k - 1.
pub const DEFAULT_CAP: u64 = 1 << 40;

#[derive(Debug, Parser)]
#[command(
    name = "pairlab",
    version,
    about = "Small pairing-friendly curves, the reduced Tate pairing and digit-weight bounds"
)]
pub struct Cli {
    /// Upper bound on q^k - 1 for every field and digit table.
    #[arg(long, global = true, env = "PAIRLAB_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Seed for sampled values.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List pairing-friendly curve records.
    Scan(ScanArgs),
    /// Digit weight D(a) modulo q^k - 1, for one residue or all of them.
    Dweight(DweightArgs),
    /// Solve a Diffie-Hellman instance by inverting the pairing twice.
    DhDemo(DhArgs),
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Comma-separated primes q >= 5.
    #[arg(long = "q", value_delimiter = ',', num_args = 0..)]
    pub q_list: Vec<u64>,
    #[arg(long = "kmax", default_value_t = 4)]
    pub k_max: usize,
    #[arg(long = "rmin", default_value_t = 3)]
    pub r_min: u64,
}

#[derive(Debug, Args)]
pub struct DweightArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: usize,
    /// Single residue; omit for the full table.
    #[arg(long)]
    pub a: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CurveSelector {
    /// `q,a,b` for y^2 = x^3 + ax + b over F_q, or `toy` for 5,0,1.
    #[arg(long, default_value = "toy")]
    pub curve: String,
    /// Prime r | #E(F_q); defaults to the largest admissible one.
    #[arg(long)]
    pub r: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DhArgs {
    #[command(flatten)]
    pub curve: CurveSelector,
    #[arg(long = "a")]
    pub secret_a: Option<u64>,
    #[arg(long = "b")]
    pub secret_b: Option<u64>,
    /// Draw A and B from the seeded generator.
    #[arg(long)]
    pub random: bool,
    /// Run every (A, B) in [0, r)^2.
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// F = f^d on the F_q-rational points (including G1) for the Frobenius-descent F.
    Descent(DescentArgs),
    /// Bound reports for the reduced Tate family over a corpus.
    Bounds(ScanArgs),
    /// D((q-1)a) <= 2 D(a) over every residue.
    Lemma(LemmaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionChoice {
    X,
    Y,
    /// line(P1, [2]P1)
    Line,
    /// line(P2, [2]P2), coefficients outside F_q
    Line2,
}

#[derive(Debug, Args)]
pub struct DescentArgs {
    #[command(flatten)]
    pub curve: CurveSelector,
    #[arg(long, value_enum, default_value = "x")]
    pub f: FunctionChoice,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u64>,
    /// Additional exponents drawn from the seeded generator.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: usize,
}

/// Error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Captured result of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                stdout: String::new(),
                stderr: e.render().to_string(),
            };
        }
    };
    let mut out = String::new();
    let mut err = String::new();
    let code = match execute(&cli, &mut out, &mut err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &out) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return Outcome {
                code: 2,
                stdout: String::new(),
                stderr: err,
            };
        }
        out.clear();
    }
    Outcome {
        code,
        stdout: out,
        stderr: err,
    }
}

fn execute(cli: &Cli, out: &mut String, err: &mut String) -> Result<i32, Failure> {
    match &cli.command {
        Command::Scan(args) => cmd_scan(cli, args, out),
        Command::Dweight(args) => cmd_dweight(cli, args, out),
        Command::DhDemo(args) => cmd_dh_demo(cli, args, out),
        Command::Verify(VerifyCommand::Descent(args)) => cmd_verify_descent(cli, args, out, err),
        Command::Verify(VerifyCommand::Bounds(args)) => cmd_verify_bounds(cli, args, out, err),
        Command::Verify(VerifyCommand::Lemma(args)) => cmd_verify_lemma(cli, args, out),
    }
}

fn json_line<T: Serialize>(out: &mut String, value: &T) {
    out.push_str(&to_json(value));
    out.push('\n');
}

fn csv_table<T: Serialize>(rows: impl IntoIterator<Item = T>, header_if_empty: &[&str]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut any = false;
    for row in rows {
        w.serialize(row).expect("serializable row");
        any = true;
    }
    if !any {
        w.write_record(header_if_empty).expect("header");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn validate_q_list(q_list: &[u64]) -> Result<(), Failure> {
    for &q in q_list {
        if q < 5 || !is_prime(q) {
            return Err(usage(format!("q = {q} must be a prime >= 5")));
        }
    }
    Ok(())
}

const RECORD_HEADER: [&str; 7] = ["q", "a", "b", "n", "r", "k", "d"];

fn cmd_scan(cli: &Cli, args: &ScanArgs, out: &mut String) -> Result<i32, Failure> {
    validate_q_list(&args.q_list)?;
    let corpus = scan_corpus(&args.q_list, args.k_max, args.r_min, cli.cap);
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => corpus.iter().for_each(|r| json_line(out, r)),
        Format::Csv => out.push_str(&csv_table(&corpus, &RECORD_HEADER)),
    }
    Ok(0)
}

#[derive(Serialize)]
struct DweightRow {
    a: u64,
    #[serde(rename = "D")]
    weight: u64,
    witness_plus: String,
    witness_minus: String,
}

#[derive(Serialize)]
struct DweightJson<'a> {
    a: u64,
    #[serde(rename = "D")]
    weight: u64,
    witness_plus: &'a [u64],
    witness_minus: &'a [u64],
}

fn digits_field(d: &[u64]) -> String {
    d.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn digit_table(cli: &Cli, q: u64, k: usize) -> Result<DTable, Failure> {
    let params = DParams::with_cap(q, k, cli.cap.min(DEFAULT_STATE_CAP))
        .map_err(|e| usage(e.to_string()))?;
    Ok(DTable::build(params))
}

fn cmd_dweight(cli: &Cli, args: &DweightArgs, out: &mut String) -> Result<i32, Failure> {
    let table = digit_table(cli, args.q, args.k)?;
    let residues: Vec<u64> = match args.a {
        Some(a) => vec![a],
        None => (0..table.params().modulus()).collect(),
    };
    let witnesses: Vec<_> = residues.iter().map(|&a| (a, table.witness(a))).collect();
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows = witnesses.iter().map(|(a, w)| DweightRow {
                a: *a,
                weight: w.weight,
                witness_plus: digits_field(&w.a_digits),
                witness_minus: digits_field(&w.b_digits),
            });
            out.push_str(&csv_table(
                rows,
                &["a", "D", "witness_plus", "witness_minus"],
            ));
        }
        Format::Json => {
            for (a, w) in &witnesses {
                json_line(
                    out,
                    &DweightJson {
                        a: *a,
                        weight: w.weight,
                        witness_plus: &w.a_digits,
                        witness_minus: &w.b_digits,
                    },
                );
            }
        }
    }
    Ok(0)
}

fn select_record(cli: &Cli, sel: &CurveSelector) -> Result<CurveRecord, Failure> {
    let spec = if sel.curve == "toy" {
        "5,0,1"
    } else {
        sel.curve.as_str()
    };
    let parts: Vec<u64> = spec
        .split(',')
        .map(|s| s.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--curve expects q,a,b or toy, got {:?}", sel.curve)))?;
    let [q, a, b] = parts[..] else {
        return Err(usage(format!(
            "--curve expects q,a,b or toy, got {:?}",
            sel.curve
        )));
    };
    validate_q_list(&[q])?;
    CurveRecord::for_curve(q, a, b, sel.r, cli.cap)
        .map_err(|e| usage(format!("invalid record: {e}")))
}

fn context(cli: &Cli, sel: &CurveSelector) -> Result<PairingContext, Failure> {
    let record = select_record(cli, sel)?;
    PairingContext::new(&record).map_err(|e| usage(format!("cannot build pairing context: {e}")))
}

#[derive(Serialize)]
struct DhCsvRow {
    q: u64,
    a: u64,
    b: u64,
    r: u64,
    k: usize,
    secret_a: u64,
    secret_b: u64,
    z: String,
    #[serde(rename = "V")]
    v: String,
    w: String,
    answer: String,
    ground_truth: String,
    #[serde(rename = "match")]
    matched: bool,
}

fn cmd_dh_demo(cli: &Cli, args: &DhArgs, out: &mut String) -> Result<i32, Failure> {
    let ctx = context(cli, &args.curve)?;
    let r = ctx.r();
    let pairs: Vec<(u64, u64)> = if args.sweep {
        (0..r).flat_map(|a| (0..r).map(move |b| (a, b))).collect()
    } else if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        vec![(rng.gen_range(0..r), rng.gen_range(0..r))]
    } else {
        match (args.secret_a, args.secret_b) {
            (Some(a), Some(b)) => vec![(a, b)],
            _ => return Err(usage("dh-demo needs --a and --b, --random, or --sweep")),
        }
    };
    let mut traces = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let inst = DhInstance::from_scalars(&ctx, 1, a, b).map_err(|e| usage(e.to_string()))?;
        let trace = ctx.solve_dh(&inst).map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?;
        traces.push(DhTraceJson::new(&ctx, &inst, &trace, a, b));
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => traces.iter().for_each(|t| json_line(out, t)),
        Format::Csv => {
            let rows = traces.iter().map(|t| DhCsvRow {
                q: t.q,
                a: t.a,
                b: t.b,
                r: t.r,
                k: t.k,
                secret_a: t.secret_a,
                secret_b: t.secret_b,
                z: to_json(&t.z),
                v: to_json(&t.v),
                w: to_json(&t.w),
                answer: to_json(&t.answer),
                ground_truth: to_json(&t.ground_truth),
                matched: t.matched,
            });
            out.push_str(&csv_table(rows, &[]));
        }
    }
    Ok(if traces.iter().all(|t| t.matched) {
        0
    } else {
        1
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn build_function(
    ctx: &PairingContext,
    choice: FunctionChoice,
) -> Result<TrackedFunction, Failure> {
    let e = ctx.curve();
    let line_through = |p: &CurvePoint| {
        make_line(e, p, &e.double(p)).map_err(|err| usage(format!("cannot build line: {err}")))
    };
    match choice {
        FunctionChoice::X => Ok(make_coord(e, Coord::X)),
        FunctionChoice::Y => Ok(make_coord(e, Coord::Y)),
        FunctionChoice::Line => line_through(ctx.p1()),
        FunctionChoice::Line2 => line_through(ctx.p2()),
    }
}

#[derive(Serialize)]
struct DescentLine {
    d: u64,
    #[serde(rename = "D_d")]
    d_weight: u64,
    deg_f: u64,
    claimed_bound: u64,
    actual_deg: u64,
    strict_drop: bool,
    g1_checked: usize,
    rational_checked: usize,
    skipped: usize,
    mismatches: usize,
    passed: bool,
}

fn cmd_verify_descent(
    cli: &Cli,
    args: &DescentArgs,
    out: &mut String,
    err: &mut String,
) -> Result<i32, Failure> {
    let ctx = context(cli, &args.curve)?;
    let f = build_function(&ctx, args.f)?;
    let table = digit_table(cli, ctx.record().q, ctx.record().k)?;
    let m = table.params().modulus();
    let mut exponents = args.d.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    exponents.extend((0..args.samples).map(|_| rng.gen_range(1..=m)));
    if exponents.is_empty() {
        exponents.push(ctx.d());
    }
    // Frobenius fixes every F_q-rational point, so the identity is checked on
    // all of E(F_q); G1 is a subset.
    let rational: Vec<CurvePoint> = ctx
        .base_curve()
        .enumerate_points()
        .map_err(|e| usage(e.to_string()))?
        .iter()
        .map(|p| ctx.curve().lift_point(p))
        .collect();
    let mut lines = Vec::new();
    for d in exponents {
        let res = frobenius_descent(&f, d, &table).map_err(|e| usage(e.to_string()))?;
        let report = match verify_descent(&f, &res, &rational) {
            Ok(rep) => rep,
            Err(BoundsError::Inconclusive) => {
                return Err(usage(format!(
                    "inconclusive: every F_q-rational point is in the support of f = {:?}",
                    args.f
                )))
            }
            Err(e) => return Err(usage(e.to_string())),
        };
        let g1_checked = ctx
            .g1()
            .iter()
            .filter(|p| !report.skipped.contains(p))
            .count();
        if res.strict_drop() {
            let _ = writeln!(
                err,
                "note: d = {d}: deg(F) = {} < deg(f)·D(d) = {} after divisor cancellation",
                res.actual_deg, res.claimed_bound
            );
        }
        lines.push(DescentLine {
            d,
            d_weight: res.witness.weight,
            deg_f: f.degree(),
            claimed_bound: res.claimed_bound,
            actual_deg: res.actual_deg,
            strict_drop: res.strict_drop(),
            g1_checked,
            rational_checked: report.checked,
            skipped: report.skipped.len(),
            mismatches: report.mismatches.len(),
            passed: report.passed() && res.actual_deg <= res.claimed_bound,
        });
    }
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => lines.iter().for_each(|l| json_line(out, l)),
        Format::Csv => out.push_str(&csv_table(&lines, &[])),
    }
    Ok(if lines.iter().all(|l| l.passed) { 0 } else { 1 })
}

fn cmd_verify_bounds(
    cli: &Cli,
    args: &ScanArgs,
    out: &mut String,
    err: &mut String,
) -> Result<i32, Failure> {
    validate_q_list(&args.q_list)?;
    let corpus = scan_corpus(&args.q_list, args.k_max, args.r_min, cli.cap);
    let scan =
        scan_bounds(&corpus, cli.cap.min(DEFAULT_STATE_CAP)).map_err(|e| usage(e.to_string()))?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let header = [
                "q",
                "a",
                "b",
                "r",
                "k",
                "d",
                "deg_f",
                "D_d",
                "c",
                "d1",
                "D_d1",
                "prop2_lhs",
                "prop3_lhs",
                "corollary_lhs",
                "prop2_pass",
                "prop3_pass",
                "corollary_pass",
            ];
            out.push_str(&csv_table(
                scan.reports.iter().map(|r| r.csv_row()),
                &header,
            ));
        }
        Format::Json => scan
            .reports
            .iter()
            .for_each(|r| json_line(out, &r.csv_row())),
    }
    let ratio = |v: Option<(u128, u64)>| v.map_or("n/a".to_string(), |(n, d)| format!("{n}/{d}"));
    let violations = scan.violations().count();
    let _ = writeln!(
        err,
        "records: {}, violations: {violations}, min 6·D(d)·deg(f)/r: {}, min 12·D(d1)·deg(f)/r: {}",
        scan.reports.len(),
        ratio(scan.min_prop3_ratio),
        ratio(scan.min_corollary_ratio)
    );
    Ok(if violations == 0 { 0 } else { 1 })
}

fn cmd_verify_lemma(cli: &Cli, args: &LemmaArgs, out: &mut String) -> Result<i32, Failure> {
    let table = digit_table(cli, args.q, args.k)?;
    let report = check_qminus1_lemma(&table);
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => json_line(out, &report),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                q: u64,
                k: usize,
                residues_checked: u64,
                worst_residue: u64,
                worst_lhs: u64,
                worst_d: u64,
                ratio_two_count: u64,
                violations: String,
            }
            let row = Row {
                q: report.q,
                k: report.k,
                residues_checked: report.residues_checked,
                worst_residue: report.worst_residue,
                worst_lhs: report.worst_lhs,
                worst_d: report.worst_d,
                ratio_two_count: report.ratio_two_count,
                violations: digits_field(&report.violations),
            };
            out.push_str(&csv_table([row], &[]));
        }
    }
    Ok(if report.passed() { 0 } else { 1 })
}
