//! Batch command-line front end for the `condpoisson` library.
//!
//! Every subcommand is a thin adapter: parse inputs, make one library
//! call, print the result. Exit codes: 0 on success, 1 on domain errors
//! (zero-probability conditioning event, marching singularity,
//! unconstrained variable), 2 on usage or input-parse errors.
//!
//! Output comes in two formats. `--out table` (default) prints
//! human-readable `key = value` lines; `--out structured` prints a
//! stable machine-readable envelope: `condpoisson 1`, `command <name>`,
//! input-echo `<key> <value>` lines, then the result payload. The
//! payload of `rec guess` is the recurrence text block itself, which
//! `rec verify` and `rec eval` read back.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use condpoisson::genfun::{self, Rates};
use condpoisson::rational::{format_sig, parse_rational, to_f64, to_fraction_string};
use condpoisson::recurrence::{self, PRecurrence, RecurrenceSystem};
use condpoisson::{
    BigRational, Conditional, ConservationLaws, ConstraintMatrix, Error, ReactionNetwork,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Result<T> = std::result::Result<T, Error>;

/// Significant digits for all float renderings.
const FLOAT_DIGITS: usize = 10;
/// `rec guess` confirms every candidate on `0..=CONFIRM_HI` per row
/// before accepting it (guards against accidental fits).
const CONFIRM_HI: u32 = 14;
/// Number of random weight vectors tried by `crn lemma-check`.
const LEMMA_TRIALS: usize = 100;

#[derive(Parser)]
#[command(
    name = "condpoisson",
    version,
    about = "Exact conditional statistics of independent Poisson variables under linear \
             constraints, plus reaction-network analysis"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partition value F0(b): the rate-weighted count of solutions of A·X = b
    F0(ProblemArgs),
    /// Probability that A·X = b under independent Poisson variables
    Prob(ProblemArgs),
    /// Conditional factorial moment (one index) or product moment (two indices)
    Moment(MomentArgs),
    /// Conditional means, variances, covariance and correlation matrices
    Stats(ProblemArgs),
    /// Conditional correlation matrix only
    Cor(ProblemArgs),
    /// Verify, fit, and evaluate recurrences for F0
    #[command(subcommand)]
    Rec(RecCmd),
    /// Analyze reaction networks and their stationary distributions
    #[command(subcommand)]
    Crn(CrnCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact rationals (plus a float rendering where helpful)
    Exact,
    /// Floats only, 10 significant digits
    Float,
    /// Keep the rates symbolic (f0 and rec verify only)
    Symbolic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFmt {
    /// Human-readable `key = value` lines
    Table,
    /// Machine-readable envelope with input echo
    Structured,
}

#[derive(Args)]
struct ProblemArgs {
    /// Constraint matrix: inline rows like "1 0 1; 0 1 1", or a file path
    /// (one row per line)
    #[arg(long)]
    matrix: String,
    /// Poisson rates, comma-separated rationals: "1,2/3,5"
    #[arg(long)]
    lambda: Option<String>,
    /// Constraint vector b, comma-separated non-negative integers: "5,5"
    #[arg(long)]
    b: String,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = OutFmt::Table)]
    out: OutFmt,
}

#[derive(Args)]
struct MomentArgs {
    #[command(flatten)]
    base: ProblemArgs,
    /// Variable index (1-based), or two comma-separated indices for the
    /// mixed product moment E[X_i·X_j | A·X = b]
    #[arg(long)]
    j: String,
    /// Falling-factorial order r for E[X_j(X_j-1)···(X_j-r+1) | A·X = b]
    #[arg(long, default_value_t = 1)]
    r: u32,
}

#[derive(Subcommand)]
enum RecCmd {
    /// Check a recurrence file exactly on the window 0 <= b_i <= hi_i
    Verify {
        /// Recurrence file: `rec guess --out structured` output, a bare
        /// `rec ... endrec` block, or a `recsys` block
        file: PathBuf,
        /// Constraint matrix (defaults to the one recorded in the file)
        #[arg(long)]
        matrix: Option<String>,
        /// Rates (defaults to the ones recorded in the file)
        #[arg(long)]
        lambda: Option<String>,
        /// Upper corner of the verification window, comma-separated
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
    /// Fit minimal-order recurrences from exact F0 data at fixed rates
    Guess {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        lambda: String,
        /// Constraint row to march along (default: fit all rows, producing
        /// a complete marching system)
        #[arg(long)]
        direction: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
    /// March a recurrence system from the origin and report F0(b)
    Eval {
        /// Recurrence file (as for `rec verify`), needing one recurrence
        /// per constraint row
        file: PathBuf,
        #[arg(long)]
        b: String,
        /// Rates (defaults to the ones recorded in the file)
        #[arg(long)]
        lambda: Option<String>,
        /// Constraint matrix (defaults to the one recorded in the file)
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
}

#[derive(Subcommand)]
enum CrnCmd {
    /// Structural report: complexes, linkage classes, rank, deficiency
    Analyze {
        /// Reaction network file
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
    /// Complex-balance residuals (inflow minus outflow) at a steady state
    Balance {
        file: PathBuf,
        /// Steady-state concentrations, comma-separated positive rationals
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
    /// Conservation-law matrix of the network
    Conservation {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
    /// Check the product-form stationary distribution of the master
    /// equation on the box 0 <= N_s <= radius
    CmeCheck {
        file: PathBuf,
        #[arg(long)]
        x: String,
        /// Lattice truncation radius
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
    /// Check the complex-balance summation identity for random weights
    LemmaCheck {
        file: PathBuf,
        #[arg(long)]
        x: String,
        /// Seed for the random weight vectors
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutFmt::Table)]
        out: OutFmt,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::NullConditioningEvent(..)
                | Error::DiscreteSingularity(..)
                | Error::UnboundVariable(..) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::F0(p) => cmd_f0(&p),
        Cmd::Prob(p) => cmd_prob(&p),
        Cmd::Moment(m) => cmd_moment(&m),
        Cmd::Stats(p) => cmd_stats(&p),
        Cmd::Cor(p) => cmd_cor(&p),
        Cmd::Rec(r) => match r {
            RecCmd::Verify { file, matrix, lambda, b, mode, out } => {
                cmd_rec_verify(&file, matrix.as_deref(), lambda.as_deref(), &b, mode, out)
            }
            RecCmd::Guess { matrix, lambda, direction, max_order, max_degree, out } => {
                cmd_rec_guess(&matrix, &lambda, direction, max_order, max_degree, out)
            }
            RecCmd::Eval { file, b, lambda, matrix, out } => {
                cmd_rec_eval(&file, &b, lambda.as_deref(), matrix.as_deref(), out)
            }
        },
        Cmd::Crn(c) => match c {
            CrnCmd::Analyze { file, out } => cmd_crn_analyze(&file, out),
            CrnCmd::Balance { file, x, out } => cmd_crn_balance(&file, &x, out),
            CrnCmd::Conservation { file, out } => cmd_crn_conservation(&file, out),
            CrnCmd::CmeCheck { file, x, radius, out } => {
                cmd_crn_cme_check(&file, &x, radius, out)
            }
            CrnCmd::LemmaCheck { file, x, seed, out } => {
                cmd_crn_lemma_check(&file, &x, seed, out)
            }
        },
    }
}

// ---------------------------------------------------------------------------
// shared input/output plumbing
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

/// `--matrix` accepts an inline matrix or a path to a file of rows.
fn load_matrix(spec: &str) -> Result<ConstraintMatrix> {
    if Path::new(spec).is_file() {
        ConstraintMatrix::parse(&read_file(Path::new(spec))?)
    } else {
        ConstraintMatrix::parse(spec)
    }
}

fn load_network(path: &Path) -> Result<ReactionNetwork> {
    ReactionNetwork::parse(&read_file(path)?)
}

fn parse_u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad entry `{t}`: want a non-negative integer")))
        })
        .collect()
}

fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn require_lambda(opt: Option<&str>) -> Result<Vec<BigRational>> {
    let s = opt.ok_or_else(|| Error::invalid("--lambda is required for this mode"))?;
    parse_rational_list(s)
}

fn fsig(x: f64) -> String {
    format_sig(x, FLOAT_DIGITS)
}

fn ffloat(x: &BigRational) -> String {
    fsig(to_f64(x))
}

/// Accumulates output in either format. Tables print results as
/// `key = value`; structured mode prefixes an envelope and drops the
/// `=` so lines split cleanly on whitespace.
struct Out {
    structured: bool,
    buf: String,
}

impl Out {
    fn new(fmt: OutFmt, command: &str) -> Out {
        let mut o = Out { structured: fmt == OutFmt::Structured, buf: String::new() };
        if o.structured {
            let _ = writeln!(o.buf, "condpoisson 1");
            let _ = writeln!(o.buf, "command {command}");
        }
        o
    }

    /// Input echo; structured mode only.
    fn echo(&mut self, key: &str, value: impl std::fmt::Display) {
        if self.structured {
            let _ = writeln!(self.buf, "{key} {value}");
        }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        if self.structured {
            let _ = writeln!(self.buf, "{key} {value}");
        } else {
            let _ = writeln!(self.buf, "{key} = {value}");
        }
    }

    /// Verbatim payload (already line-formatted).
    fn raw(&mut self, text: &str) {
        self.buf.push_str(text);
        if !text.ends_with('\n') {
            self.buf.push('\n');
        }
    }

    fn print(self) {
        print!("{}", self.buf);
    }
}

// ---------------------------------------------------------------------------
// conditional-statistics subcommands
// ---------------------------------------------------------------------------

fn cmd_f0(p: &ProblemArgs) -> Result<()> {
    let a = load_matrix(&p.matrix)?;
    let b = parse_u32_list(&p.b)?;
    let mut out = Out::new(p.out, "f0");
    out.echo("matrix", &a);
    out.echo("b", &p.b);
    match p.mode {
        Mode::Symbolic => {
            let v = genfun::f0(&a, &Rates::Symbolic(a.cols()), &b)?.unwrap_poly();
            out.kv("f0", v);
        }
        Mode::Exact | Mode::Float => {
            let lam = require_lambda(p.lambda.as_deref())?;
            out.echo("lambda", p.lambda.as_deref().unwrap_or(""));
            let v = genfun::f0(&a, &Rates::numeric(lam)?, &b)?.unwrap_exact();
            if p.mode == Mode::Exact {
                out.kv("f0", to_fraction_string(&v));
            }
            out.kv("float", ffloat(&v));
        }
    }
    out.print();
    Ok(())
}

fn cmd_prob(p: &ProblemArgs) -> Result<()> {
    if p.mode == Mode::Symbolic {
        return Err(Error::invalid("prob has no symbolic mode"));
    }
    let a = load_matrix(&p.matrix)?;
    let b = parse_u32_list(&p.b)?;
    let lam = require_lambda(p.lambda.as_deref())?;
    let jp = genfun::prob(&a, &lam, &b)?;
    let mut out = Out::new(p.out, "prob");
    out.echo("matrix", &a);
    out.echo("lambda", p.lambda.as_deref().unwrap_or(""));
    out.echo("b", &p.b);
    if p.mode == Mode::Exact {
        out.kv("f0", to_fraction_string(&jp.f0));
        out.kv("rate_sum", to_fraction_string(&jp.rate_sum));
    }
    out.kv("probability", fsig(jp.float));
    out.print();
    Ok(())
}

fn cmd_moment(m: &MomentArgs) -> Result<()> {
    let p = &m.base;
    if p.mode == Mode::Symbolic {
        return Err(Error::invalid("moment has no symbolic mode"));
    }
    let a = load_matrix(&p.matrix)?;
    let b = parse_u32_list(&p.b)?;
    let lam = require_lambda(p.lambda.as_deref())?;
    let idx = parse_u32_list(&m.j)?;
    let cond = Conditional::new(&a, &lam, &b)?;
    let value = match idx.as_slice() {
        [j] => cond.factorial_moment(*j as usize, m.r)?,
        [i, j] => {
            if m.r != 1 {
                return Err(Error::invalid("--r only applies to single-variable moments"));
            }
            cond.mixed_factorial_moment(*i as usize, *j as usize)?
        }
        _ => return Err(Error::invalid("--j wants one index or two comma-separated indices")),
    };
    let mut out = Out::new(p.out, "moment");
    out.echo("matrix", &a);
    out.echo("lambda", p.lambda.as_deref().unwrap_or(""));
    out.echo("b", &p.b);
    out.echo("j", &m.j);
    out.echo("r", m.r);
    if p.mode == Mode::Exact {
        out.kv("moment", to_fraction_string(&value));
    }
    out.kv("float", ffloat(&value));
    out.print();
    Ok(())
}

fn stats_report(p: &ProblemArgs) -> Result<(ConstraintMatrix, genfun::StatReport)> {
    if p.mode == Mode::Symbolic {
        return Err(Error::invalid("stats has no symbolic mode"));
    }
    let a = load_matrix(&p.matrix)?;
    let b = parse_u32_list(&p.b)?;
    let lam = require_lambda(p.lambda.as_deref())?;
    let report = genfun::stats(&a, &lam, &b)?;
    Ok((a, report))
}

fn cmd_stats(p: &ProblemArgs) -> Result<()> {
    let (a, report) = stats_report(p)?;
    let n = a.cols();
    let exact = p.mode == Mode::Exact;
    let show = |x: &BigRational| if exact { to_fraction_string(x) } else { ffloat(x) };
    let mut out = Out::new(p.out, "stats");
    out.echo("matrix", &a);
    out.echo("lambda", p.lambda.as_deref().unwrap_or(""));
    out.echo("b", &p.b);
    out.kv("f0", show(&report.f0));
    for j in 0..n {
        out.kv(&format!("mean {}", j + 1), show(&report.means[j]));
    }
    for j in 0..n {
        out.kv(&format!("variance {}", j + 1), show(&report.variances[j]));
    }
    for i in 0..n {
        for j in i + 1..n {
            out.kv(&format!("covariance {} {}", i + 1, j + 1), show(&report.covariance[i][j]));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = match report.correlation[i][j] {
                Some(x) => fsig(x),
                None => "na".to_string(),
            };
            out.kv(&format!("correlation {} {}", i + 1, j + 1), c);
        }
    }
    out.print();
    Ok(())
}

fn cmd_cor(p: &ProblemArgs) -> Result<()> {
    let (a, report) = stats_report(p)?;
    let n = a.cols();
    let mut out = Out::new(p.out, "cor");
    out.echo("matrix", &a);
    out.echo("lambda", p.lambda.as_deref().unwrap_or(""));
    out.echo("b", &p.b);
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| match report.correlation[i][j] {
                Some(x) => fsig(x),
                None => "na".to_string(),
            })
            .collect();
        if out.structured {
            out.kv("row", row.join(" "));
        } else {
            out.raw(&row.join(" "));
        }
    }
    out.print();
    Ok(())
}

// ---------------------------------------------------------------------------
// recurrence subcommands
// ---------------------------------------------------------------------------

/// Contents of a recurrence file: optional envelope echoes plus either a
/// full `recsys` block or bare `rec` blocks.
struct RecFile {
    matrix: Option<ConstraintMatrix>,
    lambda: Option<Vec<BigRational>>,
    system: Option<RecurrenceSystem>,
    recs: Vec<PRecurrence>,
}

fn parse_rec_file(text: &str) -> Result<RecFile> {
    let mut matrix = None;
    let mut lambda = None;
    let lines: Vec<&str> = text.lines().collect();
    let mut payload_start = None;
    for (idx, line) in lines.iter().enumerate() {
        let t = line.trim();
        if t == "recsys" || t.starts_with("rec ") {
            payload_start = Some(idx);
            break;
        }
        if let Some(v) = t.strip_prefix("matrix ") {
            matrix = Some(ConstraintMatrix::parse(v)?);
        } else if let Some(v) = t.strip_prefix("lambda ") {
            lambda = Some(parse_rational_list(v)?);
        }
        // other envelope keys (command, direction, ...) are informational
    }
    let start = payload_start
        .ok_or_else(|| Error::invalid("no `rec` or `recsys` block found in the file"))?;
    let payload = lines[start..].join("\n");
    let mut system = None;
    let mut recs = Vec::new();
    if payload.trim_start().starts_with("recsys") {
        let sys = RecurrenceSystem::from_text(&payload)?;
        matrix = Some(sys.matrix().clone());
        recs = sys.recurrences().to_vec();
        system = Some(sys);
    } else {
        // one or more bare `rec ... endrec` blocks
        let mut block = String::new();
        for line in payload.lines() {
            if line.trim().is_empty() && block.is_empty() {
                continue;
            }
            block.push_str(line);
            block.push('\n');
            if line.trim() == "endrec" {
                recs.push(PRecurrence::from_text(&block)?);
                block.clear();
            }
        }
        if !block.trim().is_empty() {
            return Err(Error::invalid("unterminated recurrence block (missing `endrec`)"));
        }
        if recs.is_empty() {
            return Err(Error::invalid("no recurrence blocks found in the file"));
        }
    }
    Ok(RecFile { matrix, lambda, system, recs })
}

fn cmd_rec_verify(
    file: &Path,
    matrix: Option<&str>,
    lambda: Option<&str>,
    b: &str,
    mode: Mode,
    out_fmt: OutFmt,
) -> Result<()> {
    let rf = parse_rec_file(&read_file(file)?)?;
    let a = match matrix {
        Some(spec) => load_matrix(spec)?,
        None => rf
            .matrix
            .ok_or_else(|| Error::invalid("no matrix in the file; pass --matrix"))?,
    };
    let hi = parse_u32_list(b)?;
    let lo = vec![0u32; a.rows()];
    let rates = match mode {
        Mode::Symbolic => Rates::Symbolic(a.cols()),
        _ => {
            let lam = match lambda {
                Some(s) => parse_rational_list(s)?,
                None => rf
                    .lambda
                    .ok_or_else(|| Error::invalid("no rates in the file; pass --lambda"))?,
            };
            Rates::numeric(lam)?
        }
    };

    let mut out = Out::new(out_fmt, "rec verify");
    out.echo("matrix", &a);
    out.echo("b", b);
    let mut all_pass = true;
    for rec in &rf.recs {
        let outcome = recurrence::verify(rec, &a, &rates, &lo, &hi)?;
        all_pass &= outcome.pass;
        let key = format!("direction {}", rec.direction());
        match outcome.counterexample {
            None => out.kv(&key, "pass"),
            Some((point, residual)) => {
                let pt = point.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                let res = match residual {
                    condpoisson::Value::Exact(r) => to_fraction_string(&r),
                    condpoisson::Value::Poly(p) => p.to_string(),
                };
                out.kv(&key, format!("fail at b={pt} residual {res}"));
            }
        }
    }
    out.kv("verified", all_pass);
    out.print();
    Ok(())
}

fn cmd_rec_guess(
    matrix: &str,
    lambda: &str,
    direction: Option<usize>,
    max_order: usize,
    max_degree: u32,
    out_fmt: OutFmt,
) -> Result<()> {
    let a = load_matrix(matrix)?;
    let lam = parse_rational_list(lambda)?;
    let dirs: Vec<usize> = match direction {
        Some(d) => vec![d],
        None => (1..=a.rows()).collect(),
    };
    let confirm = vec![CONFIRM_HI; a.rows()];

    let mut out = Out::new(out_fmt, "rec guess");
    out.echo("matrix", &a);
    out.echo("lambda", lambda);
    out.echo("max-order", max_order);
    out.echo("max-degree", max_degree);

    let mut found = Vec::new();
    for d in &dirs {
        match condpoisson::guess::minimal_fit_confirmed(&a, &lam, *d, max_order, max_degree, &confirm)? {
            Some(rec) => found.push(rec),
            None => {
                out.kv(
                    &format!("direction {d}"),
                    format!("no recurrence with order <= {max_order}, degree <= {max_degree}"),
                );
                out.print();
                return Ok(());
            }
        }
    }

    if out.structured {
        if direction.is_none() {
            let sys = RecurrenceSystem::new(a, found)?;
            out.raw(&sys.to_text());
        } else {
            for rec in &found {
                out.raw(&rec.to_text());
            }
        }
    } else {
        for rec in &found {
            out.kv(&format!("direction {}", rec.direction()), format!("order {}", rec.order()));
            for (r, c) in rec.coeffs().iter().enumerate() {
                out.kv(&format!("  P{r}"), c);
            }
        }
    }
    out.print();
    Ok(())
}

fn cmd_rec_eval(
    file: &Path,
    b: &str,
    lambda: Option<&str>,
    matrix: Option<&str>,
    out_fmt: OutFmt,
) -> Result<()> {
    let rf = parse_rec_file(&read_file(file)?)?;
    let b = parse_u32_list(b)?;
    let lam = match lambda {
        Some(s) => parse_rational_list(s)?,
        None => rf
            .lambda
            .clone()
            .ok_or_else(|| Error::invalid("no rates in the file; pass --lambda"))?,
    };
    let sys = match rf.system {
        Some(sys) => sys,
        None => {
            let a = match matrix {
                Some(spec) => load_matrix(spec)?,
                None => rf
                    .matrix
                    .ok_or_else(|| Error::invalid("no matrix in the file; pass --matrix"))?,
            };
            RecurrenceSystem::new(a, rf.recs)?
        }
    };
    let value = recurrence::march(&sys, &lam, &b)?;
    let mut out = Out::new(out_fmt, "rec eval");
    out.echo("matrix", sys.matrix());
    out.echo("b", b.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    out.kv("f0", to_fraction_string(&value));
    out.kv("float", ffloat(&value));
    out.print();
    Ok(())
}

// ---------------------------------------------------------------------------
// reaction-network subcommands
// ---------------------------------------------------------------------------

fn parse_state(net: &ReactionNetwork, s: &str) -> Result<Vec<BigRational>> {
    let x = parse_rational_list(s)?;
    if x.len() != net.species().len() {
        return Err(Error::dim(format!(
            "--x has {} entries but the network has {} species",
            x.len(),
            net.species().len()
        )));
    }
    Ok(x)
}

fn cmd_crn_analyze(file: &Path, out_fmt: OutFmt) -> Result<()> {
    let net = load_network(file)?;
    let rep = net.analyze();
    let mut out = Out::new(out_fmt, "crn analyze");
    if out.structured {
        out.kv("complexes", rep.complexes);
        out.kv("linkage_classes", rep.linkage_classes);
        out.kv("rank", rep.rank);
        out.kv("deficiency", rep.deficiency);
        out.kv("weakly_reversible", rep.weakly_reversible);
    } else {
        out.raw(&rep.to_string());
    }
    out.print();
    Ok(())
}

fn cmd_crn_balance(file: &Path, x: &str, out_fmt: OutFmt) -> Result<()> {
    let net = load_network(file)?;
    let xbar = parse_state(&net, x)?;
    let residuals = net.complex_balance_residuals(&xbar)?;
    let balanced = residuals.iter().all(|(_, r)| r.is_zero());
    let mut out = Out::new(out_fmt, "crn balance");
    out.echo("x", x);
    for (cx, res) in &residuals {
        if out.structured {
            out.kv("residual", format!("{} : {}", to_fraction_string(res), net.format_complex(cx)));
        } else {
            out.kv(&format!("residual[{}]", net.format_complex(cx)), to_fraction_string(res));
        }
    }
    out.kv("complex_balanced", balanced);
    out.print();
    Ok(())
}

fn cmd_crn_conservation(file: &Path, out_fmt: OutFmt) -> Result<()> {
    let net = load_network(file)?;
    let mut out = Out::new(out_fmt, "crn conservation");
    if out.structured {
        out.kv("species", net.species().join(","));
    } else {
        out.raw(&format!("# species: {}", net.species().join(" ")));
    }
    match net.conservation_matrix() {
        ConservationLaws::Constraints(m) => {
            for i in 0..m.rows() {
                let row =
                    m.row(i).iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                if out.structured {
                    out.kv("row", row);
                } else {
                    out.raw(&row);
                }
            }
        }
        ConservationLaws::Basis(rows) => {
            // no non-negative integer form within the search bounds; emit
            // the rational left-nullspace basis instead
            out.kv("form", "rational-basis");
            for r in rows {
                let row = r.iter().map(to_fraction_string).collect::<Vec<_>>().join(" ");
                if out.structured {
                    out.kv("basis-row", row);
                } else {
                    out.raw(&row);
                }
            }
        }
    }
    out.print();
    Ok(())
}

fn cmd_crn_cme_check(file: &Path, x: &str, radius: u32, out_fmt: OutFmt) -> Result<()> {
    let net = load_network(file)?;
    let xbar = parse_state(&net, x)?;
    let dims = net.species().len();
    let mut state = vec![0u32; dims];
    let mut states = 0u64;
    let mut failure: Option<(Vec<u32>, BigRational)> = None;
    'sweep: loop {
        states += 1;
        let res = net.sscme_residual(&xbar, &state)?;
        if !res.is_zero() {
            failure = Some((state.clone(), res));
            break 'sweep;
        }
        // odometer over the box 0..=radius
        let mut i = dims;
        loop {
            if i == 0 {
                break 'sweep;
            }
            i -= 1;
            if state[i] < radius {
                state[i] += 1;
                break;
            }
            state[i] = 0;
        }
    }
    let mut out = Out::new(out_fmt, "crn cme-check");
    out.echo("x", x);
    out.kv("radius", radius);
    out.kv("states", states);
    match failure {
        None => out.kv("pass", true),
        Some((point, res)) => {
            let pt = point.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            out.kv("fail", format!("N={pt} residual {}", to_fraction_string(&res)));
            out.kv("pass", false);
        }
    }
    out.print();
    Ok(())
}

fn cmd_crn_lemma_check(file: &Path, x: &str, seed: u64, out_fmt: OutFmt) -> Result<()> {
    let net = load_network(file)?;
    let xbar = parse_state(&net, x)?;
    let balanced = net.is_complex_balanced(&xbar)?;
    let c = net.complexes().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failure: Option<(usize, BigRational)> = None;
    for trial in 0..LEMMA_TRIALS {
        let alpha: Vec<BigRational> = (0..c)
            .map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=4).into()))
            .collect();
        let res = net.key_lemma_residual(&xbar, &alpha)?;
        if !res.is_zero() {
            failure = Some((trial, res));
            break;
        }
    }
    let mut out = Out::new(out_fmt, "crn lemma-check");
    out.echo("x", x);
    out.echo("seed", seed);
    out.kv("complex_balanced", balanced);
    out.kv("trials", LEMMA_TRIALS);
    match failure {
        None => out.kv("pass", true),
        Some((trial, res)) => {
            out.kv("fail", format!("trial {trial} residual {}", to_fraction_string(&res)));
            out.kv("pass", false);
        }
    }
    out.print();
    Ok(())
}
