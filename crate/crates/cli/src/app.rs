//! Subcommand driver: parse operator expressions, run the pipeline, verify
//! every result before printing it, and map outcomes to stable exit codes.

use std::fs;
use std::path::PathBuf;

use biweyl::eliminate::{
    build_matrix, counting_bound, eliminate, enumerate_v, enumerate_w, Mode, ReductionMatrix,
};
use biweyl::json::{
    elim_from_json, elim_to_json, gap_to_json, reduced_from_json, reduced_to_json, report_to_json,
    system_to_json,
};
use biweyl::reduce::{claim_gap_demo, make_system, reduce_full, reduce_step, Reducer};
use biweyl::verify::{
    check_annihilates, check_elimination, check_gap, check_reduction, check_step_reduction, Report,
    SampleSystem,
};
use biweyl::{Error as CoreError, Operator, System};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::parser::parse_operator;

/// Command ran and every check passed.
pub const EXIT_OK: i32 = 0;
/// Bad usage: flags, expression syntax, malformed input, invalid system.
pub const EXIT_USAGE: i32 = 1;
/// A verification check failed.
pub const EXIT_VERIFY: i32 = 2;
/// No kernel within the level budget.
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "biweyl",
    version,
    about = "Exact elimination for pairs of bivariate differential operators",
    long_about = "Given annihilators A (free of Dy) and B (free of Dx) with a common leading\n\
                  coefficient L, reduces monomials modulo the pair and searches for a nonzero\n\
                  y-free operator S with an exact certificate L^N * S = U*A + V*B. Every\n\
                  subcommand re-verifies its own output before printing."
)]
struct Cli {
    /// Emit machine-readable JSON on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the reduction matrix of the successful level to this file
    /// as JSON (eliminate only).
    #[arg(long, global = true, value_name = "PATH")]
    matrix_dump: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce Dx^alpha * Dy^beta modulo the pair, with certificate.
    Reduce(ReduceArgs),
    /// Find a nonzero y-free S with certificate L^N * S = U*A + V*B.
    Eliminate(EliminateArgs),
    /// Round-trip a built-in system against its closed-form solution.
    Verify(VerifyArgs),
    /// Show why reduction needs powers of L: reduce L*Dx^m*Dy modulo A alone.
    GapDemo(GapDemoArgs),
    /// Print the guaranteed level bound and the monomial-count table.
    Bound(BoundArgs),
    /// Re-verify a previously emitted JSON certificate against a system.
    Check(CheckArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Operator in K[x,y]<Dx>, e.g. "(1 - x - y)*Dx - 1".
    #[arg(long = "A", value_name = "EXPR")]
    a: String,
    /// Operator in K[x,y]<Dy> with the same leading coefficient as A.
    #[arg(long = "B", value_name = "EXPR")]
    b: String,
    /// Dx-order of the monomial to reduce.
    #[arg(long)]
    alpha: u32,
    /// Dy-order of the monomial to reduce.
    #[arg(long)]
    beta: u32,
    /// Stop after a single reduction round instead of reducing fully.
    #[arg(long)]
    step: bool,
}

#[derive(Args)]
struct EliminateArgs {
    #[arg(long = "A", value_name = "EXPR")]
    a: String,
    #[arg(long = "B", value_name = "EXPR")]
    b: String,
    /// Level strategy: try 1, 2, ... or jump to the counting bound.
    #[arg(long, value_enum, default_value_t = ModeArg::Search)]
    mode: ModeArg,
    /// Highest level to try (default: the counting bound).
    #[arg(long, value_name = "N")]
    n_max: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Search,
    Bound,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Search => Mode::Search,
            ModeArg::Bound => Mode::Bound,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in system name: geometric, exp, or sqrt.
    #[arg(long, value_name = "NAME")]
    system: String,
    /// Strict bound on the total degree of the reference series.
    #[arg(long, default_value_t = 16, value_name = "T")]
    order: u32,
}

#[derive(Args)]
struct GapDemoArgs {
    /// Operator in K[x,y]<Dx> of positive order; its leading coefficient
    /// becomes the L of the synthesized partner B = L*Dy.
    #[arg(long = "A", value_name = "EXPR")]
    a: String,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long = "A", value_name = "EXPR")]
    a: String,
    #[arg(long = "B", value_name = "EXPR")]
    b: String,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long = "A", value_name = "EXPR")]
    a: String,
    #[arg(long = "B", value_name = "EXPR")]
    b: String,
    /// JSON certificate to replay: an eliminate or reduce result, or a whole
    /// envelope as printed with --json.
    #[arg(long, value_name = "PATH")]
    file: PathBuf,
}

/// Terminal failure: message for stderr plus the exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::NoKernelWithinBudget { .. } | CoreError::PowerExceedsBudget { .. } => {
                EXIT_BUDGET
            }
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Parse one operator flag, prefixing errors with the flag name.
fn parse_flag(flag: &str, text: &str) -> Result<Operator, Failure> {
    parse_operator(text).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn parse_pair(a: &str, b: &str) -> Result<System, Failure> {
    let a = parse_flag("A", a)?;
    let b = parse_flag("B", b)?;
    Ok(make_system(a, b)?)
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit 2 on usage errors, which collides with the
            // verification-failure code; remap to the documented scheme.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, Failure> {
    if cli.matrix_dump.is_some() && !matches!(cli.command, Command::Eliminate(_)) {
        return Err(usage("--matrix-dump is only supported with `eliminate`"));
    }
    match &cli.command {
        Command::Reduce(args) => cmd_reduce(cli, args),
        Command::Eliminate(args) => cmd_eliminate(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::GapDemo(args) => cmd_gap_demo(cli, args),
        Command::Bound(args) => cmd_bound(cli, args),
        Command::Check(args) => cmd_check(cli, args),
    }
}

/// Print the envelope (JSON mode) or the report tail (text mode) and turn
/// the report's verdict into an exit code.
fn finish(cli: &Cli, command: &str, sys: &System, result: Value, rep: &Report) -> i32 {
    if cli.json {
        let envelope = json!({
            "command": command,
            "system": system_to_json(sys),
            "result": result,
            "checks": report_to_json(rep),
            "pass": rep.pass(),
        });
        println!("{envelope}");
    } else {
        print!("{rep}");
        println!("verdict: {}", if rep.pass() { "PASS" } else { "FAIL" });
    }
    if rep.pass() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn print_system(sys: &System) {
    println!("A = {}", sys.a());
    println!("B = {}", sys.b());
    println!("L = {}   (m = {}, n = {}, d = {})", sys.l(), sys.m(), sys.n(), sys.d());
}

fn cmd_reduce(cli: &Cli, args: &ReduceArgs) -> Result<i32, Failure> {
    let sys = parse_pair(&args.a, &args.b)?;
    let (rf, rep) = if args.step {
        let rf = reduce_step(&sys, args.alpha, args.beta);
        let rep = check_step_reduction(&sys, &rf);
        (rf, rep)
    } else {
        let rf = reduce_full(&sys, args.alpha, args.beta);
        let rep = check_reduction(&sys, &rf);
        (rf, rep)
    };
    if !cli.json {
        print_system(&sys);
        println!(
            "L^{} * Dx^{}*Dy^{} = remainder + U*A + V*B   ({} round{})",
            rf.l_power(),
            rf.alpha,
            rf.beta,
            rf.k,
            if rf.k == 1 { "" } else { "s" }
        );
        println!("remainder = {}", rf.remainder);
        println!("U = {}", rf.cofactor_a);
        println!("V = {}", rf.cofactor_b);
    }
    Ok(finish(cli, "reduce", &sys, reduced_to_json(&rf), &rep))
}

fn matrix_to_json(matrix: &ReductionMatrix) -> Value {
    json!({
        "level": matrix.level(),
        "v": matrix
            .v_indices()
            .iter()
            .map(|v| json!([v.gamma, v.alpha, v.beta]))
            .collect::<Vec<_>>(),
        "w": matrix
            .w_indices()
            .iter()
            .map(|w| json!([w.s, w.t, w.i, w.j]))
            .collect::<Vec<_>>(),
        "rows": matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(|q| q.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn cmd_eliminate(cli: &Cli, args: &EliminateArgs) -> Result<i32, Failure> {
    let sys = parse_pair(&args.a, &args.b)?;
    let res = eliminate(&sys, args.mode.into(), args.n_max)?;
    let rep = check_elimination(&sys, &res);
    if let Some(path) = &cli.matrix_dump {
        let mut red = Reducer::new(&sys);
        let matrix = build_matrix(&mut red, res.level)?;
        let payload = format!("{}\n", matrix_to_json(&matrix));
        fs::write(path, payload)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if !cli.json {
        print_system(&sys);
        println!("level N = {}", res.level);
        println!("S = {}", res.s);
        println!("U = {}", res.cofactor_a);
        println!("V = {}", res.cofactor_b);
        println!("identity: L^{} * S = U*A + V*B", res.level);
        println!("kernel coordinates:");
        for (vi, c) in &res.kernel {
            println!("  x^{}*Dx^{}*Dy^{} : {}", vi.gamma, vi.alpha, vi.beta, c);
        }
    }
    Ok(finish(cli, "eliminate", &sys, elim_to_json(&res), &rep))
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<i32, Failure> {
    let which: SampleSystem = args.system.parse().map_err(Failure::from)?;
    let sys = biweyl::verify::sample_system(which);
    let sol = biweyl::verify::sample_solution(which, args.order);
    let mut rep = Report::new();
    rep.merge(check_annihilates("A", sys.a(), &sol)?);
    rep.merge(check_annihilates("B", sys.b(), &sol)?);
    let res = eliminate(&sys, Mode::Search, None)?;
    rep.merge(check_elimination(&sys, &res));
    rep.merge(check_annihilates("S", &res.s, &sol)?);
    let gap = claim_gap_demo(&sys);
    rep.merge(check_gap(&sys, &gap));
    if !cli.json {
        println!("system: {which}");
        print_system(&sys);
        println!("S = {}   (level N = {})", res.s, res.level);
        println!("series order = {}", args.order);
    }
    let result = json!({
        "elimination": elim_to_json(&res),
        "gap": gap_to_json(&gap),
        "solutionOrder": args.order,
    });
    Ok(finish(cli, "verify", &sys, result, &rep))
}

fn cmd_gap_demo(cli: &Cli, args: &GapDemoArgs) -> Result<i32, Failure> {
    let a = parse_flag("A", &args.a)?;
    if !a.only_dx() {
        return Err(usage("--A: gap-demo needs an operator free of Dy"));
    }
    let Some(m) = a.order_dx().filter(|&m| m > 0) else {
        return Err(usage("--A: gap-demo needs an operator of positive Dx-order"));
    };
    // Synthesize the minimal partner with the same leading coefficient; the
    // demonstration works modulo A alone, so B's lower part never matters.
    let b = Operator::term(0, 1, a.coeff(m, 0));
    let sys = make_system(a, b)?;
    let gap = claim_gap_demo(&sys);
    let rep = check_gap(&sys, &gap);
    if !cli.json {
        print_system(&sys);
        println!("dL/dy = {}", gap.l_y);
        println!("single-L congruence: L * Dx^{m}*Dy = R1 + U1*A");
        println!("  R1 = {}", gap.single_l.remainder);
        println!("  U1 = {}", gap.single_l.cofactor_a);
        println!("double-L congruence: L^2 * Dx^{m}*Dy = R2 + U2*A");
        println!("  R2 = {}", gap.double_l.remainder);
        println!("  U2 = {}", gap.double_l.cofactor_a);
        println!(
            "obstruction: {}",
            if gap.obstruction_present {
                "present (R1 keeps a term of Dx-order m; one more factor of L clears it)"
            } else {
                "absent (dL/dy = 0, so a single L already suffices)"
            }
        );
    }
    Ok(finish(cli, "gap-demo", &sys, gap_to_json(&gap), &rep))
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> Result<i32, Failure> {
    let sys = parse_pair(&args.a, &args.b)?;
    let n = counting_bound(&sys);
    let mut table = Vec::new();
    let mut rep = Report::new();
    for level in 1..=n {
        let v = enumerate_v(level).len();
        let w = enumerate_w(level, &sys).len();
        table.push((level, v, w));
        let minimal = if level < n { v <= w } else { v > w };
        rep.push(
            &format!("bound-level-{level}"),
            minimal,
            format!(
                "|V| = {v}, |W| = {w}: {}",
                if level < n { "no kernel guaranteed yet" } else { "kernel guaranteed" }
            ),
        );
    }
    if !cli.json {
        print_system(&sys);
        println!("counting bound N = {n}");
        println!("{:>5} {:>8} {:>8}", "level", "|V|", "|W|");
        for &(level, v, w) in &table {
            println!("{level:>5} {v:>8} {w:>8}");
        }
    }
    let result = json!({
        "N": n,
        "table": table
            .iter()
            .map(|&(level, v, w)| json!({"level": level, "v": v, "w": w}))
            .collect::<Vec<_>>(),
    });
    Ok(finish(cli, "bound", &sys, result, &rep))
}

fn cmd_check(cli: &Cli, args: &CheckArgs) -> Result<i32, Failure> {
    let sys = parse_pair(&args.a, &args.b)?;
    let text = fs::read_to_string(&args.file)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.file.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON: {e}")))?;
    // Accept either a bare certificate or a whole --json envelope.
    let cert = value.get("result").unwrap_or(&value);
    let (kind, result, rep) = if cert.get("S").is_some() {
        let res = elim_from_json(cert)?;
        let rep = check_elimination(&sys, &res);
        ("eliminate", elim_to_json(&res), rep)
    } else if cert.get("remainder").is_some() {
        let rf = reduced_from_json(cert)?;
        // Multi-round certificates carry the full contract; single-round
        // ones only the one-step shape guarantees.
        let rep = if rf.k >= 2 {
            check_reduction(&sys, &rf)
        } else {
            check_step_reduction(&sys, &rf)
        };
        ("reduce", reduced_to_json(&rf), rep)
    } else {
        return Err(usage("certificate has neither an \"S\" nor a \"remainder\" field"));
    };
    if !cli.json {
        print_system(&sys);
        println!("certificate kind: {kind}");
    }
    Ok(finish(cli, "check", &sys, result, &rep))
}
