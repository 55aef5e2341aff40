//! The `tclique` command line.
//!
//! Exit status: 0 success, 1 negative result or property violation, 2 usage
//! or input error, 3 search budget or size limit hit.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::atlas::{Atlas, AtlasRecord};
use crate::bounds::{self, BoundExpr};
use crate::canon::code_hex;
use crate::chains::{
    assign_zones, chain_dichotomy, merge_bags, parse_bags, verify_bag_chain, verify_near_bag_chain,
    zone_lemma_audit, AuditStatus, BagChain, DichotomyOptions, DichotomyResult, Evaluator, EvaluatorKind,
    NearBagChain, Policy,
};
use crate::constructions::{build_labelled, Family, Labelled};
use crate::containment::contains_copy;
use crate::error::{Error, Result};
use crate::mountains::find_mountain;
use crate::solvers::{chi_dir, omega_dir, SolverConfig};
use crate::suite::{self, SuiteResult, SuiteSize};
use crate::tournament::Tournament;
use crate::trn;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

pub const JSON_SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "tclique", version, about = "Clique number of tournaments: solvers, constructions, audits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a member of a family (or a random tournament) in .trn format.
    Gen(GenArgs),
    /// Exact clique number with an optimal ordering.
    Omega(SolveArgs),
    /// Exact dichromatic number with a colouring.
    Chi(SolveArgs),
    /// Search for an induced copy of one tournament in another.
    Contains(ContainsArgs),
    /// Find an (r, s)-mountain certificate.
    Mountain(MountainArgs),
    /// Randomized audits of the mountain lemmas.
    MountainAudit(SuiteArgs),
    /// Bag-chain tools.
    Chain {
        #[command(subcommand)]
        op: ChainOp,
    },
    /// Evaluate the bound recurrences.
    Bounds {
        #[command(subcommand)]
        op: BoundsOp,
    },
    /// Persistent cache of invariants keyed by canonical code.
    Atlas(AtlasArgs),
    /// The full invariant battery.
    LemmaSuite(SuiteArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// A, D, U, or `random`.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    /// Required for `random`.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the tournament here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Label sidecar; defaults to `<out>.labels` when `--out` is given.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// `.trn` file, or `-` for stdin.
    file: String,
    /// Search-node budget; an exhausted budget exits with status 3.
    #[arg(long)]
    budget: Option<u64>,
    /// Raise the exact-solver size limit (at most 64).
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ContainsArgs {
    #[arg(long)]
    host: String,
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct MountainArgs {
    #[arg(long)]
    r: u32,
    #[arg(long)]
    s: u32,
    file: String,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    #[arg(long, required = true)]
    seed: Option<u64>,
    /// Use this many cases for every randomized battery.
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EvalArg {
    Exact,
    Bounds,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Strict,
    Relaxed,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Strict => Policy::Strict,
            PolicyArg::Relaxed => Policy::Relaxed,
        }
    }
}

#[derive(Args, Debug)]
struct ChainInput {
    /// Tournament (`-` for stdin).
    trn: String,
    /// Bag file: one bag per line.
    bags: String,
    #[arg(long, value_enum, default_value = "exact")]
    evaluator: EvalArg,
}

#[derive(Subcommand, Debug)]
enum ChainOp {
    /// Check the bag-chain (or near-bag-chain) inequalities.
    Verify {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        near: bool,
    },
    /// Assign the remaining vertices to zones; optionally audit the zone inequalities.
    Zones {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        c_small: usize,
        /// Run the zone audit for this chain index `n`.
        #[arg(long)]
        audit_n: Option<usize>,
        #[arg(long, value_enum, default_value = "strict")]
        policy: PolicyArg,
    },
    /// Greedily merge consecutive bags of a near-bag-chain.
    Merge {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        a: usize,
    },
    /// Ordering certificate or `A_m` embedding from a near-bag-chain.
    Dichotomy {
        #[command(flatten)]
        input: ChainInput,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        c_small: usize,
        #[arg(long, value_enum, default_value = "strict")]
        policy: PolicyArg,
        #[arg(long)]
        max_cliques: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Trace tree depth.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum BoundsOp {
    /// The main bound function `f(t)`.
    F {
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        trace: TraceArgs,
    },
    /// Ramsey upper bound `R(s, t)`.
    Ramsey {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
        #[command(flatten)]
        trace: TraceArgs,
    },
    /// Mountain-growing threshold `q(b, r, s)`.
    Q {
        #[arg(long)]
        b: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[command(flatten)]
        trace: TraceArgs,
    },
    /// Out-neighbourhood threshold `g(b)`.
    G45 {
        #[arg(long)]
        b: u64,
        #[command(flatten)]
        trace: TraceArgs,
    },
}

#[derive(Args, Debug)]
struct AtlasArgs {
    /// Atlas file.
    #[arg(long)]
    atlas: PathBuf,
    #[command(subcommand)]
    op: AtlasOp,
}

#[derive(Subcommand, Debug)]
enum AtlasOp {
    /// Compute invariants of each file and store them.
    Put {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Look up by tournament file or canonical code.
    Get {
        file: Option<String>,
        #[arg(long, conflicts_with = "file")]
        code: Option<String>,
    },
    List,
    /// Report corrupt records and inconsistent values.
    Verify,
    /// Rewrite keeping only the latest record per code.
    Compact,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

/// Parses `args` (program name first) and runs the command against the
/// process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], with explicit streams.
pub fn run_with<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io { stdin, out };
    match dispatch(cli.cmd, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::SizeLimit { .. } | Error::Undecided { .. } => EXIT_LIMIT,
        Error::Consistency(_) | Error::Hypothesis(_) => EXIT_NEGATIVE,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Cmd, io: &mut Io) -> Result<i32> {
    match cmd {
        Cmd::Gen(a) => gen(a, io),
        Cmd::Omega(a) => omega(a, io),
        Cmd::Chi(a) => chi(a, io),
        Cmd::Contains(a) => contains(a, io),
        Cmd::Mountain(a) => mountain(a, io),
        Cmd::MountainAudit(a) => battery(a, io, suite::mountain_battery),
        Cmd::LemmaSuite(a) => battery(a, io, suite::lemma_battery),
        Cmd::Chain { op } => chain(op, io),
        Cmd::Bounds { op } => bounds_cmd(op, io),
        Cmd::Atlas(a) => atlas(a, io),
    }
}

fn load(path: &str, io: &mut Io) -> Result<Tournament> {
    if path == "-" {
        let mut text = String::new();
        io.stdin.read_to_string(&mut text)?;
        trn::parse(&text)
    } else {
        trn::read(path)
    }
}

fn load_text(path: &str, io: &mut Io) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        io.stdin.read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn emit_json(io: &mut Io, v: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *io.out, v)?;
    writeln!(io.out)?;
    Ok(())
}

fn ids(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn gen(a: GenArgs, io: &mut Io) -> Result<i32> {
    let labelled = if a.family.eq_ignore_ascii_case("random") {
        let seed = a
            .seed
            .ok_or_else(|| Error::InvalidArgument("--family random requires --seed".into()))?;
        Labelled {
            tournament: Tournament::random(a.n, seed),
            labels: (0..a.n).map(|v| format!("x_{v}")).collect(),
        }
    } else {
        build_labelled(a.family.parse::<Family>()?, a.n)?
    };
    let text = trn::format(&labelled.tournament);
    match &a.out {
        Some(p) => std::fs::write(p, &text)?,
        None => io.out.write_all(text.as_bytes())?,
    }
    let sidecar = a.labels.clone().or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".labels");
            PathBuf::from(s)
        })
    });
    if let Some(p) = sidecar {
        std::fs::write(p, labelled.label_file())?;
    }
    Ok(EXIT_OK)
}

fn solver_config(budget: Option<u64>) -> SolverConfig {
    SolverConfig {
        budget,
        ..SolverConfig::default()
    }
}

fn solve_config(a: &SolveArgs) -> SolverConfig {
    let mut cfg = solver_config(a.budget);
    if let Some(m) = a.max_n {
        cfg.omega_limit = m;
        cfg.chi_limit = m;
    }
    cfg
}

fn omega(a: SolveArgs, io: &mut Io) -> Result<i32> {
    let t = load(&a.file, io)?;
    let cert = omega_dir(&t, &solve_config(&a))?;
    if a.json {
        emit_json(io, &cert)?;
    } else if cert.is_exact() {
        writeln!(io.out, "{}", cert.value)?;
        writeln!(io.out, "order: {}", ids(&cert.order))?;
    } else {
        writeln!(io.out, "between {} and {} (budget exhausted)", cert.lower, cert.value)?;
    }
    Ok(if cert.is_exact() { EXIT_OK } else { EXIT_LIMIT })
}

fn chi(a: SolveArgs, io: &mut Io) -> Result<i32> {
    let t = load(&a.file, io)?;
    let cert = chi_dir(&t, &solve_config(&a))?;
    if a.json {
        emit_json(io, &cert)?;
    } else if cert.is_exact() {
        writeln!(io.out, "{}", cert.value)?;
        for c in &cert.classes {
            writeln!(io.out, "class: {}", ids(c))?;
        }
    } else {
        writeln!(io.out, "between {} and {} (budget exhausted)", cert.lower, cert.value)?;
    }
    Ok(if cert.is_exact() { EXIT_OK } else { EXIT_LIMIT })
}

fn contains(a: ContainsArgs, io: &mut Io) -> Result<i32> {
    let host = load(&a.host, io)?;
    let pattern = load(&a.pattern, io)?;
    let found = contains_copy(&host, &pattern);
    if a.json {
        emit_json(io, &json!({ "schema": JSON_SCHEMA, "found": found.is_some(), "map": found }))?;
    } else {
        match &found {
            Some(map) => writeln!(io.out, "found: {}", ids(map))?,
            None => writeln!(io.out, "not found")?,
        }
    }
    Ok(if found.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn mountain(a: MountainArgs, io: &mut Io) -> Result<i32> {
    let t = load(&a.file, io)?;
    let cert = find_mountain(&t, a.r, a.s, a.budget)?;
    emit_json(io, &json!({ "schema": JSON_SCHEMA, "r": a.r, "s": a.s, "certificate": cert }))?;
    Ok(if cert.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn battery(
    a: SuiteArgs,
    io: &mut Io,
    f: fn(u64, &SuiteSize) -> Result<Vec<SuiteResult>>,
) -> Result<i32> {
    let seed = a.seed.expect("clap enforces --seed");
    let mut size = SuiteSize::default();
    if let Some(k) = a.cases {
        size = SuiteSize {
            subadditivity: k,
            omega_chi: k,
            round_trip: k,
            mountains: k,
            colourings: k,
            log_bound: k,
            zones: k,
            max_d: size.max_d,
        };
    }
    let results = f(seed, &size)?;
    let ok = results.iter().all(SuiteResult::passed);
    if a.json {
        emit_json(io, &json!({ "schema": JSON_SCHEMA, "seed": seed, "passed": ok, "suites": results }))?;
    } else {
        for r in &results {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(io.out, "{tag} {} ({} cases)", r.name, r.cases)?;
            for v in &r.violations {
                writeln!(io.out, "  {v}")?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn chain(op: ChainOp, io: &mut Io) -> Result<i32> {
    let input = match &op {
        ChainOp::Verify { input, .. }
        | ChainOp::Zones { input, .. }
        | ChainOp::Merge { input, .. }
        | ChainOp::Dichotomy { input, .. } => input,
    };
    let t = load(&input.trn, io)?;
    let bags = parse_bags(&load_text(&input.bags, io)?, t.n())?;
    let kind = match input.evaluator {
        EvalArg::Exact => EvaluatorKind::Exact,
        EvalArg::Bounds => EvaluatorKind::Bounds,
    };
    let mut eval = Evaluator::with_kind(&t, kind)?;
    match op {
        ChainOp::Verify { c, a, near, .. } => {
            let rep = if near {
                verify_near_bag_chain(&mut eval, &NearBagChain { bags, c, a })?
            } else {
                verify_bag_chain(&mut eval, &BagChain { bags, c, a })?
            };
            emit_json(io, &json!({ "schema": JSON_SCHEMA, "report": rep }))?;
            Ok(if rep.valid { EXIT_OK } else { EXIT_NEGATIVE })
        }
        ChainOp::Zones {
            c, c_small, audit_n, policy, ..
        } => {
            let chain = BagChain { bags, c, a: c_small };
            let zones = assign_zones(&mut eval, &chain, c_small)?;
            let audit = match audit_n {
                Some(n) => Some(zone_lemma_audit(&mut eval, &chain, &zones, c_small, n, policy.into())?),
                None => None,
            };
            let violated = audit.as_ref().is_some_and(|au| {
                au.status == AuditStatus::Audited && !au.forced && !au.violations.is_empty()
            });
            emit_json(io, &json!({ "schema": JSON_SCHEMA, "zones": zones, "audit": audit }))?;
            Ok(if violated { EXIT_NEGATIVE } else { EXIT_OK })
        }
        ChainOp::Merge { c, a, .. } => {
            let m = merge_bags(&mut eval, &NearBagChain { bags, c, a }, c)?;
            let last = m.omegas.len().saturating_sub(1);
            let post_bounds = m
                .omegas
                .iter()
                .enumerate()
                .all(|(i, &w)| w <= 2 * c && (i == last || w > c));
            emit_json(io, &json!({ "schema": JSON_SCHEMA, "merge": m, "post_bounds_hold": post_bounds }))?;
            Ok(if post_bounds { EXIT_OK } else { EXIT_NEGATIVE })
        }
        ChainOp::Dichotomy {
            m,
            c,
            a,
            c_small,
            policy,
            max_cliques,
            ..
        } => {
            let opts = DichotomyOptions {
                policy: policy.into(),
                max_cliques,
            };
            let rep = chain_dichotomy(&mut eval, &NearBagChain { bags, c, a }, m, c, a, c_small, &opts)?;
            let certified = matches!(
                rep.result,
                DichotomyResult::Ordering { .. } | DichotomyResult::Embedding { .. }
            );
            emit_json(io, &json!({ "schema": JSON_SCHEMA, "report": rep }))?;
            Ok(if certified { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn bounds_cmd(op: BoundsOp, io: &mut Io) -> Result<i32> {
    let (name, expr, trace) = match op {
        BoundsOp::F { t, trace } => (format!("f({t})"), bounds::f_main(t)?, trace),
        BoundsOp::Ramsey { s, t, trace } => (format!("R({s}, {t})"), bounds::ramsey_upper(s, t)?, trace),
        BoundsOp::Q { b, r, s, trace } => (format!("q({b}, {r}, {s})"), bounds::q_of(b, r, s)?, trace),
        BoundsOp::G45 { b, trace } => (format!("g({b})"), bounds::g45_of(b)?, trace),
    };
    if !expr.reevaluate() {
        return Err(Error::Consistency(format!("trace of {name} does not re-evaluate")));
    }
    print_bound(io, &name, &expr, &trace)?;
    Ok(EXIT_OK)
}

fn print_bound(io: &mut Io, name: &str, expr: &BoundExpr, trace: &TraceArgs) -> Result<()> {
    let v = expr.value();
    if trace.json {
        emit_json(
            io,
            &json!({
                "schema": JSON_SCHEMA,
                "name": name,
                "value": v.to_string(),
                "exact": v.is_exact(),
                "lower_digits": v.lower_digits(),
                "trace": expr.trace_json(trace.depth),
            }),
        )
    } else {
        writeln!(io.out, "{name} = {v}")?;
        write!(io.out, "{}", expr.trace_text(trace.depth))?;
        Ok(())
    }
}

fn atlas(a: AtlasArgs, io: &mut Io) -> Result<i32> {
    let mut atlas = Atlas::open(&a.atlas)?;
    match a.op {
        AtlasOp::Put { files, budget } => {
            let cfg = solver_config(budget);
            for f in files {
                let t = load(&f, io)?;
                let rec = AtlasRecord::compute(&t, &cfg)?;
                let code = rec.code.clone();
                atlas.upsert(rec)?;
                writeln!(io.out, "{code}")?;
            }
            Ok(EXIT_OK)
        }
        AtlasOp::Get { file, code } => {
            let code = match (file, code) {
                (_, Some(c)) => c,
                (Some(f), None) => code_hex(&load(&f, io)?)?,
                (None, None) => return Err(Error::InvalidArgument("give a file or --code".into())),
            };
            match atlas.get(&code) {
                Some(r) => {
                    emit_json(io, r)?;
                    Ok(EXIT_OK)
                }
                None => {
                    writeln!(io.out, "absent")?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        AtlasOp::List => {
            let all: Vec<&AtlasRecord> = atlas.records().collect();
            emit_json(io, &json!({ "schema": JSON_SCHEMA, "records": all }))?;
            Ok(EXIT_OK)
        }
        AtlasOp::Verify => {
            let problems: Vec<_> = atlas
                .records()
                .flat_map(|r| r.problems().into_iter().map(move |p| format!("{}: {p}", r.code)))
                .collect();
            let ok = problems.is_empty() && atlas.corrupt().is_empty() && atlas.torn_tail().is_none();
            emit_json(
                io,
                &json!({
                    "schema": JSON_SCHEMA,
                    "records": atlas.len(),
                    "corrupt": atlas.corrupt(),
                    "torn_tail": atlas.torn_tail(),
                    "problems": problems,
                    "ok": ok,
                }),
            )?;
            Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
        }
        AtlasOp::Compact => {
            let rep = atlas.compact()?;
            emit_json(io, &json!({ "schema": JSON_SCHEMA, "compact": rep }))?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("tclique").chain(args.iter().copied());
        let code = run_with(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gen_pipes_into_omega() {
        let (code, d3, _) = call(&["gen", "--family", "D", "--n", "3"], "");
        assert_eq!(code, 0);
        let (code, out, _) = call(&["omega", "-"], &d3);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next(), Some("2"));
        let (code, d4, _) = call(&["gen", "--family", "D", "--n", "4"], "");
        assert_eq!(code, 0);
        assert_eq!(call(&["omega", "-", "--budget", "0"], &d4).0, EXIT_LIMIT);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"], "").0, EXIT_USAGE);
        assert_eq!(call(&["lemma-suite"], "").0, EXIT_USAGE);
        assert_eq!(call(&["gen", "--family", "random", "--n", "4"], "").0, EXIT_USAGE);
        assert_eq!(call(&["omega", "-"], "2\n01\n01\n").0, EXIT_USAGE);
        assert_eq!(call(&["--help"], "").0, EXIT_OK);
    }

    #[test]
    fn bounds_f_one() {
        let (code, out, _) = call(&["bounds", "f", "--t", "1"], "");
        assert_eq!(code, 0);
        assert!(out.starts_with("f(1) = 0"), "{out}");
    }
}
