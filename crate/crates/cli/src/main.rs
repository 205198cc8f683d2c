//! `ramspace`: axiom audits, Galvin searches and finite Ramsey witnesses on
//! truncated Ramsey spaces.
//!
//! Exit status: 0 success; 1 audit counterexample or Ramsey lower bound;
//! 2 usage or input error; 3 inconclusive Galvin search or exhausted Ramsey
//! bound; 4 ceiling refusal; 5 certificate rejected.

mod report;
mod space_arg;

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ramspace::audit::{audit_axioms, AuditBounds, Axiom, Verdict};
use ramspace::forcing::{galvin_search, verify_certificate, Dichotomy, FrontFamily, GalvinParams, Verified};
use ramspace::ramsey::{
    abstract_ellentuck_witness, classical_ramsey_number, glr_witness, gr_paramset_witness, verify_result,
    verify_witness, LevelResult, Mode, Replay, WitnessOutcome, WitnessResult, EXHAUSTIVE_CEILING,
};
use ramspace::{Space, Stem, DEFAULT_CEILING};

use report::{AuditOut, Format, GalvinOut, LevelOut, RamseyOut, Report, VerdictOut, VerifyOut};
use space_arg::{FamilyFile, SpaceKind, SpaceSpec, WithSpace};

pub const EXIT_FOUND: u8 = 0;
pub const EXIT_WEAK: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;
pub const EXIT_CEILING: u8 = 4;
pub const EXIT_REJECTED: u8 = 5;

/// Overrides the default ceiling of every command.
const CEILING_VAR: &str = "RAMSPACE_CEILING";

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<ramspace::Error> for Failure {
    fn from(e: ramspace::Error) -> Self {
        let code = match e {
            ramspace::Error::CeilingExceeded { .. } => EXIT_CEILING,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "ramspace",
    version,
    about = "Audits, Galvin searches and finite Ramsey witnesses on truncated Ramsey spaces"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for exhaustive coloring search.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report zero seconds, making repeated runs byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms on a truncated space.
    Audit(AuditArgs),
    /// Search for a stem deciding a front family.
    Galvin(GalvinArgs),
    /// Least finite Ramsey witness.
    Ramsey(RamseyArgs),
    /// Replay a Galvin or Ramsey certificate.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct SpaceArgs {
    #[arg(long, value_enum, default_value_t = SpaceKind::Ellentuck)]
    space: SpaceKind,
    #[arg(long, default_value_t = 8)]
    ground: u32,
    #[arg(long, default_value_t = 2)]
    q: u8,
    #[arg(long, default_value_t = 4)]
    max_cols: usize,
    #[arg(long, default_value_t = 6)]
    domain: usize,
}

impl SpaceArgs {
    fn spec(&self) -> SpaceSpec {
        match self.space {
            SpaceKind::Ellentuck => SpaceSpec::Ellentuck { ground: self.ground },
            SpaceKind::Matrix => SpaceSpec::Matrix { q: self.q, max_cols: self.max_cols },
            SpaceKind::Partition => SpaceSpec::Partition { domain: self.domain },
        }
    }
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Largest depth visited by A5 and A6 (default 4 on Ellentuck, else 3).
    #[arg(long)]
    depth: Option<usize>,
    /// Largest approximation length visited by A5 and A6 (default 2 on
    /// Ellentuck, else 3).
    #[arg(long)]
    max_len: Option<usize>,
    /// Run A6 (default on Ellentuck only).
    #[arg(long, overrides_with = "no_a6")]
    a6: bool,
    #[arg(long)]
    no_a6: bool,
    #[arg(long)]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct GalvinArgs {
    /// Family file with a `# space=… length_bound=…` header.
    #[arg(long, conflicts_with = "member")]
    family: Option<PathBuf>,
    #[command(flatten)]
    space: SpaceArgs,
    /// Inline family member; repeatable.
    #[arg(long)]
    member: Vec<String>,
    /// Length bound of an inline family.
    #[arg(long)]
    length_bound: Option<usize>,
    /// Base stem (default: the largest stem of the truncation).
    #[arg(long)]
    base: Option<String>,
    /// Defaults to the length bound.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long)]
    ceiling: Option<u64>,
}

#[derive(Args)]
struct RamseyArgs {
    #[command(subcommand)]
    instance: InstanceArgs,
}

#[derive(Subcommand)]
enum InstanceArgs {
    /// Colorings of k-sets of {0, …, M-1}.
    Classical {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// Colorings of k-dimensional subspaces of F_q^m.
    Glr {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// Colorings of k-block partitions of {0, …, n-1}.
    Paramset {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: SearchArgs,
    },
    /// Ellentuck's space on {0, …, ground-1}.
    Abstract {
        #[arg(long)]
        ground: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: SearchArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ModeArg {
    Exhaustive,
    Backtracking,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Search nodes per level in backtracking mode.
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
    /// Largest coloring count enumerated in exhaustive mode.
    #[arg(long)]
    ceiling: Option<u64>,
    /// Skip the independent replay of the certificate.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate file, or `-` for standard input.
    path: PathBuf,
}

fn env_ceiling() -> Result<Option<u64>, Failure> {
    match std::env::var(CEILING_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{CEILING_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn ceiling(flag: Option<u64>, default: u64) -> Result<u64, Failure> {
    let c = match flag {
        Some(c) => c,
        None => env_ceiling()?.unwrap_or(default),
    };
    if c == 0 {
        return Err(Failure::usage("ceiling must be positive"));
    }
    Ok(c)
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))
}

fn verdict_out(axiom: Axiom, v: &Verdict) -> VerdictOut {
    let (status, instances, boundary_skipped, witness) = match v {
        Verdict::BoundedPass { instances, boundary_skipped } => {
            ("bounded-pass", Some(*instances), Some(*boundary_skipped), None)
        }
        Verdict::Counterexample { witness } => ("counterexample", None, None, Some(witness.clone())),
        Verdict::Skipped => ("skipped", None, None, None),
    };
    VerdictOut { axiom: axiom.label().to_string(), status, instances, boundary_skipped, witness }
}

struct RunAudit(AuditBounds);

impl WithSpace for RunAudit {
    type Out = AuditOut;

    fn run<S: Space>(self, space: &S, _top: S::Approx) -> Result<AuditOut, Failure> {
        let r = audit_axioms(space, &self.0)?;
        Ok(AuditOut {
            space: r.space.clone(),
            params: r.params.clone(),
            stems: r.stems,
            max_depth: r.bounds.max_depth,
            max_len: r.bounds.max_len,
            a6: r.bounds.a6,
            passed: r.passed(),
            verdicts: r.verdicts.iter().map(|(a, v)| verdict_out(*a, v)).collect(),
            text: r.to_string(),
        })
    }
}

fn audit(args: &AuditArgs) -> Result<(Report, u8), Failure> {
    let ell = args.space.space == SpaceKind::Ellentuck;
    let depth = args.depth.unwrap_or(if ell { 4 } else { 3 });
    let max_len = args.max_len.unwrap_or(if ell { 2 } else { 3 });
    let a6 = if args.a6 {
        true
    } else if args.no_a6 {
        false
    } else {
        ell
    };
    let mut bounds = AuditBounds::new(depth, max_len).with_ceiling(ceiling(args.ceiling, DEFAULT_CEILING)?);
    if !a6 {
        bounds = bounds.without_a6();
    }
    let out = args.space.spec().visit(RunAudit(bounds))?;
    let code = if out.passed { EXIT_FOUND } else { EXIT_WEAK };
    Ok((Report::Audit(out), code))
}

struct RunGalvin<'a> {
    members: &'a [String],
    length_bound: usize,
    base: Option<&'a str>,
    params: GalvinParams,
}

impl WithSpace for RunGalvin<'_> {
    type Out = GalvinOut;

    fn run<S: Space>(self, space: &S, top: S::Approx) -> Result<GalvinOut, Failure> {
        let top = match self.base {
            Some(b) => space.parse(b)?,
            None => top,
        };
        let base = Stem::new(space, top)?;
        let members = self.members.iter().map(|m| space.parse(m)).collect::<Result<Vec<_>, _>>()?;
        let family = FrontFamily::new(space, members, self.length_bound)?;
        let r = galvin_search(space, &base, &family, &self.params)?;
        let (outcome, stem, hits, blocking, reason) = match r.outcome {
            Dichotomy::Alt1 { stem } => ("alt1", stem, vec![], None, None),
            Dichotomy::Alt2 { stem, hits } => {
                ("alt2", stem, hits.iter().map(ToString::to_string).collect(), None, None)
            }
            Dichotomy::Inconclusive { candidate, blocking, reason } => {
                ("inconclusive", candidate, vec![], Some(blocking.to_string()), Some(reason))
            }
        };
        Ok(GalvinOut {
            space: space.name().to_string(),
            params: space.params(),
            base: base.to_string(),
            length_bound: self.length_bound,
            members: family.len(),
            outcome,
            stem_length: space.length(stem.top()),
            stem: stem.to_string(),
            hits,
            blocking,
            reason,
            nodes: r.nodes,
            certificate: r.certificate,
        })
    }
}

fn galvin(args: &GalvinArgs) -> Result<(Report, u8), Failure> {
    let (spec, members, length_bound) = match &args.family {
        Some(path) => {
            let f = FamilyFile::parse(&read_input(path)?)?;
            if args.length_bound.is_some_and(|l| l != f.length_bound) {
                return Err(Failure::usage("--length-bound disagrees with the family header"));
            }
            (f.space, f.members, f.length_bound)
        }
        None => {
            let l = args.length_bound.ok_or_else(|| Failure::usage("an inline family needs --length-bound"))?;
            (args.space.spec(), args.member.clone(), l)
        }
    };
    let params = GalvinParams::new(args.horizon.unwrap_or(length_bound))
        .with_min_len(args.min_len)
        .with_ceiling(ceiling(args.ceiling, DEFAULT_CEILING)?);
    let out = spec.visit(RunGalvin { members: &members, length_bound, base: args.base.as_deref(), params })?;
    let code = if out.outcome == "inconclusive" { EXIT_UNDECIDED } else { EXIT_FOUND };
    Ok((Report::Galvin(out), code))
}

fn ramsey_out(r: &WitnessResult, replay: Option<Result<Replay, String>>) -> RamseyOut {
    let outcome = match r.outcome {
        WitnessOutcome::Found(_) => "found",
        WitnessOutcome::LowerBound(_) => "lower-bound",
        WitnessOutcome::ExhaustedBound(_) => "exhausted",
    };
    let levels = r
        .levels
        .iter()
        .map(|l| LevelOut {
            level: l.level,
            keys: l.keys,
            configs: l.configs,
            checked: l.checked,
            result: match l.result {
                LevelResult::Bad => "bad",
                LevelResult::AllGood => "good",
                LevelResult::Budget => "budget",
            },
        })
        .collect();
    let (verified, replay) = match replay {
        None => (None, None),
        Some(Ok(Replay::None)) => (Some(true), Some("bad coloring checked".to_string())),
        Some(Ok(Replay::Enumerated(n))) => (Some(true), Some(format!("enumerated {n} colorings"))),
        Some(Ok(Replay::Searched(n))) => (Some(true), Some(format!("searched {n} nodes"))),
        Some(Err(e)) => (Some(false), Some(e)),
    };
    RamseyOut {
        instance: r.instance.to_string(),
        mode: r.mode.name(),
        outcome,
        value: r.value(),
        checked: r.checked(),
        levels,
        verified,
        replay,
        certificate: r.certificate(),
    }
}

fn ramsey(args: &RamseyArgs) -> Result<(Report, u8), Failure> {
    let common = match &args.instance {
        InstanceArgs::Classical { common, .. }
        | InstanceArgs::Glr { common, .. }
        | InstanceArgs::Paramset { common, .. }
        | InstanceArgs::Abstract { common, .. } => common,
    };
    let mode = match common.mode {
        ModeArg::Exhaustive => Mode::Exhaustive { ceiling: ceiling(common.ceiling, EXHAUSTIVE_CEILING)? },
        ModeArg::Backtracking => Mode::Backtracking { budget: common.budget },
    };
    let (s, bound) = (common.s, common.bound);
    let r = match args.instance {
        InstanceArgs::Classical { k, n, .. } => classical_ramsey_number(k, n, s, bound, mode)?,
        InstanceArgs::Glr { q, k, n, .. } => glr_witness(q, k, n, s, bound, mode)?,
        InstanceArgs::Paramset { k, m, .. } => gr_paramset_witness(k, m, s, bound, mode)?,
        InstanceArgs::Abstract { ground, k, n, .. } => abstract_ellentuck_witness(ground, k, n, s, bound, mode)?,
    };
    let replay = (!common.no_verify).then(|| verify_result(&r).map(|v| v.replay).map_err(|e| e.to_string()));
    let out = ramsey_out(&r, replay);
    let code = match (out.verified, r.outcome) {
        (Some(false), _) => EXIT_REJECTED,
        (_, WitnessOutcome::Found(_)) => EXIT_FOUND,
        (_, WitnessOutcome::LowerBound(_)) => EXIT_WEAK,
        (_, WitnessOutcome::ExhaustedBound(_)) => EXIT_UNDECIDED,
    };
    Ok((Report::Ramsey(out), code))
}

struct RunVerify<'a>(&'a str);

impl WithSpace for RunVerify<'_> {
    type Out = Verified;

    fn run<S: Space>(self, space: &S, _top: S::Approx) -> Result<Verified, Failure> {
        Ok(verify_certificate(space, self.0)?)
    }
}

fn verify(args: &VerifyArgs) -> Result<(Report, u8), Failure> {
    let text = read_input(&args.path)?;
    let first = text.lines().next().unwrap_or("");
    let (kind, result) = if let Some(header) = first.strip_prefix("galvin ") {
        let spec = SpaceSpec::from_pairs(&space_arg::pairs(header)?)?;
        let r = match spec.visit(RunVerify(&text)) {
            Ok(v) => Ok(format!("{v:?}").to_lowercase()),
            Err(f) => Err(f.message),
        };
        ("galvin", r)
    } else if first.starts_with("instance ") {
        let r = verify_witness(&text).map(|v| v.outcome.to_string()).map_err(|e| e.to_string());
        ("ramsey", r)
    } else {
        return Err(Failure::usage("not a certificate: expected a 'galvin' or 'instance' first line"));
    };
    let (accepted, outcome, detail) = match result {
        Ok(o) => (true, o, String::new()),
        Err(e) => (false, "rejected".to_string(), e),
    };
    let code = if accepted { EXIT_FOUND } else { EXIT_REJECTED };
    Ok((Report::Verify(VerifyOut { kind, accepted, outcome, detail }), code))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let (report, code) = match &cli.command {
        Command::Audit(a) => audit(a)?,
        Command::Galvin(g) => galvin(g)?,
        Command::Ramsey(r) => ramsey(r)?,
        Command::Verify(v) => verify(v)?,
    };
    let seconds = if cli.no_timing { 0.0 } else { start.elapsed().as_secs_f64() };
    let text = report.render(cli.format, seconds).map_err(Failure::usage)?;
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::usage(format!("writing {}: {e}", path.display())))?
        }
        None => print!("{text}"),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("ramspace: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
