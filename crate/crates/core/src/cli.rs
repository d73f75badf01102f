//! The `degen` command line.
//!
//! Every command prints one JSON [`RunReport`] on stdout. Human-oriented
//! diagnostics, including elapsed time, go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::completion::{
    build_template, completion_pit, hitting_attempt, sz_test, PitBudget, Strategy, DEFAULT_SAMPLE_BOUND,
};
use crate::degeneracy::{
    check_tensor_verdict, decide, decide_bilinear_n2, decide_quadratic, Certificate, SearchConfig,
    Verdict,
};
use crate::error::{Error, Result};
use crate::failures::{demo_direct_sum_failure, demo_disjoint_support, demo_vandermonde_failure};
use crate::hyperdet::{degenerate_generator, hyperdet, Format};
use crate::instances::{
    verify_bilinear_witness, verify_pencil_witness, verify_quadratic_witness, verify_tensor_witness, Instance,
    Tensor3, Witness, WitnessTriple,
};
use crate::reductions::{
    bilinear_to_pencil, extract_bilinear_witness, lift_bilinear_witness, lift_quad_witness, pencil_to_tensor,
    quad_to_bilinear, ReductionTrace,
};
use crate::report::{digest, InputDigest, RunReport};
use crate::seed;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "degen", version, about = "Exact degeneracy tools for quadratic, bilinear, pencil and tensor instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce an instance along quadratic → bilinear → pencil → tensor.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        stage: Stage,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Witness for the input, transported and re-verified at every stage.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Exit 0 if the witness verifies, 1 if not, 2 on malformed input.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Exit 0 feasible, 1 infeasible, 3 unknown, 2 malformed.
    Decide {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Hyperdeterminant of a tensor in a supported format
    Hyperdet {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Completion polynomial experiments on a tensor.
    Complete {
        #[arg(long = "in")]
        input: PathBuf,
        /// Random evaluation only.
        #[arg(long, conflicts_with = "hit")]
        sz: bool,
        /// A single deterministic hitting strategy.
        #[arg(long, value_enum)]
        hit: Option<HitStrategy>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long = "sample-bound", default_value_t = DEFAULT_SAMPLE_BOUND)]
        sample_bound: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate a random tensor, optionally degenerate with a planted witness.
    Gen {
        #[arg(long)]
        degenerate: bool,
        #[arg(long, value_parser = parse_format)]
        format: Format,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the planted witness.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Counterexamples to deterministic embeddings.
    Demo {
        #[arg(value_enum)]
        which: DemoKind,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long = "denominator-bound")]
    denominator_bound: Option<u64>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        let d = SearchConfig::with_seed(self.seed);
        SearchConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            denominator_bound: self.denominator_bound.unwrap_or(d.denominator_bound),
            ..d
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Stage {
    Bilinear,
    Pencil,
    Tensor,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HitStrategy {
    Zeros,
    UnitPoints,
    CoordinateRamp,
}

impl From<HitStrategy> for Strategy {
    fn from(h: HitStrategy) -> Self {
        match h {
            HitStrategy::Zeros => Strategy::Zeros,
            HitStrategy::UnitPoints => Strategy::UnitPoints,
            HitStrategy::CoordinateRamp => Strategy::CoordinateRamp,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoKind {
    DirectSum,
    Pairwise,
    Vandermonde,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    let dims: [usize; 3] = parts
        .try_into()
        .map_err(|_| "format needs three comma-separated sizes".to_string())?;
    Format::new(dims).map_err(|e| e.to_string())
}

/// Command failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_MALFORMED,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(RunReport, i32), Failure>;

struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    fn new() -> Self {
        Self { digests: Vec::new() }
    }

    fn read(&mut self, path: &PathBuf) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        self.digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: digest(&bytes),
        });
        String::from_utf8(bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    fn instance(&mut self, path: &PathBuf) -> Result<Instance> {
        Instance::from_json(&self.read(path)?)
    }

    fn witness(&mut self, path: &PathBuf) -> Result<Witness> {
        Witness::from_json(&self.read(path)?)
    }

    fn report(self, command: &str, seed: Option<u64>, result: Value) -> RunReport {
        let mut r = RunReport::new(command, seed);
        r.inputs = self.digests;
        r.result = result;
        r
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn tensor_of(inst: Instance) -> Result<Tensor3> {
    match inst {
        Instance::Tensor(t) => Ok(t),
        other => Err(Error::InvalidInstance(format!("expected a tensor, got {}", other.kind()))),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn need<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidArgument(format!("witness is missing {what}")))
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let started = Instant::now();
    let outcome = dispatch(cli.command);
    let elapsed = started.elapsed();
    match outcome {
        Ok((report, code)) => {
            let _ = writeln!(stdout, "{}", report.to_json());
            let _ = writeln!(stderr, "elapsed_ms={}", elapsed.as_millis());
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> CmdResult {
    match cmd {
        Command::Reduce { input, stage, out, witness } => cmd_reduce(&input, stage, out.as_ref(), witness.as_ref()),
        Command::Verify { input, witness } => cmd_verify(&input, &witness),
        Command::Decide { input, search } => cmd_decide(&input, &search),
        Command::Hyperdet { input } => cmd_hyperdet(&input),
        Command::Complete { input, sz, hit, trials, sample_bound, seed } => {
            cmd_complete(&input, sz, hit, trials, sample_bound, seed)
        }
        Command::Gen { degenerate, format, seed, out, witness } => {
            cmd_gen(degenerate, format, seed, out.as_ref(), witness.as_ref())
        }
        Command::Demo { which, seed, n } => cmd_demo(which, seed, n),
    }
}

fn stage_rank(kind: &str) -> usize {
    match kind {
        "quadratic" => 0,
        "bilinear" => 1,
        "pencil" => 2,
        _ => 3,
    }
}

fn witness_failure(stage: &str) -> Failure {
    Failure {
        code: EXIT_NEGATIVE,
        message: format!("witness does not verify at stage {stage}"),
    }
}

fn cmd_reduce(input: &PathBuf, stage: Stage, out: Option<&PathBuf>, witness: Option<&PathBuf>) -> CmdResult {
    let mut files = Inputs::new();
    let inst = files.instance(input)?;
    let mut w = witness.map(|p| files.witness(p)).transpose()?;
    let target = match stage {
        Stage::Bilinear => 1,
        Stage::Pencil => 2,
        Stage::Tensor => 3,
    };
    if stage_rank(inst.kind()) > target {
        return Err(Error::InvalidArgument(format!(
            "cannot reduce a {} instance to an earlier stage",
            inst.kind()
        ))
        .into());
    }
    let mut trace = ReductionTrace::default();
    let mut current = inst;
    if let Some(w) = &w {
        if !verify_any(&current, w)? {
            return Err(witness_failure(current.kind()));
        }
    }
    while stage_rank(current.kind()) < target {
        let (next, t) = match &current {
            Instance::Quadratic(q) => {
                let (b, t) = quad_to_bilinear(q);
                if let Some(wit) = &w {
                    let (x, y) = lift_quad_witness(&wit.x)?;
                    w = Some(Witness::bilinear(x, y));
                }
                (Instance::Bilinear(b), t)
            }
            Instance::Bilinear(b) => {
                let (p, t) = bilinear_to_pencil(b);
                if let Some(wit) = &w {
                    let lifted = lift_bilinear_witness(&wit.x, &need(wit.y.clone(), "y")?, b.r())?;
                    w = Some(lifted.into());
                }
                (Instance::Pencil(p), t)
            }
            Instance::Pencil(p) => {
                let (t3, t) = pencil_to_tensor(p);
                (Instance::Tensor(t3), t)
            }
            Instance::Tensor(_) => unreachable!("loop stops at the tensor stage"),
        };
        trace = trace.extend(t);
        current = next;
        if let Some(wit) = &w {
            if !verify_any(&current, wit)? {
                return Err(witness_failure(current.kind()));
            }
        }
    }
    if let Some(path) = out {
        write_file(path, &current.to_json())?;
    }
    let result = json!({
        "stage": current.kind(),
        "instance": current,
        "trace": trace,
        "resolved_provenance": trace.resolved(),
        "witness": w.as_ref().map(witness_value),
    });
    Ok((files.report("reduce", None, result), EXIT_OK))
}

fn witness_value(w: &Witness) -> Value {
    serde_json::from_str(&w.to_json()).expect("witness json")
}

fn verify_any(inst: &Instance, w: &Witness) -> Result<bool> {
    match inst {
        Instance::Quadratic(q) => verify_quadratic_witness(q, &w.x),
        Instance::Bilinear(b) => verify_bilinear_witness(b, &w.x, &need(w.y.clone(), "y")?),
        Instance::Pencil(p) => verify_pencil_witness(p, &need(w.triple(), "y or z")?),
        Instance::Tensor(t) => verify_tensor_witness(t, &need(w.triple(), "y or z")?),
    }
}

fn cmd_verify(input: &PathBuf, witness: &PathBuf) -> CmdResult {
    let mut files = Inputs::new();
    let inst = files.instance(input)?;
    let w = files.witness(witness)?;
    let ok = verify_any(&inst, &w)?;
    let result = json!({ "kind": inst.kind(), "verified": ok });
    Ok((files.report("verify", None, result), if ok { EXIT_OK } else { EXIT_NEGATIVE }))
}

/// Decides a tensor-shaped problem and maps a tensor witness back through
/// `back`.
fn decide_via_tensor(
    t: &Tensor3,
    cfg: &SearchConfig,
    back: impl Fn(&WitnessTriple) -> Result<Certificate>,
) -> Result<Verdict> {
    let v = decide(t, cfg)?;
    debug_assert!(check_tensor_verdict(t, &v).unwrap_or(false));
    Ok(match v.tensor_witness() {
        Some(w) => Verdict::feasible(back(w)?, v.diagnostics.clone()),
        None => v,
    })
}

fn cmd_decide(input: &PathBuf, search: &SearchArgs) -> CmdResult {
    let mut files = Inputs::new();
    let inst = files.instance(input)?;
    let cfg = search.config();
    cfg.validate()?;
    let verdict = match &inst {
        Instance::Quadratic(q) => decide_quadratic(q, &cfg)?,
        Instance::Bilinear(b) if b.n() == 2 => decide_bilinear_n2(b)?,
        Instance::Bilinear(b) => {
            let (p, _) = bilinear_to_pencil(b);
            let (t, _) = pencil_to_tensor(&p);
            decide_via_tensor(&t, &cfg, |w| {
                let (x, y) = extract_bilinear_witness(&p, w)?;
                Ok(Certificate::BilinearWitness { x, y })
            })?
        }
        Instance::Pencil(p) => {
            let t = p.slice_tensor();
            decide_via_tensor(&t, &cfg, |w| {
                if !verify_pencil_witness(p, w)? {
                    return Err(Error::Consistency("tensor witness fails on the pencil".into()));
                }
                Ok(Certificate::TensorWitness { witness: w.clone() })
            })?
        }
        Instance::Tensor(t) => decide(t, &cfg)?,
    };
    let code = match verdict.outcome {
        crate::degeneracy::Outcome::FeasibleCertified => EXIT_OK,
        crate::degeneracy::Outcome::InfeasibleCertified => EXIT_NEGATIVE,
        crate::degeneracy::Outcome::Unknown => EXIT_UNKNOWN,
    };
    let result = json!({ "kind": inst.kind(), "config": cfg, "verdict": verdict });
    Ok((files.report("decide", Some(search.seed), result), code))
}

fn cmd_hyperdet(input: &PathBuf) -> CmdResult {
    let mut files = Inputs::new();
    let t = tensor_of(files.instance(input)?)?;
    let h = hyperdet(&t)?;
    Ok((files.report("hyperdet", None, to_value(&h)), EXIT_OK))
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| Error::InvalidArgument(format!("{what} is randomized and requires --seed")))
}

fn cmd_complete(
    input: &PathBuf,
    sz: bool,
    hit: Option<HitStrategy>,
    trials: usize,
    sample_bound: u64,
    seed: Option<u64>,
) -> CmdResult {
    let mut files = Inputs::new();
    let t = tensor_of(files.instance(input)?)?;
    let tpl = build_template(Format::of(&t))?;
    let (mode, outcome, used_seed) = if let Some(h) = hit {
        let point = hitting_attempt(&t, &tpl, h.into())?;
        ("hit", json!({ "strategy": Strategy::from(h), "hitting_point": point }), None)
    } else if sz {
        let s = require_seed(seed, "--sz")?;
        ("sz", to_value(&sz_test(&t, &tpl, trials, sample_bound, s)?), Some(s))
    } else {
        let s = require_seed(seed, "completion PIT")?;
        let budget = PitBudget { trials, sample_bound, seed: s };
        ("pit", to_value(&completion_pit(&t, &tpl, budget)?), Some(s))
    };
    let result = json!({ "mode": mode, "template": tpl, "outcome": outcome });
    Ok((files.report("complete", used_seed, result), EXIT_OK))
}

fn cmd_gen(
    degenerate: bool,
    format: Format,
    seed_value: u64,
    out: Option<&PathBuf>,
    witness: Option<&PathBuf>,
) -> CmdResult {
    let (t, w) = if degenerate {
        if format.0.iter().filter(|&&d| d == 1).count() >= 2 {
            return Err(Error::InvalidArgument(format!(
                "format {:?} has no nonzero degenerate tensor",
                format.0
            ))
            .into());
        }
        let (t, w) = degenerate_generator(format, seed_value);
        (t, Some(w))
    } else {
        if witness.is_some() {
            return Err(Error::InvalidArgument("--witness needs --degenerate".into()).into());
        }
        let mut rng = seed::rng(seed_value);
        (Tensor3::from_fn(format.0, |_, _, _| seed::small_int(&mut rng, 3)), None)
    };
    let inst = Instance::Tensor(t);
    if let Some(path) = out {
        write_file(path, &inst.to_json())?;
    }
    if let (Some(path), Some(w)) = (witness, &w) {
        write_file(path, &Witness::from(w.clone()).to_json())?;
    }
    let result = json!({
        "format": format,
        "degenerate": degenerate,
        "instance": inst,
        "witness": w,
    });
    Ok((Inputs::new().report("gen", Some(seed_value), result), EXIT_OK))
}

fn cmd_demo(which: DemoKind, seed: Option<u64>, n: usize) -> CmdResult {
    let (demo, used_seed) = match which {
        DemoKind::DirectSum => {
            let s = require_seed(seed, "direct_sum")?;
            (demo_direct_sum_failure(s)?, Some(s))
        }
        DemoKind::Pairwise => (demo_disjoint_support(n)?, None),
        DemoKind::Vandermonde => (demo_vandermonde_failure(n)?, None),
    };
    let code = if demo.verified { EXIT_OK } else { EXIT_NEGATIVE };
    Ok((Inputs::new().report("demo", used_seed, to_value(&demo)), code))
}
