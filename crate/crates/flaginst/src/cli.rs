//! The `flaginst` command line.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error as ThisError;

use crate::chow::{degree, eval_expr};
use crate::cohom::h_line;
use crate::cohom::tables::{beilinson_table, Which};
use crate::curves::{conic_param, line_param, pencil, ConicPoint, Side};
use crate::error::Error;
use crate::field::{parse_scalar, scalar_to_string, Scalar, DEFAULT_PRIME};
use crate::jump::{pencil_jump_count, scan_grid_jobs};
use crate::monad::{
    charge1_family, charge2_example, generate_mon2, split_charge1, stability_decide, verify_monad, LineBundleMonad,
    VerifyConfig,
};
use crate::restrict::{jumping_order, splitting_type, Curve};
use crate::ring::Bidegree;

#[derive(Debug, Parser)]
#[command(name = "flaginst", version, about = "Instanton bundles on the flag threefold via monads")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Everything a randomized computation depends on.
#[derive(Clone, Debug, Args, Serialize)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Prime for fiberwise rank checks.
    #[arg(long, global = true, env = "FLAGINST_PRIME", default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Random points per rank check.
    #[arg(long, global = true, env = "FLAGINST_TRIALS", default_value_t = 40)]
    pub trials: usize,
    /// Worker threads for scans; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl RunConfig {
    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { prime: self.prime, trials: self.trials, seed: self.seed }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chow ring arithmetic.
    Chow {
        #[command(subcommand)]
        cmd: ChowCmd,
    },
    /// Cohomology of line bundles and monads.
    Coh {
        #[command(subcommand)]
        cmd: CohCmd,
    },
    Monad {
        #[command(subcommand)]
        cmd: MonadCmd,
    },
    /// Splitting type on a conic or line.
    Restrict {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// p and L, six numbers: 1,2,-1,3,1,1 (or 1,2,-1:3,1,1).
        #[arg(long, conflicts_with = "line", required_unless_present = "line", allow_hyphen_values = true)]
        conic: Option<String>,
        /// Family (1 or 2) and datum: 1,1,2,-1.
        #[arg(long, allow_hyphen_values = true)]
        line: Option<String>,
    },
    Jump {
        #[command(subcommand)]
        cmd: JumpCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChowCmd {
    /// Evaluate an expression such as (h1+h2)^3.
    Eval { expr: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WhichArg {
    First,
    Second,
}

#[derive(Debug, Subcommand)]
pub enum CohCmd {
    /// h•(O(a,b)).
    Line {
        #[arg(allow_negative_numbers = true)]
        a: i32,
        #[arg(allow_negative_numbers = true)]
        b: i32,
    },
    /// Beilinson table of a monad.
    Table {
        #[arg(long)]
        charge: usize,
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FixtureKind {
    Charge1,
    Charge2,
    /// The charge-1 monad of O(1,−1) ⊕ O(−1,1).
    Split,
}

#[derive(Debug, Subcommand)]
pub enum MonadCmd {
    /// Seeded random monad of the given charge.
    Gen {
        #[arg(long)]
        charge: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    Verify {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    Stability {
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Built-in monads; charge1 takes f, g, γ, δ.
    Fixture {
        #[arg(value_enum)]
        kind: FixtureKind,
        #[arg(long, default_value = "1,2,3", allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value = "-1,0,2", allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum JumpCmd {
    /// Jumping conics in the pencil p + u·v or L + u·v through a base conic.
    Pencil {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long)]
        dir: Side,
        #[arg(long, allow_hyphen_values = true)]
        vec: String,
    },
    /// Jumping orders on random conics.
    Scan {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Compute(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Compute(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(s) => CliError::Usage(s),
            e @ (Error::CompositionNonzero { .. }
            | Error::RankDropAt { .. }
            | Error::Degeneracy { .. }
            | Error::DeterminantZero
            | Error::ChernMismatch { .. }
            | Error::SelfDuality(_)
            | Error::RootValidationFailed(_)) => CliError::Verification(e.to_string()),
            e => CliError::Compute(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn numbers(s: &str, n: usize) -> CliResult<Vec<Scalar>> {
    let v: Vec<Scalar> = s
        .split([',', ':'])
        .map(|t| parse_scalar(t.trim()).ok_or_else(|| CliError::Usage(format!("bad number {t:?} in {s:?}"))))
        .collect::<CliResult<_>>()?;
    if v.len() != n {
        return Err(CliError::Usage(format!("expected {n} numbers, got {} in {s:?}", v.len())));
    }
    Ok(v)
}

fn vec3(v: &[Scalar]) -> [Scalar; 3] {
    [v[0].clone(), v[1].clone(), v[2].clone()]
}

pub fn parse_conic(s: &str) -> CliResult<ConicPoint> {
    let v = numbers(s, 6)?;
    Ok(ConicPoint::new(vec3(&v[..3]), vec3(&v[3..]))?)
}

fn read_monad(input: &Option<PathBuf>) -> CliResult<LineBundleMonad> {
    let text = match input.as_deref() {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(Error::from)?;
            s
        }
    };
    Ok(LineBundleMonad::from_json(&text)?)
}

fn write_out(path: &Option<PathBuf>, text: &str) -> CliResult<()> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(Error::from)?;
    }
    Ok(())
}

fn render<T: Serialize>(cfg: &RunConfig, value: &T, text: String) -> CliResult<String> {
    if cfg.json {
        Ok(serde_json::to_string_pretty(value).map_err(Error::from)? + "\n")
    } else {
        Ok(text)
    }
}

/// Run a parsed command; the returned text goes to stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Chow { cmd: ChowCmd::Eval { expr } } => {
            let c = eval_expr(expr)?;
            let d = scalar_to_string(&degree(&c));
            render(cfg, &serde_json::json!({ "class": c, "degree": d }), format!("{c}\ndegree: {d}\n"))
        }
        Command::Coh { cmd: CohCmd::Line { a, b } } => {
            let h = h_line(Bidegree::new(*a, *b));
            render(cfg, &h, format!("{h}\n"))
        }
        Command::Coh { cmd: CohCmd::Table { charge, which, input } } => {
            let m = read_monad(input)?;
            if m.charge != *charge {
                return Err(CliError::Usage(format!("monad has charge {}, not {charge}", m.charge)));
            }
            let which = match which {
                WhichArg::First => Which::First,
                WhichArg::Second => Which::Second,
            };
            let t = beilinson_table(&m, which)?;
            render(cfg, &t, t.to_string())
        }
        Command::Monad { cmd } => run_monad(cfg, cmd),
        Command::Restrict { input, conic, line } => {
            let m = read_monad(input)?;
            if let Some(c) = conic {
                let c = parse_conic(c)?;
                let order = jumping_order(&m, &c)?;
                if !c.is_smooth() {
                    let v = serde_json::json!({ "conic": c.to_string(), "smooth": false, "order": order });
                    return render(cfg, &v, format!("{c} is reducible\njumping order: {order:?}\n"));
                }
                let st = splitting_type(&m, &Curve::Conic(conic_param(&c)?))?;
                let v = serde_json::json!({ "conic": c.to_string(), "smooth": true, "splitting": st, "order": order });
                render(cfg, &v, format!("{c}\nsplitting type: {:?}\njumping order: {order:?}\n", st.degrees))
            } else {
                let v = numbers(line.as_deref().unwrap_or_default(), 4)?;
                let family = match scalar_to_string(&v[0]).as_str() {
                    "1" => 1,
                    "2" => 2,
                    f => return Err(CliError::Usage(format!("line family must be 1 or 2, got {f}"))),
                };
                let lp = line_param(family, vec3(&v[1..]))?;
                let st = splitting_type(&m, &Curve::Line(lp))?;
                render(cfg, &st, format!("splitting type: {:?}\n", st.degrees))
            }
        }
        Command::Jump { cmd: JumpCmd::Pencil { input, base, dir, vec } } => {
            let m = read_monad(input)?;
            let spec = pencil(&parse_conic(base)?, *dir, vec3(&numbers(vec, 3)?))?;
            let cert = pencil_jump_count(&m, &spec)?;
            render(cfg, &cert, cert.to_string())
        }
        Command::Jump { cmd: JumpCmd::Scan { input, n, out } } => {
            let m = read_monad(input)?;
            let rep = scan_grid_jobs(&m, *n, cfg.seed, cfg.jobs)?;
            write_out(out, &rep.to_csv()?)?;
            Ok(rep.summary_json()? + "\n")
        }
    }
}

fn run_monad(cfg: &RunConfig, cmd: &MonadCmd) -> CliResult<String> {
    match cmd {
        MonadCmd::Gen { charge, out, budget } => {
            let (m, _, log) = generate_mon2(*charge, cfg.seed, *budget, &cfg.verify_config())?;
            let json = m.to_json();
            match out {
                Some(_) => {
                    write_out(out, &json)?;
                    render(cfg, &log, format!("charge {charge} monad after {} attempt(s), {:?} strategy\n", log.attempts, log.strategy))
                }
                None => Ok(json),
            }
        }
        MonadCmd::Verify { input } => {
            let m = read_monad(input)?;
            let rep = verify_monad(&m, &cfg.verify_config());
            if let Some(e) = rep.error(m.charge) {
                eprintln!("{}", serde_json::to_string_pretty(&rep).map_err(Error::from)?);
                return Err(CliError::Verification(e.to_string()));
            }
            let text = format!(
                "verified: charge {}, {} rank trials mod {}, c2 = {}{}\n",
                m.charge,
                rep.trials,
                rep.prime,
                rep.chern.as_ref().map(|c| c.c2.to_string()).unwrap_or_default(),
                rep.determinant.as_ref().map(|d| format!(", D(A) = {d}")).unwrap_or_default()
            );
            render(cfg, &rep, text)
        }
        MonadCmd::Stability { input } => {
            let m = read_monad(input)?;
            let s = stability_decide(&m)?;
            render(cfg, &s, format!("{s}\n"))
        }
        MonadCmd::Fixture { kind, f, g, gamma, delta, out } => {
            let m = match kind {
                FixtureKind::Charge1 => {
                    let one = |s: &str| numbers(s, 1).map(|v| v[0].clone());
                    charge1_family(vec3(&numbers(f, 3)?), vec3(&numbers(g, 3)?), one(gamma)?, one(delta)?)
                }
                FixtureKind::Charge2 => charge2_example(),
                FixtureKind::Split => split_charge1(),
            };
            let json = m.to_json();
            write_out(out, &json)?;
            Ok(if out.is_some() { String::new() } else { json })
        }
    }
}

/// Parse arguments, run, print, and return the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
