//! Command-line front end.
//!
//! ```text
//! cliquesep gen map --voronoi 100 --seed 7 --out map.json
//! cliquesep sep map.json --out sep.json
//! cliquesep verify map.json sep.json
//! cliquesep solve map.json --problem mis
//! cliquesep bench map --sizes 64,128,256,512,1024 --seeds 5 --csv map.csv
//! ```
//!
//! Instance files are JSON objects tagged by `class`:
//!
//! ```text
//! {"class": "map", "regions": [[[x, y], ...], ...]}
//! {"class": "pseudodisk", "objects": [[[x, y], ...], ...]}
//! {"class": "geodesic", "polygon": [[x, y], ...], "disks": [{"center": [x, y], "radius": r}]}
//! {"class": "visibility", "polygon": {"outer": [[x, y], ...], "holes": [...]}, "points": [[x, y], ...]}
//! {"class": "abstract", "n": 10, "edges": [[0, 1], ...]}
//! ```
//!
//! Coordinates are JSON integers or strings holding an integer, a terminating decimal or a
//! fraction `p/q`. Exit codes: 0 success, 1 verification failure, 2 input error.

pub mod bench;
pub mod generate;
pub mod solve;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cliquesep::io::{separate, InstanceFile, SepOptions, SeparatorFile};
use cliquesep::verify::verify;

use crate::bench::{bench, write_csv, BenchClass, BenchOptions};
use crate::generate::{generate, GenSpec, DISK_DENSITY, DISK_SIDES};
use crate::solve::{solve, Problem};

pub const THREADS_ENV: &str = "CLIQUESEP_THREADS";

#[derive(Parser, Debug)]
#[command(name = "cliquesep", version, about = "Clique-based separators for geometric intersection graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Compute a separator.
    Sep(SepArgs),
    /// Re-check a separator against an instance.
    Verify(VerifyArgs),
    /// Solve MIS, FVS or q-coloring.
    Solve(SolveArgs),
    /// Separator weight over sizes and seeds.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// map, pseudodisk, geodesic, visibility or abstract.
    pub class: String,
    #[arg(long)]
    pub voronoi: Option<usize>,
    /// Grid of k x k squares (map) or grid graph (abstract).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub disks: Option<usize>,
    #[arg(long, default_value_t = DISK_DENSITY)]
    pub density: f64,
    #[arg(long, default_value_t = DISK_SIDES)]
    pub sides: usize,
    #[arg(long, default_value_t = 30)]
    pub vertices: usize,
    /// Radius range in percent of the polygon width.
    #[arg(long, default_value_t = 1)]
    pub rmin_pct: i64,
    #[arg(long, default_value_t = 3)]
    pub rmax_pct: i64,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub holes: usize,
    #[arg(long)]
    pub uniform: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["R", "N"])]
    pub comb: Option<Vec<usize>>,
    #[arg(long)]
    pub petersen: bool,
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub p: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SepArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Initial tolerance divisor for geodesic disks (tolerance = radius / TOL).
    #[arg(long)]
    pub tol: Option<u64>,
    #[arg(long)]
    pub no_verify: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub separator: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// mis, fvs or coloring.
    #[arg(long)]
    pub problem: String,
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long)]
    pub base_n: Option<usize>,
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// map, pseudodisk, geodesic, visibility or comb.
    pub class: String,
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Number of seeds, starting at --seed.
    #[arg(long, default_value_t = 5)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub no_verify: bool,
    #[arg(long)]
    pub no_timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn emit<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(input)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(input),
    }
}

fn gen_spec(a: &GenArgs) -> Result<GenSpec, Failure> {
    let bad = || Failure::Input(format!("no generator flag given for class {}", a.class));
    Ok(match a.class.as_str() {
        "map" => match (a.voronoi, a.grid) {
            (Some(n), _) => GenSpec::Voronoi { n },
            (None, Some(k)) => GenSpec::MapGrid { k },
            _ => return Err(bad()),
        },
        "pseudodisk" => GenSpec::Disks { n: a.disks.ok_or_else(bad)?, density: a.density, sides: a.sides },
        "geodesic" => GenSpec::Geodesic { vertices: a.vertices, disks: a.disks.ok_or_else(bad)?, lo_pct: a.rmin_pct, hi_pct: a.rmax_pct },
        "visibility" => match (&a.comb, a.uniform, a.points) {
            (Some(c), _, _) => GenSpec::Comb { r: c[0], n: c[1] },
            (None, Some(n), _) => GenSpec::Uniform { n },
            (None, None, Some(n)) => GenSpec::Points { n, holes: a.holes },
            _ => return Err(bad()),
        },
        "abstract" => match (a.petersen, a.grid, a.random) {
            (true, _, _) => GenSpec::Petersen,
            (false, Some(k), _) => GenSpec::Grid { k },
            (false, None, Some(n)) => GenSpec::Random { n, p: a.p },
            _ => return Err(bad()),
        },
        c => return Err(Failure::Input(format!("unknown class {}", c))),
    })
}

fn threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| Failure::Input(format!("{} must be a positive integer", THREADS_ENV))),
        Err(_) => Ok(flag),
    }
    .and_then(|t| match t {
        Some(0) => Err(Failure::Input("thread count must be positive".into())),
        t => Ok(t),
    })
}

pub fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen(a) => {
            let spec = gen_spec(&a)?;
            let inst = generate(&spec, a.seed).map_err(Failure::Input)?;
            emit(&inst.to_file(Some(a.seed), Some(spec.meta())), a.out.as_deref())
        }
        Command::Sep(a) => {
            let file: InstanceFile = read_json(&a.instance)?;
            let inst = file.instance().map_err(input)?;
            let (s, details) = separate(&inst, &SepOptions { tol_div: a.tol }).map_err(input)?;
            let mut out = SeparatorFile::new(inst.class(), &s, Some(details));
            let report = if a.no_verify { None } else { Some(verify(&inst, &s).map_err(input)?) };
            out.verified = report.as_ref().is_some_and(|r| r.ok());
            emit(&out, a.out.as_deref())?;
            match report {
                Some(r) if !r.ok() => Err(Failure::Verification(r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))),
                _ => Ok(()),
            }
        }
        Command::Verify(a) => {
            let file: InstanceFile = read_json(&a.instance)?;
            let sep: SeparatorFile = read_json(&a.separator)?;
            let inst = file.instance().map_err(input)?;
            if sep.class != inst.class() {
                return Err(Failure::Input(format!("separator class {} does not match instance class {}", sep.class, inst.class())));
            }
            let report = verify(&inst, &sep.separator()).map_err(input)?;
            emit(&report, a.out.as_deref())?;
            if report.ok() {
                Ok(())
            } else {
                Err(Failure::Verification(report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")))
            }
        }
        Command::Solve(a) => {
            let problem = match a.problem.as_str() {
                "mis" => Problem::Mis,
                "fvs" | "mif" => Problem::Fvs,
                "coloring" => Problem::Coloring(a.q),
                p => return Err(Failure::Input(format!("unknown problem {}", p))),
            };
            let file: InstanceFile = read_json(&a.instance)?;
            let inst = file.instance().map_err(input)?;
            let r = solve(&inst, problem, a.base_n, !a.no_verify, !a.no_timing).map_err(input)?;
            emit(&r, a.out.as_deref())?;
            match r.verified {
                Some(false) => Err(Failure::Verification("certificate check failed".into())),
                _ => Ok(()),
            }
        }
        Command::Bench(a) => {
            let class = BenchClass::parse(&a.class).ok_or_else(|| Failure::Input(format!("unknown bench class {}", a.class)))?;
            let seeds: Vec<u64> = (a.seed..a.seed + a.seeds).collect();
            let opts = BenchOptions { verify: !a.no_verify, timing: !a.no_timing, threads: threads(a.threads)? };
            let report = bench(class, &a.sizes, &seeds, &opts).map_err(Failure::Input)?;
            if let Some(p) = &a.csv {
                let f = fs::File::create(p).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e)))?;
                write_csv(&report, f).map_err(Failure::Input)?;
            }
            emit(&report, a.out.as_deref())?;
            if report.records.iter().any(|r| r.verified == Some(false)) {
                Err(Failure::Verification("a benchmark separator failed verification".into()))
            } else {
                Ok(())
            }
        }
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {}", m),
                Failure::Verification(m) => eprintln!("verification failed: {}", m),
            }
            f.code()
        }
    }
}
