//! The `zonolat` command line.
//!
//! Exit codes: 0 on success, 1 for malformed input or a failed TU check, 2
//! when the solver detects a broken internal invariant.

pub mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::constructions::{
    a_n_lattice, cographic_lattice, graphic_lattice, tensor_lattice, voronoi_first_kind, Digraph,
    ObtuseSuperbasisGram,
};
use crate::error::{Error, Result};
use crate::lattice::ZonotopalLattice;
use crate::matrix::TuStatus;
use crate::mmcc::{solve_cvp, CvpInstance, SolveOptions};
use crate::oracle::{brute_force_cvp, enumerate_primitive_chains, OracleLimits};
use crate::rational::{parse_rational, IntVector, Rational};

use files::{to_json, GramFile, ProblemFile, RationalText, SolutionFile, TraceEntry};

#[derive(Debug, Parser)]
#[command(name = "zonolat", version, about = "Exact CVP on zonotopal lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the closest vector problem in a problem file.
    Solve(SolveArgs),
    /// Write a problem file for a standard lattice family, with zero target.
    Construct(ConstructArgs),
    /// List the strict Voronoi vectors of the lattice in a problem file.
    Voronoi { file: PathBuf },
    /// Report TU status and whether the target lies in the span.
    Check { file: PathBuf },
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    /// Cross-check the answer by brute-force enumeration.
    #[arg(long)]
    pub oracle: bool,
    /// Write the per-iteration trace as JSON to this path.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Require the target to lie in the span instead of projecting it.
    #[arg(long)]
    pub no_project: bool,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[command(subcommand)]
    pub kind: ConstructKind,
    #[arg(short, long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// Flow lattice of a digraph (kernel of its incidence matrix).
    Graphic(GraphArgs),
    /// Cut lattice of a digraph.
    Cographic(GraphArgs),
    /// Lattice of Voronoi's first kind from an obtuse superbasis Gram matrix.
    Vfk {
        #[arg(long, value_name = "PATH")]
        gram: PathBuf,
    },
    /// The tensor product `A_m ⊗ A_n`.
    Tensor {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weights: Option<String>,
    },
    /// The root lattice `A_n`.
    An {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub vertices: usize,
    /// Comma-separated `tail-head` pairs of 0-based vertices, e.g. `0-1,1-2`.
    #[arg(long)]
    pub arcs: String,
    /// Comma-separated weights, one per arc.
    #[arg(long)]
    pub weights: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_internal() {
                2
            } else {
                1
            }
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Solve(args) => {
            let text = cmd_solve(args)?;
            out.write_all(text.as_bytes())?;
        }
        Command::Construct(args) => {
            let text = cmd_construct(&args.kind)?.to_json();
            match &args.output {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Voronoi { file } => out.write_all(cmd_voronoi(file)?.as_bytes())?,
        Command::Check { file } => out.write_all(cmd_check(file)?.as_bytes())?,
    }
    Ok(())
}

fn read_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text)
}

/// Runs the solver on a problem file, writing the trace if asked, and returns
/// the solution JSON.
pub fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let problem = read_problem(&args.file)?;
    let lattice = problem.lattice()?;
    let target = problem.target();
    let instance = if args.no_project {
        CvpInstance::new(lattice, target)?
    } else {
        CvpInstance::projected(lattice, &target)?
    };
    let options = SolveOptions::default();
    let solution = solve_cvp(&instance, &options)?;
    let agreement = if args.oracle {
        let x = brute_force_cvp(&instance, 1, &options.limits)?;
        Some(instance.objective(&x) == solution.distance_sq)
    } else {
        None
    };
    if let Some(path) = &args.trace {
        let entries: Vec<TraceEntry> = solution.trace.iter().map(TraceEntry::from).collect();
        std::fs::write(path, to_json(&entries))?;
    }
    Ok(SolutionFile::from_solution(&solution, agreement).to_json())
}

fn parse_weights(text: Option<&str>) -> Result<Option<Vec<Rational>>> {
    text.map(|t| t.split(',').map(|w| parse_rational(w.trim())).collect()).transpose()
}

fn parse_arcs(text: &str) -> Result<Vec<(usize, usize)>> {
    let parse_vertex = |s: &str| {
        s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex {s:?} in arc list")))
    };
    text.split(',')
        .filter(|a| !a.trim().is_empty())
        .map(|arc| {
            let (tail, head) = arc
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("arc {arc:?} is not of the form tail-head")))?;
            Ok((parse_vertex(tail)?, parse_vertex(head)?))
        })
        .collect()
}

pub fn cmd_construct(kind: &ConstructKind) -> Result<ProblemFile> {
    let (name, lattice) = match kind {
        ConstructKind::Graphic(g) => {
            let d = Digraph::new(g.vertices, parse_arcs(&g.arcs)?)?;
            ("graphic".to_string(), graphic_lattice(&d, parse_weights(g.weights.as_deref())?)?)
        }
        ConstructKind::Cographic(g) => {
            let d = Digraph::new(g.vertices, parse_arcs(&g.arcs)?)?;
            ("cographic".to_string(), cographic_lattice(&d, parse_weights(g.weights.as_deref())?)?)
        }
        ConstructKind::Vfk { gram } => {
            let text = std::fs::read_to_string(gram).map_err(|e| Error::Io(format!("{}: {e}", gram.display())))?;
            let q = ObtuseSuperbasisGram::new(GramFile::parse(&text)?)?;
            (format!("vfk-{}", q.size()), voronoi_first_kind(&q)?.0)
        }
        ConstructKind::Tensor { m, n, weights } => {
            (format!("a{m}-tensor-a{n}"), tensor_lattice(*m, *n, parse_weights(weights.as_deref())?)?)
        }
        ConstructKind::An { n, weights } => (format!("a{n}"), a_n_lattice(*n, parse_weights(weights.as_deref())?)?),
    };
    Ok(ProblemFile::from_lattice(name, &lattice))
}

#[derive(Serialize)]
struct VoronoiReport {
    m: usize,
    rank: usize,
    count: usize,
    relevant_vectors: Vec<IntVector>,
}

pub fn cmd_voronoi(path: &Path) -> Result<String> {
    let lattice = read_problem(path)?.lattice()?;
    let chains = enumerate_primitive_chains(&lattice, &OracleLimits::default())?;
    Ok(to_json(&VoronoiReport {
        m: lattice.dim(),
        rank: lattice.rank(),
        count: chains.len(),
        relevant_vectors: chains.iter().map(|c| c.coords().to_vec()).collect(),
    }))
}

#[derive(Serialize)]
struct CheckReport {
    m: usize,
    n: usize,
    rank: usize,
    tu_status: TuStatus,
    target_in_span: bool,
    projected_target: Vec<RationalText>,
}

pub fn cmd_check(path: &Path) -> Result<String> {
    let problem = read_problem(path)?;
    let lattice: ZonotopalLattice = problem.lattice()?;
    let target = problem.target();
    Ok(to_json(&CheckReport {
        m: lattice.dim(),
        n: lattice.matrix().row_count(),
        rank: lattice.rank(),
        tu_status: lattice.matrix().status(),
        target_in_span: lattice.in_span(&target),
        projected_target: lattice.project(&target)?.into_iter().map(RationalText).collect(),
    }))
}
