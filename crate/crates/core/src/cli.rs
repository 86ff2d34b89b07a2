//! Command-line front end.
//!
//! Exit codes: 0 success, 1 no solution or not equivalent, 2 inconclusive,
//! 64 usage error, 65 bad input data, 74 I/O error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::decompose::{decompose_with, DecomposeOptions, DecomposeOutcome, SubFunction};
use crate::error::Error;
use crate::graph::LatticeDim;
use crate::mapper::{map_function, MapOutcome, MappingProblem, MappingSolution, SearchBudget};
use crate::model::{equivalent, parse_function_with_warnings, serialize_function, SopFunction};
use crate::paths::{enumerate_paths, enumerate_paths_parallel, parse_paths, serialize_paths};
use crate::solver::{
    generate_library, parse_lattice, serialize_lattice, serialize_library,
    serialize_library_decorated, solve_lattice, LatticeAssignment,
};
use crate::synth::{expand_plan, synthesize, LatticeRole, SynthOutcome, SynthesisPlan};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_IO: i32 = 74;

#[derive(Parser, Debug)]
#[command(
    name = "lattice-synth",
    version,
    about = "Switching lattice synthesis tools"
)]
pub struct Cli {
    /// Worker threads for the parallel parts.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate the irredundant paths of a lattice.
    Paths {
        #[command(flatten)]
        dim: DimArg,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Compute the function realized by a lattice file.
    Solve {
        lattice: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Generate random lattices together with their functions.
    Genlib {
        #[command(flatten)]
        dim: DimArg,
        #[arg(long = "vars")]
        num_vars: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Separator-and-comment layout meant for reading.
        #[arg(long)]
        decorated: bool,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Place a function on one lattice.
    Map {
        function: PathBuf,
        #[command(flatten)]
        target: TargetArg,
        /// Also write the lattice to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Split a function over two lattices.
    Decompose {
        function: PathBuf,
        #[command(flatten)]
        dim: DimArg,
        #[arg(long)]
        out_dir: PathBuf,
        /// Stop after the pair whose larger part has this many terms.
        #[arg(long)]
        stop_at: Option<usize>,
        /// Only try this pair of part sizes.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        pair: Option<Vec<usize>>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Cover a function with as few lattices as the procedure finds.
    Synth {
        function: PathBuf,
        #[command(flatten)]
        dim: DimArg,
        #[arg(long)]
        out_dir: PathBuf,
        /// Expand the plan and check it against the input.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Check that a lattice realizes a function.
    Verify { lattice: PathBuf, function: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct DimArg {
    #[arg(long, num_args = 2, value_names = ["ROWS", "COLS"], required = true)]
    dim: Vec<usize>,
}

impl DimArg {
    fn get(&self) -> Result<LatticeDim, Failure> {
        LatticeDim::bounded(self.dim[0], self.dim[1]).map_err(Failure::Data)
    }
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct TargetArg {
    #[arg(long, num_args = 2, value_names = ["ROWS", "COLS"])]
    dim: Option<Vec<usize>>,
    /// Path file to use instead of a dimension.
    #[arg(long)]
    paths: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BudgetArgs {
    #[arg(long, env = "LATTICE_SYNTH_MAX_ORDERS")]
    max_orders: Option<usize>,
    #[arg(long, env = "LATTICE_SYNTH_MAX_PLACEMENTS")]
    max_placements: Option<usize>,
    /// Seconds.
    #[arg(long, env = "LATTICE_SYNTH_TIME_LIMIT")]
    time_limit: Option<f64>,
}

impl BudgetArgs {
    fn get(&self) -> Result<SearchBudget, Failure> {
        let positive = |v: Option<usize>, name: &str| match v {
            Some(0) => Err(Failure::Usage(format!("--{name} must be positive"))),
            v => Ok(v),
        };
        let time_limit = match self.time_limit {
            Some(s) if !(s > 0.0 && s.is_finite()) => {
                return Err(Failure::Usage("--time-limit must be positive".into()))
            }
            s => s.map(Duration::from_secs_f64),
        };
        Ok(SearchBudget {
            max_orders: positive(self.max_orders, "max-orders")?,
            max_placements_per_term_path: positive(self.max_placements, "max-placements")?,
            time_limit,
        })
    }
}

enum Failure {
    Usage(String),
    Data(Error),
    Io(PathBuf, std::io::Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Io(..) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Data(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if cli.jobs == 0 {
        let _ = writeln!(err, "error: --jobs must be positive");
        return EXIT_USAGE;
    }
    // a pool can only be installed once per process; later calls reuse it
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build();
    let result = match pool {
        Ok(pool) => pool.install(|| dispatch(&cli.command, out, err)),
        Err(e) => Err(Failure::Usage(e.to_string())),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code()
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Paths { dim, output } => {
            let paths = enumerate_paths_parallel(dim.get()?);
            emit(output, &serialize_paths(&paths), out)?;
            note(err, &format!("paths: {}", paths.len()));
            Ok(EXIT_OK)
        }
        Command::Solve {
            lattice,
            output,
            pretty,
        } => {
            let lat = read_lattice(lattice)?;
            let f = solve_lattice(&lat);
            emit(output, &serialize_function(&f), out)?;
            if *pretty {
                note(err, &f.pretty());
            }
            note(err, &format!("product terms: {}", f.len()));
            Ok(EXIT_OK)
        }
        Command::Genlib {
            dim,
            num_vars,
            trials,
            seed,
            decorated,
            output,
        } => {
            let lib = generate_library(dim.get()?, *num_vars, *trials, *seed)?;
            let text = if *decorated {
                serialize_library_decorated(&lib, *seed)
            } else {
                serialize_library(&lib, *seed)
            };
            emit(output, &text, out)?;
            note(err, &format!("entries: {}", lib.len()));
            Ok(EXIT_OK)
        }
        Command::Map {
            function,
            target,
            output,
            pretty,
            budget,
        } => {
            let f = read_function(function, err)?;
            let paths = match (&target.dim, &target.paths) {
                (Some(d), _) => enumerate_paths(LatticeDim::bounded(d[0], d[1])?),
                (None, Some(p)) => parse_paths(&read(p)?)?,
                (None, None) => unreachable!("clap enforces one target"),
            };
            let problem = MappingProblem::with_paths(f, paths, budget.get()?);
            match map_function(&problem)? {
                MapOutcome::Solution(s) => {
                    write_out(out, &solution_text(&s, *pretty))?;
                    if let Some(path) = output {
                        write_file(path, &serialize_lattice(&s.assignment))?;
                    }
                    Ok(EXIT_OK)
                }
                MapOutcome::NoSolution => {
                    write_out(out, "NO SOLUTION\n")?;
                    Ok(EXIT_NEGATIVE)
                }
                MapOutcome::Inconclusive => {
                    write_out(out, "INCONCLUSIVE (budget)\n")?;
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Decompose {
            function,
            dim,
            out_dir,
            stop_at,
            pair,
            budget,
        } => {
            let f = read_function(function, err)?;
            if f.len() < 2 {
                return Err(Failure::Data(Error::TooFewTerms(f.len())));
            }
            let options = DecomposeOptions {
                stop_at: *stop_at,
                only_pairs: pair.as_ref().map(|p| vec![(p[0], p[1])]),
            };
            let paths = enumerate_paths(dim.get()?);
            match decompose_with(&f, &paths, budget.get()?, &options)? {
                DecomposeOutcome::Found(r) => {
                    make_dir(out_dir)?;
                    let mut manifest = format!("pair {} {}\n", r.pair.0, r.pair.1);
                    for (name, part) in [("part_a.lat", &r.sub_a), ("part_b.lat", &r.sub_b)] {
                        write_file(
                            &out_dir.join(name),
                            &serialize_lattice(&part.solution.assignment),
                        )?;
                        manifest.push_str(&part_manifest(name, part));
                    }
                    write_file(&out_dir.join("manifest.txt"), &manifest)?;
                    write_out(out, &manifest)?;
                    Ok(EXIT_OK)
                }
                DecomposeOutcome::NoSolution => {
                    write_out(out, "NO SOLUTION\n")?;
                    Ok(EXIT_NEGATIVE)
                }
                DecomposeOutcome::Inconclusive => {
                    write_out(out, "INCONCLUSIVE (budget)\n")?;
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Synth {
            function,
            dim,
            out_dir,
            verify,
            budget,
        } => {
            let f = read_function(function, err)?;
            match synthesize(&f, dim.get()?, budget.get()?)? {
                SynthOutcome::Plan(plan) => {
                    let manifest = write_plan(&plan, out_dir)?;
                    write_out(out, &manifest)?;
                    if *verify {
                        let ok = equivalent(&expand_plan(&plan)?, &f)?;
                        write_out(
                            out,
                            if ok {
                                "EQUIVALENT\n"
                            } else {
                                "NOT EQUIVALENT\n"
                            },
                        )?;
                        if !ok {
                            return Ok(EXIT_NEGATIVE);
                        }
                    }
                    Ok(EXIT_OK)
                }
                SynthOutcome::Inconclusive => {
                    write_out(out, "INCONCLUSIVE (budget)\n")?;
                    Ok(EXIT_INCONCLUSIVE)
                }
            }
        }
        Command::Verify { lattice, function } => {
            let lat = read_lattice(lattice)?;
            let f = read_function(function, err)?;
            if equivalent(&solve_lattice(&lat), &f)? {
                write_out(out, "EQUIVALENT\n")?;
                Ok(EXIT_OK)
            } else {
                write_out(out, "NOT EQUIVALENT\n")?;
                Ok(EXIT_NEGATIVE)
            }
        }
    }
}

/// The `map` report: assignment, one line per event, then the order.
pub fn solution_text(s: &MappingSolution, pretty: bool) -> String {
    let cells: Vec<String> = s
        .assignment
        .codes()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if pretty {
                format!("v{i}={}", l.pretty())
            } else {
                format!("v{i}={l}")
            }
        })
        .collect();
    let mut text = format!("SOLUTION FOUND:\nASSG {}\n", cells.join(" "));
    if pretty {
        text.push_str(&s.assignment.pretty());
        text.push('\n');
    }
    for event in &s.poi {
        text.push_str(&format!("POI: {event}\n"));
    }
    let order: Vec<String> = s.order.iter().map(|i| (i + 1).to_string()).collect();
    text.push_str(&format!("ORDER: {}\n", order.join(" ")));
    text
}

fn part_manifest(name: &str, part: &SubFunction) -> String {
    let idx: Vec<String> = part.indices.iter().map(|i| (i + 1).to_string()).collect();
    let mut text = format!("{name} terms {}\n", idx.join(" "));
    for event in &part.solution.poi {
        text.push_str(&format!("POI: {event}\n"));
    }
    text
}

fn write_plan(plan: &SynthesisPlan, dir: &Path) -> Result<String, Failure> {
    make_dir(dir)?;
    let mut manifest = format!("lattices {}\n", plan.lattices.len());
    for (k, l) in plan.lattices.iter().enumerate() {
        let name = format!("lattice_{}.lat", k + 1);
        write_file(&dir.join(&name), &serialize_lattice(&l.assignment))?;
        match l.role {
            LatticeRole::Aux(code) => manifest.push_str(&format!("{name} aux {code}\n")),
            LatticeRole::Cover => {
                let idx: Vec<String> = l.terms.iter().map(|i| (i + 1).to_string()).collect();
                manifest.push_str(&format!("{name} terms {}\n", idx.join(" ")));
            }
        }
    }
    let mut aux = String::new();
    for def in &plan.aux_defs {
        let codes: Vec<String> = def
            .product
            .literals()
            .iter()
            .map(|l| l.to_string())
            .collect();
        aux.push_str(&format!(
            "{} {} {}\n",
            def.code,
            codes.len(),
            codes.join(" ")
        ));
    }
    write_file(&dir.join("aux.txt"), &aux)?;
    write_file(&dir.join("manifest.txt"), &manifest)?;
    Ok(manifest)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_lattice(path: &Path) -> Result<LatticeAssignment, Failure> {
    Ok(parse_lattice(&read(path)?)?)
}

fn read_function(path: &Path, err: &mut dyn Write) -> Result<SopFunction, Failure> {
    let parsed = parse_function_with_warnings(&read(path)?)?;
    for w in &parsed.warnings {
        note(err, &format!("warning: {w}"));
    }
    Ok(parsed.function)
}

fn make_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(PathBuf::from("-"), e))
}

/// Writes to `path`, or to `out` when the path is "-".
fn emit(path: &Path, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    if path.as_os_str() == "-" {
        write_out(out, text)
    } else {
        write_file(path, text)
    }
}

fn note(err: &mut dyn Write, line: &str) {
    let _ = writeln!(err, "{line}");
}
