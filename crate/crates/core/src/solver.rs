//! Evaluating literal-assigned lattices and building random function
//! libraries from them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{parse_err, Error, Result};
use crate::graph::LatticeDim;
use crate::model::{
    content_lines, equivalent, normalize_term, parse_function, serialize_function, Literal,
    Normalized, SopFunction,
};
use crate::paths::{enumerate_paths, PathSet};

/// One literal code per switch, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeAssignment {
    dim: LatticeDim,
    codes: Vec<Literal>,
}

impl LatticeAssignment {
    pub fn new(dim: LatticeDim, codes: Vec<Literal>) -> Result<Self> {
        if codes.len() != dim.cells() {
            return Err(Error::SizeGuard(format!(
                "{} codes given for a {dim} lattice",
                codes.len()
            )));
        }
        Ok(LatticeAssignment { dim, codes })
    }

    /// Builds an assignment from raw codes, validating each one.
    pub fn from_codes(dim: LatticeDim, codes: &[u32]) -> Result<Self> {
        let codes = codes
            .iter()
            .map(|&c| Literal::new(c))
            .collect::<Result<_>>()?;
        LatticeAssignment::new(dim, codes)
    }

    pub fn dim(&self) -> LatticeDim {
        self.dim
    }

    pub fn codes(&self) -> &[Literal] {
        &self.codes
    }

    pub fn get(&self, cell: usize) -> Literal {
        self.codes[cell]
    }

    /// Grid rendered with letter names, one row per line.
    pub fn pretty(&self) -> String {
        self.codes
            .chunks(self.dim.cols())
            .map(|row| {
                row.iter()
                    .map(|l| l.pretty())
                    .collect::<Vec<_>>()
                    .join("\t")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Exact, unminimized function realized by the lattice.
pub fn solve_lattice(lat: &LatticeAssignment) -> SopFunction {
    solve_with_paths(lat, &enumerate_paths(lat.dim()))
}

/// [`solve_lattice`] with a precomputed path set for the same dimension.
pub fn solve_with_paths(lat: &LatticeAssignment, paths: &PathSet) -> SopFunction {
    debug_assert_eq!(lat.dim(), paths.dim());
    let mut terms = Vec::new();
    for p in paths.paths() {
        if let Normalized::Product(t) = normalize_term(p.cells().iter().map(|&c| lat.get(c))) {
            if t.is_empty() {
                return SopFunction::one();
            }
            terms.push(t);
        }
    }
    SopFunction::new(terms).canonical()
}

pub fn verify_witness(lat: &LatticeAssignment, f: &SopFunction) -> Result<bool> {
    equivalent(&solve_lattice(lat), f)
}

/// `"r c"` followed by `r` lines of `c` codes.
pub fn serialize_lattice(lat: &LatticeAssignment) -> String {
    let mut out = format!("{} {}\n", lat.dim().rows(), lat.dim().cols());
    for row in lat.codes().chunks(lat.dim().cols()) {
        let line: Vec<String> = row.iter().map(|l| l.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_lattice(text: &str) -> Result<LatticeAssignment> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    parse_lattice_lines(&lines)
}

fn parse_lattice_lines(lines: &[(usize, &str)]) -> Result<LatticeAssignment> {
    let (hno, header) = *lines
        .first()
        .ok_or_else(|| parse_err(1, "empty lattice file"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [r, c] = head[..] else {
        return Err(parse_err(hno, "header must be `<rows> <cols>`"));
    };
    let num = |t: &str, no: usize| {
        t.parse::<u32>()
            .map_err(|_| parse_err(no, format!("bad integer `{t}`")))
    };
    let dim = LatticeDim::new(num(r, hno)? as usize, num(c, hno)? as usize)?;
    if lines.len() != dim.rows() + 1 {
        return Err(parse_err(
            hno,
            format!(
                "expected {} grid rows, found {}",
                dim.rows(),
                lines.len() - 1
            ),
        ));
    }
    let mut codes = Vec::with_capacity(dim.cells());
    for &(no, line) in &lines[1..] {
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != dim.cols() {
            return Err(parse_err(
                no,
                format!("expected {} codes, found {}", dim.cols(), row.len()),
            ));
        }
        for t in row {
            codes.push(Literal::new(num(t, no)?).map_err(|e| parse_err(no, e.to_string()))?);
        }
    }
    LatticeAssignment::new(dim, codes)
}

/// Where a library entry came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedInfo {
    pub trial: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LibraryEntry {
    pub lattice: LatticeAssignment,
    pub function: SopFunction,
    pub seed_info: SeedInfo,
}

/// Codes a random lattice over `num_vars` letters may draw from: the
/// variables, their complements, then constant 1 and constant 0.
pub fn literal_range(num_vars: usize) -> Result<Vec<Literal>> {
    if !(1..=25).contains(&num_vars) {
        return Err(Error::InvalidVarCount(num_vars));
    }
    let n = num_vars as u16;
    let mut range: Vec<Literal> = (0..n).map(Literal::var).collect();
    range.extend((0..n).map(Literal::not));
    range.push(Literal::ONE);
    range.push(Literal::ZERO);
    Ok(range)
}

/// Random lattices and their solved functions. Trial `i` draws its codes
/// from a ChaCha8 generator seeded with `seed + i`, so the output depends
/// only on the arguments.
pub fn generate_library(
    dim: LatticeDim,
    num_vars: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<LibraryEntry>> {
    let range = literal_range(num_vars)?;
    if trials == 0 {
        return Err(Error::SizeGuard("at least one trial is required".into()));
    }
    let paths = enumerate_paths(dim);
    let entries = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = seed.wrapping_add(trial as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let codes = (0..dim.cells())
                .map(|_| *range.choose(&mut rng).expect("non-empty range"))
                .collect();
            let lattice = LatticeAssignment::new(dim, codes).expect("sized to dim");
            let function = solve_with_paths(&lattice, &paths);
            LibraryEntry {
                lattice,
                function,
                seed_info: SeedInfo {
                    trial,
                    seed: trial_seed,
                },
            }
        })
        .collect();
    Ok(entries)
}

/// Canonical library text: a `"<entries> <seed>"` header, then per entry
/// the lattice block, a blank line, the function block and a blank line.
pub fn serialize_library(entries: &[LibraryEntry], seed: u64) -> String {
    let mut out = format!("{} {}\n\n", entries.len(), seed);
    for e in entries {
        out.push_str(&serialize_lattice(&e.lattice));
        out.push('\n');
        out.push_str(&serialize_function(&e.function));
        out.push('\n');
    }
    out
}

/// Decorated layout with separators and comments, for reading by eye.
pub fn serialize_library_decorated(entries: &[LibraryEntry], seed: u64) -> String {
    let mut out = format!("// {} entries, seed {}\n\n", entries.len(), seed);
    for e in entries {
        let dim = e.lattice.dim();
        out.push_str(&format!(
            "{} {}    // rows cols\n-----\n",
            dim.rows(),
            dim.cols()
        ));
        for row in e.lattice.codes().chunks(dim.cols()) {
            let line: Vec<String> = row.iter().map(|l| l.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.push_str("-----\n\n");
        out.push_str(&format!(
            "{}    // product terms\n-----\n",
            e.function.len()
        ));
        for line in serialize_function(&e.function).lines().skip(1) {
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("-----\n\n");
    }
    out
}

/// Reads the canonical library text back. Seeds are reconstructed from the
/// header as `seed + trial`.
pub fn parse_library(text: &str) -> Result<Vec<LibraryEntry>> {
    let lines: Vec<(usize, &str)> = content_lines(text).collect();
    let (hno, header) = *lines.first().ok_or_else(|| parse_err(1, "empty library"))?;
    let head: Vec<u64> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(hno, format!("bad integer `{t}`")))
        })
        .collect::<Result<_>>()?;
    let [count, seed] = head[..] else {
        return Err(parse_err(hno, "header must be `<entries> <seed>`"));
    };
    let mut at = 1;
    let mut entries = Vec::new();
    for trial in 0..count as usize {
        let (no, dims) = *lines
            .get(at)
            .ok_or_else(|| parse_err(hno, format!("expected {count} entries, found {trial}")))?;
        let rows: usize = dims
            .split_whitespace()
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(no, "bad lattice header"))?;
        let end = at + rows + 1;
        if end > lines.len() {
            return Err(parse_err(no, "truncated lattice block"));
        }
        let lattice = parse_lattice_lines(&lines[at..end])?;
        let (fno, nline) = *lines
            .get(end)
            .ok_or_else(|| parse_err(no, "missing function block"))?;
        let n: usize = nline
            .parse()
            .map_err(|_| parse_err(fno, "bad term count"))?;
        let fend = end + n + 1;
        if fend > lines.len() {
            return Err(parse_err(fno, "truncated function block"));
        }
        let block: Vec<&str> = lines[end..fend].iter().map(|(_, l)| *l).collect();
        let function = parse_function(&block.join("\n"))?;
        entries.push(LibraryEntry {
            lattice,
            function,
            seed_info: SeedInfo {
                trial,
                seed: seed.wrapping_add(trial as u64),
            },
        });
        at = fend;
    }
    if let Some((no, _)) = lines.get(at) {
        return Err(parse_err(*no, "content after the declared entries"));
    }
    Ok(entries)
}
