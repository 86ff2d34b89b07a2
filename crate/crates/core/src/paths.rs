//! Irredundant source-to-destination paths.
//!
//! A path is extended depth first. A new cell is rejected when it touches
//! any cell already on the path other than the one that brought it in (or
//! the source, for a second top-row cell). Such a path would contain a
//! shorter one as a subset, so it is never generated. The result is exactly
//! the family of minimal connecting cell sets.

use rayon::prelude::*;

use crate::error::{parse_err, Error, Result};
use crate::graph::{build_children, AdjacencyMap, LatticeDim};
use crate::model::content_lines;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicPath {
    cells: Vec<usize>,
}

impl BasicPath {
    pub fn new(cells: Vec<usize>) -> Self {
        BasicPath { cells }
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell set as a bitmask (dimensions up to 8x8).
    pub fn mask(&self) -> u64 {
        self.cells.iter().fold(0u64, |m, &c| m | 1 << c)
    }
}

fn canonical_cmp(a: &BasicPath, b: &BasicPath) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cells.cmp(&b.cells))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSet {
    dim: LatticeDim,
    paths: Vec<BasicPath>,
}

impl PathSet {
    /// Sorts `paths` canonically: by length, then lexicographically.
    pub fn new(dim: LatticeDim, mut paths: Vec<BasicPath>) -> Self {
        paths.sort_by(canonical_cmp);
        PathSet { dim, paths }
    }

    pub fn dim(&self) -> LatticeDim {
        self.dim
    }

    pub fn paths(&self) -> &[BasicPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Cell sets of all paths, sorted.
    pub fn cell_sets(&self) -> Vec<u64> {
        let mut sets: Vec<u64> = self.paths.iter().map(BasicPath::mask).collect();
        sets.sort_unstable();
        sets
    }
}

struct Walker<'a> {
    adj: &'a AdjacencyMap,
    on_path: Vec<bool>,
    stack: Vec<usize>,
    out: Vec<BasicPath>,
}

impl Walker<'_> {
    fn extend(&mut self, cell: usize) {
        let dim = self.adj.dim();
        if dim.is_bottom(cell) {
            self.out.push(BasicPath::new(self.stack.clone()));
            return;
        }
        for next in self.adj.cell_children(cell) {
            if self.on_path[next] || self.touches_earlier(next, cell) {
                continue;
            }
            self.on_path[next] = true;
            self.stack.push(next);
            self.extend(next);
            self.stack.pop();
            self.on_path[next] = false;
        }
    }

    /// Whether `next` is adjacent to a path node other than `via`.
    fn touches_earlier(&self, next: usize, via: usize) -> bool {
        // a second top-row cell is a child of the source
        if self.adj.dim().is_top(next) {
            return true;
        }
        self.adj
            .cell_children(next)
            .any(|n| n != via && self.on_path[n])
    }
}

fn paths_from(adj: &AdjacencyMap, start: usize) -> Vec<BasicPath> {
    let mut w = Walker {
        adj,
        on_path: vec![false; adj.dim().cells()],
        stack: vec![start],
        out: Vec::new(),
    };
    w.on_path[start] = true;
    w.extend(start);
    w.out
}

/// All irredundant paths of the lattice, canonically ordered.
pub fn enumerate_paths(dim: LatticeDim) -> PathSet {
    let adj = build_children(dim);
    let paths = adj
        .source_children()
        .iter()
        .flat_map(|&s| paths_from(&adj, s))
        .collect();
    PathSet::new(dim, paths)
}

/// Same result as [`enumerate_paths`], with the source's subtrees explored
/// on the rayon pool.
pub fn enumerate_paths_parallel(dim: LatticeDim) -> PathSet {
    let adj = build_children(dim);
    let paths = adj
        .source_children()
        .par_iter()
        .flat_map_iter(|&s| paths_from(&adj, s))
        .collect();
    PathSet::new(dim, paths)
}

/// Largest side accepted by [`brute_force_paths`].
pub const BRUTE_FORCE_MAX_SIDE: usize = 4;

/// Reference enumeration: every simple top-to-bottom walk on the full
/// four-neighbour grid, followed by removal of cell-set supersets.
pub fn brute_force_paths(dim: LatticeDim) -> Result<PathSet> {
    if dim.rows() > BRUTE_FORCE_MAX_SIDE || dim.cols() > BRUTE_FORCE_MAX_SIDE {
        return Err(Error::SizeGuard(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_SIDE}x{BRUTE_FORCE_MAX_SIDE}, got {dim}"
        )));
    }
    let (r, c) = (dim.rows(), dim.cols());
    let neighbours = |cell: usize| {
        let (row, col) = (cell / c, cell % c);
        let mut v = Vec::with_capacity(4);
        if row > 0 {
            v.push(cell - c);
        }
        if col > 0 {
            v.push(cell - 1);
        }
        if col + 1 < c {
            v.push(cell + 1);
        }
        if row + 1 < r {
            v.push(cell + c);
        }
        v
    };

    fn walk(
        cell: usize,
        dim: LatticeDim,
        neighbours: &dyn Fn(usize) -> Vec<usize>,
        seen: &mut u64,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if dim.is_bottom(cell) {
            out.push(stack.clone());
        }
        for n in neighbours(cell) {
            if *seen >> n & 1 == 1 {
                continue;
            }
            *seen |= 1 << n;
            stack.push(n);
            walk(n, dim, neighbours, seen, stack, out);
            stack.pop();
            *seen &= !(1 << n);
        }
    }

    let mut all = Vec::new();
    for start in 0..c {
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        walk(start, dim, &neighbours, &mut seen, &mut stack, &mut all);
    }

    // one representative (the smallest sequence) per distinct cell set
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut reps: Vec<(u64, Vec<usize>)> = Vec::new();
    let mut seen_sets = std::collections::HashSet::new();
    for p in all {
        let mask = p.iter().fold(0u64, |m, &x| m | 1 << x);
        if seen_sets.insert(mask) {
            reps.push((mask, p));
        }
    }
    let masks: Vec<u64> = reps.iter().map(|(m, _)| *m).collect();
    let minimal = reps
        .into_iter()
        .filter(|(m, _)| !masks.iter().any(|&o| o != *m && o & *m == o))
        .map(|(_, p)| BasicPath::new(p))
        .collect();
    Ok(PathSet::new(dim, minimal))
}

pub fn longest_path_len(paths: &PathSet) -> usize {
    paths.paths().iter().map(BasicPath::len).max().unwrap_or(0)
}

/// `"<paths> <cells>"` header, then `"<len> <cell>..."` per path.
pub fn serialize_paths(paths: &PathSet) -> String {
    let mut out = format!("{} {}\n", paths.len(), paths.dim().cells());
    for p in paths.paths() {
        out.push_str(&p.len().to_string());
        for c in p.cells() {
            out.push(' ');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

/// Reads a path file. The lattice width is the number of distinct starting
/// cells (every top cell starts its own column path).
pub fn parse_paths(text: &str) -> Result<PathSet> {
    let mut lines = content_lines(text);
    let (hno, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty path file"))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(hno, format!("bad integer `{t}`")))
        })
        .collect::<Result<_>>()?;
    let [count, cells] = head[..] else {
        return Err(parse_err(hno, "header must be `<paths> <cells>`"));
    };
    let mut paths = Vec::with_capacity(count);
    for _ in 0..count {
        let (no, line) = lines.next().ok_or_else(|| {
            parse_err(
                hno,
                format!("expected {count} paths, found {}", paths.len()),
            )
        })?;
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(no, format!("bad integer `{t}`")))
            })
            .collect::<Result<_>>()?;
        let (len, rest) = nums.split_first().expect("non-blank line");
        if *len != rest.len() || rest.is_empty() {
            return Err(parse_err(
                no,
                format!("path length {len} does not match {} cells", rest.len()),
            ));
        }
        if let Some(bad) = rest.iter().find(|&&x| x >= cells) {
            return Err(parse_err(
                no,
                format!("cell {bad} out of range for {cells} cells"),
            ));
        }
        paths.push(BasicPath::new(rest.to_vec()));
    }
    if let Some((no, _)) = lines.next() {
        return Err(parse_err(
            no,
            format!("content after the declared {count} paths"),
        ));
    }
    let mut starts: Vec<usize> = paths.iter().map(|p| p.cells()[0]).collect();
    starts.sort_unstable();
    starts.dedup();
    let cols = starts.len();
    if cols == 0 || cells % cols != 0 {
        return Err(parse_err(
            hno,
            "cannot infer lattice width from the path starts",
        ));
    }
    let dim = LatticeDim::new(cells / cols, cols)?;
    Ok(PathSet::new(dim, paths))
}
