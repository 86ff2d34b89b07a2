//! The reconfigured lattice graph.
//!
//! Cells are numbered row-major from 0 at the top-left. A pseudo source is
//! attached to every top-row cell and a pseudo destination to every
//! bottom-row cell. Vertical neighbours are always connected; horizontal
//! neighbours only inside the middle rows, since a horizontal step along the
//! top or bottom row can only ever produce a redundant path.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest row or column count accepted by the path tools.
pub const MAX_SIDE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeDim {
    rows: usize,
    cols: usize,
}

impl LatticeDim {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDim { rows, cols });
        }
        Ok(LatticeDim { rows, cols })
    }

    /// Like [`LatticeDim::new`] but also enforces [`MAX_SIDE`].
    pub fn bounded(rows: usize, cols: usize) -> Result<Self> {
        if rows > MAX_SIDE || cols > MAX_SIDE {
            return Err(Error::SizeGuard(format!(
                "lattice {rows}x{cols} exceeds the {MAX_SIDE}x{MAX_SIDE} limit"
            )));
        }
        LatticeDim::new(rows, cols)
    }

    pub fn rows(self) -> usize {
        self.rows
    }

    pub fn cols(self) -> usize {
        self.cols
    }

    pub fn cells(self) -> usize {
        self.rows * self.cols
    }

    pub fn row(self, cell: usize) -> usize {
        cell / self.cols
    }

    pub fn col(self, cell: usize) -> usize {
        cell % self.cols
    }

    pub fn is_top(self, cell: usize) -> bool {
        cell < self.cols
    }

    pub fn is_bottom(self, cell: usize) -> bool {
        self.row(cell) == self.rows - 1
    }
}

impl std::fmt::Display for LatticeDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Source,
    Cell(usize),
    Dest,
}

#[derive(Clone, Debug)]
pub struct AdjacencyMap {
    dim: LatticeDim,
    source: Vec<usize>,
    children: Vec<Vec<Node>>,
}

impl AdjacencyMap {
    pub fn dim(&self) -> LatticeDim {
        self.dim
    }

    /// Cells attached to the source, left to right.
    pub fn source_children(&self) -> &[usize] {
        &self.source
    }

    pub fn children(&self, cell: usize) -> &[Node] {
        &self.children[cell]
    }

    /// Cell neighbours only, ascending.
    pub fn cell_children(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.children[cell].iter().filter_map(|n| match n {
            Node::Cell(c) => Some(*c),
            _ => None,
        })
    }

    pub fn edge_count(&self) -> usize {
        self.children
            .iter()
            .enumerate()
            .map(|(i, ch)| {
                ch.iter()
                    .filter(|n| matches!(n, Node::Cell(j) if *j > i))
                    .count()
            })
            .sum()
    }
}

pub fn build_children(dim: LatticeDim) -> AdjacencyMap {
    let (r, c) = (dim.rows(), dim.cols());
    let mut children = vec![Vec::new(); dim.cells()];
    for (cell, ch) in children.iter_mut().enumerate() {
        let (row, col) = (dim.row(cell), dim.col(cell));
        let middle = row > 0 && row + 1 < r;
        if row == 0 {
            ch.push(Node::Source);
        }
        if row > 0 {
            ch.push(Node::Cell(cell - c));
        }
        if middle && col > 0 {
            ch.push(Node::Cell(cell - 1));
        }
        if middle && col + 1 < c {
            ch.push(Node::Cell(cell + 1));
        }
        if row + 1 < r {
            ch.push(Node::Cell(cell + c));
        }
        if row + 1 == r {
            ch.push(Node::Dest);
        }
    }
    AdjacencyMap {
        dim,
        source: (0..c).collect(),
        children,
    }
}

/// Histogram of cell child-list lengths, counting source and destination
/// entries.
pub fn degree_histogram(dim: LatticeDim) -> BTreeMap<usize, usize> {
    let adj = build_children(dim);
    let mut hist = BTreeMap::new();
    for cell in 0..dim.cells() {
        *hist.entry(adj.children(cell).len()).or_insert(0) += 1;
    }
    hist
}
