//! Lattice geometry: dimensions, boundary handling and neighbor enumeration.
//!
//! Two lattice kinds share one rectangular storage layout (row-major,
//! `index = row * width + col`):
//!
//! - **Hexagonal**: pointy-top hexagons in odd-r offset layout. Odd rows are
//!   shifted half a cell to the right, so the neighbor offsets depend on the
//!   parity of the row. Every cell has six nearest neighbors.
//! - **Quadratic**: square cells with either the 4-cell von Neumann or the
//!   8-cell Moore neighborhood.
//!
//! ```text
//!  even row r:   (-1,-1) (0,-1)          odd row r:    (0,-1) (+1,-1)
//!              (-1,0)  *  (+1,0)                     (-1,0)  *  (+1,0)
//!                (-1,+1) (0,+1)                        (0,+1) (+1,+1)
//! ```
//!
//! Under [`Boundary::Periodic`] coordinates wrap around (torus); under
//! [`Boundary::Clamped`] neighbors falling outside the rectangle are dropped.
//! A periodic hexagonal lattice needs an even number of rows, otherwise the
//! row-parity stagger does not close up across the seam.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice dimensions {width}x{height} are too small (minimum 2x2)")]
    DimensionTooSmall { width: usize, height: usize },
    #[error("periodic hexagonal lattice needs an even row count, got {height}")]
    HexPeriodicOddHeight { height: usize },
    #[error("cell ({col}, {row}) is outside the {width}x{height} lattice")]
    CellOutOfBounds {
        col: usize,
        row: usize,
        width: usize,
        height: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    Hexagonal,
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Clamped,
}

/// Neighborhood used on the quadratic lattice. Ignored for hexagonal lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QuadNeighborhood {
    #[default]
    VonNeumann4,
    Moore8,
}

const HEX_EVEN_ROW: [(isize, isize); 6] = [(-1, 0), (1, 0), (-1, -1), (0, -1), (-1, 1), (0, 1)];
const HEX_ODD_ROW: [(isize, isize); 6] = [(-1, 0), (1, 0), (0, -1), (1, -1), (0, 1), (1, 1)];
const VON_NEUMANN: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
const MOORE: [(isize, isize); 8] = [
    (-1, 0),
    (1, 0),
    (0, -1),
    (0, 1),
    (-1, -1),
    (1, -1),
    (-1, 1),
    (1, 1),
];

/// Position of a cell on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub col: usize,
    pub row: usize,
}

impl CellIndex {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

impl From<(usize, usize)> for CellIndex {
    fn from((col, row): (usize, usize)) -> Self {
        Self { col, row }
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

/// Validated lattice description. Cheap to copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    kind: LatticeKind,
    width: usize,
    height: usize,
    boundary: Boundary,
    quad_neighborhood: QuadNeighborhood,
}

impl LatticeSpec {
    pub fn new(
        kind: LatticeKind,
        width: usize,
        height: usize,
        boundary: Boundary,
        quad_neighborhood: QuadNeighborhood,
    ) -> Result<Self, LatticeError> {
        if width < 2 || height < 2 {
            return Err(LatticeError::DimensionTooSmall { width, height });
        }
        if kind == LatticeKind::Hexagonal
            && boundary == Boundary::Periodic
            && !height.is_multiple_of(2)
        {
            return Err(LatticeError::HexPeriodicOddHeight { height });
        }
        // The hexagonal neighborhood is fixed, so normalize the unused field
        // to keep equality and hashing meaningful.
        let quad_neighborhood = match kind {
            LatticeKind::Hexagonal => QuadNeighborhood::default(),
            LatticeKind::Quadratic => quad_neighborhood,
        };
        Ok(Self {
            kind,
            width,
            height,
            boundary,
            quad_neighborhood,
        })
    }

    pub fn hexagonal(
        width: usize,
        height: usize,
        boundary: Boundary,
    ) -> Result<Self, LatticeError> {
        Self::new(
            LatticeKind::Hexagonal,
            width,
            height,
            boundary,
            QuadNeighborhood::default(),
        )
    }

    pub fn quadratic(
        width: usize,
        height: usize,
        boundary: Boundary,
        neighborhood: QuadNeighborhood,
    ) -> Result<Self, LatticeError> {
        Self::new(
            LatticeKind::Quadratic,
            width,
            height,
            boundary,
            neighborhood,
        )
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn quad_neighborhood(&self) -> QuadNeighborhood {
        self.quad_neighborhood
    }

    pub fn cell_count(&self) -> usize {
        self.width * self.height
    }

    /// Size of a full (unclamped) neighborhood.
    pub fn full_degree(&self) -> usize {
        match (self.kind, self.quad_neighborhood) {
            (LatticeKind::Hexagonal, _) => 6,
            (LatticeKind::Quadratic, QuadNeighborhood::VonNeumann4) => 4,
            (LatticeKind::Quadratic, QuadNeighborhood::Moore8) => 8,
        }
    }

    pub fn contains(&self, cell: CellIndex) -> bool {
        cell.col < self.width && cell.row < self.height
    }

    /// Row-major flat index of `cell`.
    pub fn index_of(&self, cell: CellIndex) -> Result<usize, LatticeError> {
        self.check(cell)?;
        Ok(cell.row * self.width + cell.col)
    }

    /// Inverse of [`index_of`](Self::index_of). Panics if `index` is out of range.
    pub fn cell_at(&self, index: usize) -> CellIndex {
        assert!(index < self.cell_count(), "flat index {index} out of range");
        CellIndex::new(index % self.width, index / self.width)
    }

    /// `(dcol, drow)` offsets of the neighborhood of a cell in `row`, in
    /// enumeration order.
    pub fn offsets(&self, row: usize) -> &'static [(isize, isize)] {
        match (self.kind, self.quad_neighborhood) {
            (LatticeKind::Hexagonal, _) if row.is_multiple_of(2) => &HEX_EVEN_ROW,
            (LatticeKind::Hexagonal, _) => &HEX_ODD_ROW,
            (LatticeKind::Quadratic, QuadNeighborhood::VonNeumann4) => &VON_NEUMANN,
            (LatticeKind::Quadratic, QuadNeighborhood::Moore8) => &MOORE,
        }
    }

    /// Neighborhood of `cell`, center excluded, in offset order.
    ///
    /// Periodic lattices wrap; clamped lattices omit out-of-bounds neighbors.
    pub fn neighbors(&self, cell: CellIndex) -> Result<Vec<CellIndex>, LatticeError> {
        self.check(cell)?;
        Ok(self
            .offsets(cell.row)
            .iter()
            .filter_map(|&(dc, dr)| self.displace(cell, dc, dr))
            .collect())
    }

    /// Moves `cell` by `(dcol, drow)` according to the boundary policy.
    /// Returns `None` when a clamped lattice has no cell there.
    pub fn displace(&self, cell: CellIndex, dcol: isize, drow: isize) -> Option<CellIndex> {
        let col = cell.col as isize + dcol;
        let row = cell.row as isize + drow;
        let (w, h) = (self.width as isize, self.height as isize);
        match self.boundary {
            Boundary::Periodic => Some(CellIndex::new(
                col.rem_euclid(w) as usize,
                row.rem_euclid(h) as usize,
            )),
            Boundary::Clamped => {
                if (0..w).contains(&col) && (0..h).contains(&row) {
                    Some(CellIndex::new(col as usize, row as usize))
                } else {
                    None
                }
            }
        }
    }

    /// Precomputes the flat neighbor indices of every cell.
    pub fn neighbor_table(&self) -> NeighborTable {
        let n = self.cell_count();
        let mut starts = Vec::with_capacity(n + 1);
        let mut indices = Vec::with_capacity(n * self.full_degree());
        starts.push(0);
        for row in 0..self.height {
            for col in 0..self.width {
                let cell = CellIndex::new(col, row);
                for &(dc, dr) in self.offsets(row) {
                    if let Some(nb) = self.displace(cell, dc, dr) {
                        indices.push((nb.row * self.width + nb.col) as u32);
                    }
                }
                starts.push(indices.len() as u32);
            }
        }
        NeighborTable { starts, indices }
    }

    fn check(&self, cell: CellIndex) -> Result<(), LatticeError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(LatticeError::CellOutOfBounds {
                col: cell.col,
                row: cell.row,
                width: self.width,
                height: self.height,
            })
        }
    }
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeKind::Hexagonal => "hex",
            LatticeKind::Quadratic => "quad",
        })
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Clamped => "clamped",
        })
    }
}

impl fmt::Display for QuadNeighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadNeighborhood::VonNeumann4 => "vn4",
            QuadNeighborhood::Moore8 => "moore8",
        })
    }
}

impl fmt::Display for LatticeSpec {
    /// Compact descriptor such as `hex 100x100 periodic` or
    /// `quad 8x8 clamped moore8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}x{} {}",
            self.kind, self.width, self.height, self.boundary
        )?;
        if self.kind == LatticeKind::Quadratic {
            write!(f, " {}", self.quad_neighborhood)?;
        }
        Ok(())
    }
}

/// Flat neighbor lists for every cell, in compressed-row form.
#[derive(Debug, Clone)]
pub struct NeighborTable {
    starts: Vec<u32>,
    indices: Vec<u32>,
}

impl NeighborTable {
    #[inline]
    pub fn of(&self, index: usize) -> &[u32] {
        &self.indices[self.starts[index] as usize..self.starts[index + 1] as usize]
    }

    pub fn len(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
