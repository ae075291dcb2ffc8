use crate::error::{Result, SolverError};

/// Uniform Cartesian grid in one or two dimensions.
///
/// Cells are stored with the first index outermost: `cell = i1 * n2 + i2`,
/// so storage order coincides with the forward sweep ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dim: usize,
    n: [usize; 2],
    lo: [f64; 2],
    hi: [f64; 2],
}

impl Grid {
    pub fn new_1d(n1: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(1, [n1, 1], [lo, 0.0], [hi, 1.0])
    }

    pub fn new_2d(n: [usize; 2], lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        Self::new(2, n, lo, hi)
    }

    fn new(dim: usize, n: [usize; 2], lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        for d in 0..dim {
            if n[d] < 2 {
                return Err(SolverError::InvalidParameter(format!(
                    "grid needs at least 2 cells per direction, got {}",
                    n[d]
                )));
            }
            if !(hi[d] > lo[d]) {
                return Err(SolverError::InvalidParameter("empty grid extent".into()));
            }
        }
        Ok(Grid { dim, n, lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells along direction `d`; 1 for the missing direction of a 1D grid.
    pub fn n(&self, d: usize) -> usize {
        self.n[d]
    }

    pub fn dx(&self, d: usize) -> f64 {
        (self.hi[d] - self.lo[d]) / self.n[d] as f64
    }

    pub fn lo(&self, d: usize) -> f64 {
        self.lo[d]
    }

    pub fn hi(&self, d: usize) -> f64 {
        self.hi[d]
    }

    pub fn cell_count(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|d| self.dx(d)).product()
    }

    pub fn index(&self, i: [usize; 2]) -> usize {
        i[0] * self.n[1] + i[1]
    }

    pub fn coords(&self, cell: usize) -> [usize; 2] {
        [cell / self.n[1], cell % self.n[1]]
    }

    pub fn center(&self, cell: usize) -> [f64; 2] {
        let c = self.coords(cell);
        let mut x = [0.0; 2];
        for d in 0..self.dim {
            x[d] = self.lo[d] + (c[d] as f64 + 0.5) * self.dx(d);
        }
        x
    }

    /// Number of cells touching a boundary face normal to `d`.
    pub fn face_len(&self, d: usize) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.n[1 - d]
        }
    }

    /// Transverse coordinate of a cell with respect to direction `d`.
    pub fn transverse(&self, cell: usize, d: usize) -> usize {
        if self.dim == 1 {
            0
        } else {
            self.coords(cell)[1 - d]
        }
    }

    /// Cell at position `k` along `d` on transverse line `t`.
    pub fn along(&self, d: usize, t: usize, k: usize) -> usize {
        let mut i = [0; 2];
        i[d] = k;
        if self.dim == 2 {
            i[1 - d] = t;
        }
        self.index(i)
    }

    /// Grid with half the cells per direction over the same domain.
    pub fn coarsen(&self) -> Result<Grid> {
        let mut n = self.n;
        for d in 0..self.dim {
            if n[d] % 2 != 0 {
                return Err(SolverError::InvalidParameter(format!(
                    "cannot coarsen odd cell count {}",
                    n[d]
                )));
            }
            n[d] /= 2;
        }
        Grid::new(self.dim, n, self.lo, self.hi)
    }

    /// Fine-grid children of a coarse cell, for a grid produced by `coarsen`.
    pub fn children(&self, coarse: &Grid, cell: usize) -> Vec<usize> {
        let c = coarse.coords(cell);
        let mut out = Vec::with_capacity(4);
        if self.dim == 1 {
            out.push(self.index([2 * c[0], 0]));
            out.push(self.index([2 * c[0] + 1, 0]));
        } else {
            for a in 0..2 {
                for b in 0..2 {
                    out.push(self.index([2 * c[0] + a, 2 * c[1] + b]));
                }
            }
        }
        out
    }

    /// Coarse parent of a fine cell.
    pub fn parent(&self, coarse: &Grid, cell: usize) -> usize {
        let c = self.coords(cell);
        if self.dim == 1 {
            coarse.index([c[0] / 2, 0])
        } else {
            coarse.index([c[0] / 2, c[1] / 2])
        }
    }
}
