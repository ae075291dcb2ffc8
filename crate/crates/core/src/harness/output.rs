//! CSV profiles, residual history and the binary snapshot format.
//!
//! Snapshot layout (little endian): magic `FIMSNAP1`, order `M` (u32),
//! dimension `D` (u32), `N_d` (u32 each), then per cell `u[3]`, `theta` and
//! the coefficients as f64.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Result, SolverError};
use crate::fim::HistoryEntry;
use crate::kinetic_state::{macro_quantities, MomentState};
use crate::spatial::MomentField;
use crate::tensor_basis::BasisParams;

use super::problems::{normalize_shock_profile, ProblemKind, ShockStates};

pub const SNAPSHOT_MAGIC: &[u8; 8] = b"FIMSNAP1";

/// Largest expansion order a snapshot may declare.
pub const SNAPSHOT_MAX_ORDER: usize = 64;

/// Writes the per-cell profile of a benchmark as CSV.
pub fn write_profile(
    path: &Path,
    kind: ProblemKind,
    field: &MomentField,
    shock: Option<&ShockStates>,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let basis = &field.basis;
    match (kind, shock) {
        (ProblemKind::Shock, Some(st)) => {
            writeln!(w, "x,rho,u1,theta,rho_bar,u_bar,theta_bar")?;
            for (i, row) in normalize_shock_profile(field, st).iter().enumerate() {
                let p = &field.params[i];
                writeln!(
                    w,
                    "{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}",
                    row.x,
                    field.cell(i)[0],
                    p.u[0],
                    p.theta,
                    row.rho,
                    row.u1,
                    row.theta
                )?;
            }
        }
        (ProblemKind::Cavity, _) => {
            writeln!(w, "x,y,rho,u1,u2,theta,q1,q2")?;
            for i in 0..field.len() {
                let m = macro_quantities(basis, &field.state(i))?;
                let c = field.grid.center(i);
                writeln!(
                    w,
                    "{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}",
                    c[0], c[1], m.rho, m.u[0], m.u[1], m.theta, m.q[0], m.q[1]
                )?;
            }
        }
        _ => {
            writeln!(w, "x,rho,theta,u2,q1")?;
            for i in 0..field.len() {
                let m = macro_quantities(basis, &field.state(i))?;
                let c = field.grid.center(i);
                writeln!(
                    w,
                    "{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}",
                    c[0], m.rho, m.theta, m.u[1], m.q[0]
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Residual history CSV, flushed after every row so that long runs can be
/// monitored.
pub struct HistoryWriter {
    out: BufWriter<File>,
}

impl HistoryWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "iter,residual,seconds")?;
        out.flush()?;
        Ok(HistoryWriter { out })
    }

    pub fn push(&mut self, e: &HistoryEntry) -> Result<()> {
        writeln!(self.out, "{},{:.10e},{:.6}", e.iter, e.residual, e.seconds)?;
        self.out.flush()?;
        Ok(())
    }
}

/// Decoded snapshot contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub order: usize,
    pub dims: Vec<usize>,
    pub cells: Vec<MomentState>,
}

fn basis_len(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

pub fn encode_snapshot(field: &MomentField) -> Vec<u8> {
    let dim = field.grid.dim();
    let len = field.stride();
    let mut out = Vec::with_capacity(16 + 4 * dim + field.len() * (4 + len) * 8);
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&(field.basis.order() as u32).to_le_bytes());
    out.extend_from_slice(&(dim as u32).to_le_bytes());
    for d in 0..dim {
        out.extend_from_slice(&(field.grid.n(d) as u32).to_le_bytes());
    }
    for i in 0..field.len() {
        let p = &field.params[i];
        for x in p.u.iter().chain([p.theta].iter()).chain(field.cell(i)) {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

pub fn write_snapshot(path: &Path, field: &MomentField) -> Result<()> {
    std::fs::write(path, encode_snapshot(field))?;
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(SolverError::Snapshot("unexpected end of data".into()));
        }
        let (a, b) = self.buf.split_at(n);
        self.buf = b;
        Ok(a)
    }

    fn u32(&mut self) -> Result<usize> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Parses a snapshot, validating header, size and every cell's parameters.
pub fn decode_snapshot(bytes: &[u8]) -> Result<Snapshot> {
    let mut r = Reader { buf: bytes };
    if r.take(8)? != SNAPSHOT_MAGIC {
        return Err(SolverError::Snapshot("bad magic".into()));
    }
    let order = r.u32()?;
    if order > SNAPSHOT_MAX_ORDER {
        return Err(SolverError::Snapshot(format!("order {order} exceeds {SNAPSHOT_MAX_ORDER}")));
    }
    let dim = r.u32()?;
    if !(1..=2).contains(&dim) {
        return Err(SolverError::Snapshot(format!("dimension {dim} not supported")));
    }
    let mut dims = Vec::with_capacity(dim);
    for _ in 0..dim {
        let n = r.u32()?;
        if n == 0 {
            return Err(SolverError::Snapshot("empty grid dimension".into()));
        }
        dims.push(n);
    }
    let len = basis_len(order);
    let cells = dims
        .iter()
        .try_fold(1usize, |a, &n| a.checked_mul(n))
        .ok_or_else(|| SolverError::Snapshot("cell count overflows".into()))?;
    let expected = cells
        .checked_mul(len + 4)
        .and_then(|v| v.checked_mul(8))
        .ok_or_else(|| SolverError::Snapshot("payload size overflows".into()))?;
    if r.buf.len() != expected {
        return Err(SolverError::Snapshot(format!(
            "payload has {} bytes, header implies {expected}",
            r.buf.len()
        )));
    }
    let mut out = Vec::with_capacity(cells);
    for i in 0..cells {
        let u = [r.f64()?, r.f64()?, r.f64()?];
        let theta = r.f64()?;
        if !(theta > 0.0 && theta.is_finite()) || u.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::Snapshot(format!("cell {i}: invalid basis parameters")));
        }
        let coeffs = (0..len).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::Snapshot(format!("cell {i}: non-finite coefficient")));
        }
        out.push(MomentState {
            params: BasisParams::new(u, theta),
            coeffs,
        });
    }
    Ok(Snapshot {
        order,
        dims,
        cells: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::Grid;
    use crate::tensor_basis::HermiteBasis;

    #[test]
    fn snapshot_round_trip() {
        let basis = HermiteBasis::new(3).unwrap();
        let grid = Grid::new_2d([3, 2], [0.0; 2], [1.0; 2]).unwrap();
        let mut field = MomentField::uniform(grid, basis, 1.0, [0.1, 0.2, 0.0], 1.3).unwrap();
        for (k, x) in field.coeffs.iter_mut().enumerate() {
            *x += 1e-3 * k as f64;
        }
        let bytes = encode_snapshot(&field);
        assert_eq!(bytes.len(), 8 + 4 + 4 + 8 + 6 * (20 + 4) * 8);
        let s = decode_snapshot(&bytes).unwrap();
        assert_eq!(s.order, 3);
        assert_eq!(s.dims, vec![3, 2]);
        for i in 0..6 {
            assert_eq!(s.cells[i], field.state(i));
        }
        assert!(decode_snapshot(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_snapshot(&bad).is_err());
        let mut bad = bytes;
        bad[12] = 3;
        assert!(decode_snapshot(&bad).is_err());
    }
}
