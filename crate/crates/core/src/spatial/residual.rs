use rayon::prelude::*;

use crate::collision::add_bgk_rate;
use crate::error::Result;
use crate::tensor_basis::BasisParams;

use super::boundary::{ghost_states, GhostLayer, Side};
use super::flux::{bounds_from_params, hll_flux_into, FluxScratch};
use super::{CellArrays, Discretization, MomentField};

/// Which terms of the residual to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terms {
    /// Transport plus collision.
    Full,
    /// Transport only (interface fluxes and regularization).
    Transport,
}

/// Per-thread buffers for residual assembly.
#[derive(Debug, Clone)]
pub struct CellScratch {
    flux: Vec<f64>,
    proj: Vec<f64>,
    fs: FluxScratch,
}

impl CellScratch {
    pub fn new(len: usize) -> Self {
        CellScratch {
            flux: vec![0.0; len],
            proj: vec![0.0; len],
            fs: FluxScratch::new(len),
        }
    }
}

/// Coefficients and basis of the neighbour of cell `i` across face `(d, side)`.
fn neighbor<'a>(
    disc: &Discretization,
    field: &'a MomentField,
    ghosts: &'a GhostLayer,
    i: usize,
    d: usize,
    side: Side,
) -> (&'a [f64], &'a BasisParams) {
    let grid = &disc.grid;
    let n = grid.n(d);
    let k = grid.coords(i)[d];
    let t = grid.transverse(i, d);
    let interior = match side {
        Side::Hi if k + 1 < n => Some(k + 1),
        Side::Lo if k > 0 => Some(k - 1),
        _ if disc.bc.is_periodic(d) => Some(if k == 0 { n - 1 } else { 0 }),
        _ => None,
    };
    match interior {
        Some(kk) => {
            let j = grid.along(d, t, kk);
            (field.cell(j), &field.params[j])
        }
        None => {
            let g = ghosts.get(d, side, t);
            (&g.coeffs, &g.params)
        }
    }
}

/// Residual of a single cell, written to `out` in the cell's own basis.
///
/// Each interface flux is evaluated in the basis of its left state and
/// projected into cell `i` when `i` is the right state.
pub(crate) fn cell_residual(
    disc: &Discretization,
    field: &MomentField,
    ghosts: &GhostLayer,
    i: usize,
    rhs: Option<&CellArrays>,
    terms: Terms,
    out: &mut [f64],
    ws: &mut CellScratch,
) {
    let basis = &*disc.basis;
    let c_m = basis.c_m();
    let ci = field.cell(i);
    let pi = &field.params[i];
    out.fill(0.0);
    for d in 0..disc.grid.dim() {
        let s = 1.0 / disc.grid.dx(d);

        let (cn, pn) = neighbor(disc, field, ghosts, i, d, Side::Hi);
        let lam = bounds_from_params(c_m, pi, pn, d);
        hll_flux_into(basis, ci, pi, cn, pn, d, lam, &mut ws.flux, &mut ws.fs);
        for (o, f) in out.iter_mut().zip(&ws.flux) {
            *o -= s * f;
        }
        if let Some(t) = &disc.reg {
            t.apply(d, ci, pi, cn, pn, lam, Some((&mut *out, s)), None);
        }

        let (cn, pn) = neighbor(disc, field, ghosts, i, d, Side::Lo);
        let lam = bounds_from_params(c_m, pn, pi, d);
        hll_flux_into(basis, cn, pn, ci, pi, d, lam, &mut ws.flux, &mut ws.fs);
        basis.project_into(&ws.flux, pn, pi, &mut ws.proj, ws.fs.scratch());
        for (o, f) in out.iter_mut().zip(&ws.proj) {
            *o += s * f;
        }
        if let Some(t) = &disc.reg {
            t.apply(d, cn, pn, ci, pi, lam, None, Some((&mut *out, s)));
        }
    }
    if terms == Terms::Full {
        let nu = disc.collision.frequency(ci[0], pi.theta);
        add_bgk_rate(basis, ci, nu, out);
    }
    if let Some(r) = rhs {
        basis.project_into(r.cell(i), &r.params[i], pi, &mut ws.proj, ws.fs.scratch());
        for (o, f) in out.iter_mut().zip(&ws.proj) {
            *o -= f;
        }
    }
}

/// Residual of every cell for a given ghost layer.
pub fn residual_with_ghosts(
    disc: &Discretization,
    field: &MomentField,
    ghosts: &GhostLayer,
    rhs: Option<&CellArrays>,
    terms: Terms,
) -> Result<CellArrays> {
    field.check_admissible()?;
    let mut out = CellArrays::zeros_like(field);
    let len = field.stride();
    out.coeffs
        .par_chunks_mut(len)
        .enumerate()
        .for_each_init(
            || CellScratch::new(len),
            |ws, (i, chunk)| cell_residual(disc, field, ghosts, i, rhs, terms, chunk, ws),
        );
    Ok(out)
}

/// Steady-state residual `R_i(f) - r_i` of every cell, each in its cell's basis.
pub fn moment_residual(
    disc: &Discretization,
    field: &MomentField,
    rhs: Option<&CellArrays>,
) -> Result<CellArrays> {
    field.check_admissible()?;
    let ghosts = ghost_states(field, &disc.bc);
    residual_with_ghosts(disc, field, &ghosts, rhs, Terms::Full)
}

/// Volume-weighted L1 norm of per-cell arrays.
pub fn l1_norm(arrays: &CellArrays, volume: f64) -> f64 {
    arrays.coeffs.iter().map(|x| x.abs()).sum::<f64>() * volume
}
