//! Single-level iterations on the moment field: forward Euler, the
//! semi-implicit scheme (SIS) and its symmetric Gauss-Seidel form (SISGS).

use std::str::FromStr;

use rayon::prelude::*;

use crate::collision::add_bgk_rate;
use crate::error::{Result, SolverError};
use crate::kinetic_state::renormalize_slice;
use crate::spatial::{
    cell_residual, ghost_states, CellArrays, CellScratch, Discretization, GhostLayer, MomentField,
    Terms,
};
use crate::tensor_basis::BasisParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmootherKind {
    Euler,
    Sis,
    Sisgs,
}

impl FromStr for SmootherKind {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "euler" => Ok(SmootherKind::Euler),
            "sis" => Ok(SmootherKind::Sis),
            "sisgs" => Ok(SmootherKind::Sisgs),
            other => Err(SolverError::InvalidParameter(format!("unknown smoother `{other}`"))),
        }
    }
}

/// Global and per-cell time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct StepControl {
    pub dt: f64,
    pub dt_cell: Vec<f64>,
}

/// Local step satisfying `dt sum_d (|u_d| + c_M sqrt(theta)) / dx_d = CFL`.
pub(crate) fn local_dt(disc: &Discretization, p: &BasisParams, cfl: f64) -> f64 {
    let s = disc.c_m() * p.theta.sqrt();
    let mut denom = 0.0;
    for d in 0..disc.grid.dim() {
        denom += (p.u[d].abs() + s) / disc.grid.dx(d);
    }
    cfl / denom
}

pub fn cfl_timesteps(disc: &Discretization, field: &MomentField, cfl: f64) -> StepControl {
    let dt_cell: Vec<f64> = field.params.iter().map(|p| local_dt(disc, p, cfl)).collect();
    let dt = dt_cell.iter().cloned().fold(f64::INFINITY, f64::min);
    StepControl { dt, dt_cell }
}

pub(crate) fn tag_cell(e: SolverError, cell: usize) -> SolverError {
    match e {
        SolverError::Inadmissible { level, detail, .. } => SolverError::Inadmissible {
            level,
            cell,
            detail,
        },
        other => other,
    }
}

/// Buffers for one cell update.
pub(crate) struct UpdateScratch {
    pub res: Vec<f64>,
    pub tmp: Vec<f64>,
    pub scratch: Vec<f64>,
    pub cell: CellScratch,
}

impl UpdateScratch {
    pub fn new(len: usize) -> Self {
        UpdateScratch {
            res: vec![0.0; len],
            tmp: vec![0.0; len],
            scratch: vec![0.0; len],
            cell: CellScratch::new(len),
        }
    }
}

/// Updates cell `i` of `field` into `(params, out)`, returning the L1 norm of
/// the cell's full residual before the update.
#[allow(clippy::too_many_arguments)]
fn update_cell(
    kind: SmootherKind,
    disc: &Discretization,
    field: &MomentField,
    ghosts: &GhostLayer,
    i: usize,
    rhs: Option<&CellArrays>,
    dt: f64,
    params: &mut BasisParams,
    out: &mut [f64],
    ws: &mut UpdateScratch,
) -> Result<f64> {
    let basis = &*disc.basis;
    let ci = field.cell(i);
    let pi = field.params[i];
    let nu = disc.collision.frequency(ci[0], pi.theta);
    match kind {
        SmootherKind::Euler => {
            cell_residual(disc, field, ghosts, i, rhs, Terms::Full, &mut ws.res, &mut ws.cell);
            let norm = ws.res.iter().map(|x| x.abs()).sum();
            for p in 0..out.len() {
                out[p] = ci[p] + dt * ws.res[p];
            }
            *params = pi;
            renormalize_slice(basis, params, out, &mut ws.tmp, &mut ws.scratch)
                .map_err(|e| tag_cell(e, i))?;
            Ok(norm)
        }
        SmootherKind::Sis | SmootherKind::Sisgs => {
            cell_residual(disc, field, ghosts, i, rhs, Terms::Transport, &mut ws.res, &mut ws.cell);
            for p in 0..out.len() {
                out[p] = ci[p] + dt * ws.res[p];
            }
            add_bgk_rate(basis, ci, nu, &mut ws.res);
            let norm = ws.res.iter().map(|x| x.abs()).sum();
            *params = pi;
            renormalize_slice(basis, params, out, &mut ws.tmp, &mut ws.scratch)
                .map_err(|e| tag_cell(e, i))?;
            let nu_new = disc.collision.frequency(out[0], params.theta);
            let factor = 1.0 / (1.0 + dt * nu_new);
            if basis.order() >= 2 {
                for x in &mut out[4..] {
                    *x *= factor;
                }
            }
            Ok(norm)
        }
    }
}

/// Result of one smoothing step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub field: MomentField,
    /// Volume-weighted L1 norm of the residual of the input field.
    pub residual_norm: f64,
}

fn jacobi_step(
    kind: SmootherKind,
    disc: &Discretization,
    field: &MomentField,
    rhs: Option<&CellArrays>,
    cfl: f64,
) -> Result<StepOutput> {
    field.check_admissible()?;
    let ghosts = ghost_states(field, &disc.bc);
    let dt = cfl_timesteps(disc, field, cfl).dt;
    let mut next = field.clone();
    let len = field.stride();
    let norms: Vec<f64> = next
        .coeffs
        .par_chunks_mut(len)
        .zip(next.params.par_iter_mut())
        .enumerate()
        .map_init(
            || UpdateScratch::new(len),
            |ws, (i, (out, p))| update_cell(kind, disc, field, &ghosts, i, rhs, dt, p, out, ws),
        )
        .collect::<Result<Vec<f64>>>()?;
    let residual_norm = norms.iter().sum::<f64>() * disc.grid.cell_volume();
    Ok(StepOutput {
        field: next,
        residual_norm,
    })
}

/// Forward Euler step with the global CFL time step, followed by
/// renormalization.
pub fn euler_step(
    disc: &Discretization,
    field: &MomentField,
    rhs: Option<&CellArrays>,
    cfl: f64,
) -> Result<StepOutput> {
    jacobi_step(SmootherKind::Euler, disc, field, rhs, cfl)
}

/// Semi-implicit step: explicit transport, implicit BGK relaxation of the
/// `|a| >= 2` coefficients with the updated collision frequency.
pub fn sis_step(
    disc: &Discretization,
    field: &MomentField,
    rhs: Option<&CellArrays>,
    cfl: f64,
) -> Result<StepOutput> {
    jacobi_step(SmootherKind::Sis, disc, field, rhs, cfl)
}

/// Update ordering of [`sisgs_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Forward then backward Gauss-Seidel sweep with local time steps.
    Symmetric,
    /// Simultaneous update with the global step; identical to [`sis_step`].
    Jacobi,
}

/// One SISGS iteration: a forward sweep in storage order followed by a
/// backward sweep, each cell using its local time step and the latest values
/// of its neighbours. Ghosts are rebuilt before each sweep.
pub fn sisgs_sweep(
    disc: &Discretization,
    field: &mut MomentField,
    rhs: Option<&CellArrays>,
    cfl: f64,
    mode: SweepMode,
) -> Result<()> {
    field.check_admissible()?;
    let n = field.len();
    let len = field.stride();
    let mut ws = UpdateScratch::new(len);
    let mut out = vec![0.0; len];
    if mode == SweepMode::Jacobi {
        let frozen = field.clone();
        let ghosts = ghost_states(&frozen, &disc.bc);
        let dt = cfl_timesteps(disc, &frozen, cfl).dt;
        for i in 0..n {
            let mut p = frozen.params[i];
            update_cell(SmootherKind::Sisgs, disc, &frozen, &ghosts, i, rhs, dt, &mut p, &mut out, &mut ws)?;
            field.params[i] = p;
            field.cell_mut(i).copy_from_slice(&out);
        }
        return Ok(());
    }
    for backward in [false, true] {
        let ghosts = ghost_states(field, &disc.bc);
        for k in 0..n {
            let i = if backward { n - 1 - k } else { k };
            let dt = local_dt(disc, &field.params[i], cfl);
            let mut p = field.params[i];
            update_cell(SmootherKind::Sisgs, disc, field, &ghosts, i, rhs, dt, &mut p, &mut out, &mut ws)?;
            field.params[i] = p;
            field.cell_mut(i).copy_from_slice(&out);
        }
    }
    Ok(())
}

/// Applies one step of the given smoother in place; returns the residual
/// norm of the input field when it comes for free.
pub fn smoother_step(
    kind: SmootherKind,
    disc: &Discretization,
    field: &mut MomentField,
    rhs: Option<&CellArrays>,
    cfl: f64,
) -> Result<Option<f64>> {
    match kind {
        SmootherKind::Euler | SmootherKind::Sis => {
            let out = jacobi_step(kind, disc, field, rhs, cfl)?;
            *field = out.field;
            Ok(Some(out.residual_norm))
        }
        SmootherKind::Sisgs => {
            sisgs_sweep(disc, field, rhs, cfl, SweepMode::Symmetric)?;
            Ok(None)
        }
    }
}
