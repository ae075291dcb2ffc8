//! Full approximation scheme (FAS) nonlinear multigrid over spatial levels.
//!
//! Coarse levels solve `R(f) = r` with `r = R(restrict f) + restrict(r_fine - R(f_fine))`;
//! their change is injected back into the children of each coarse cell.

use rayon::prelude::*;

use crate::error::{Result, SolverError};
use crate::fim::{fim_iteration, FimConfig};
use crate::kinetic_state::renormalize_slice;
use crate::smoothers::{smoother_step, tag_cell, SmootherKind};
use crate::spatial::{moment_residual, CellArrays, Discretization, Grid, MomentField};
use crate::tensor_basis::BasisParams;

/// Smoother applied on every level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelSmoother {
    Basic(SmootherKind),
    Fim(FimConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmgConfig {
    /// Number of levels; `None` coarsens down to 8 cells per direction.
    pub levels: Option<usize>,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub smoother: LevelSmoother,
    pub cfl: f64,
}

impl NmgConfig {
    pub fn new(smoother: LevelSmoother) -> Self {
        NmgConfig {
            levels: None,
            s1: 2,
            s2: 2,
            s3: 4,
            smoother,
            cfl: 0.8,
        }
    }
}

/// Discretizations of every level, finest first.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub levels: Vec<Discretization>,
}

const COARSEST: usize = 8;

impl Hierarchy {
    pub fn new(fine: &Discretization, cfg: &NmgConfig) -> Result<Self> {
        let mut levels = vec![fine.clone()];
        loop {
            let g = levels.last().unwrap().grid;
            if let Some(n) = cfg.levels {
                if levels.len() >= n {
                    break;
                }
            }
            let can = (0..g.dim()).all(|d| g.n(d) % 2 == 0 && g.n(d) / 2 >= COARSEST);
            if !can {
                if cfg.levels.is_some() {
                    return Err(SolverError::InvalidParameter(format!(
                        "cannot build {} levels from {} cells",
                        cfg.levels.unwrap(),
                        fine.grid.n(0)
                    )));
                }
                break;
            }
            let coarse = g.coarsen()?;
            levels.push(fine.with_grid(coarse));
        }
        if cfg.levels == Some(0) {
            return Err(SolverError::InvalidParameter("nmg needs at least one level".into()));
        }
        Ok(Hierarchy { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

fn mass_weighted_params(field: &MomentField, cells: &[usize]) -> BasisParams {
    let mut m = 0.0;
    let mut u = [0.0; 3];
    let mut th = 0.0;
    for &c in cells {
        let rho = field.cell(c)[0];
        let p = &field.params[c];
        m += rho;
        for d in 0..3 {
            u[d] += rho * p.u[d];
        }
        th += rho * p.theta;
    }
    BasisParams::new([u[0] / m, u[1] / m, u[2] / m], th / m)
}

/// Conservative aggregation of children onto the coarse grid.
pub fn restrict_field(fine: &MomentField, coarse_grid: &Grid) -> Result<MomentField> {
    let basis = fine.basis.clone();
    let len = basis.len();
    let n = coarse_grid.cell_count();
    let mut params = vec![BasisParams::new([0.0; 3], 1.0); n];
    let mut coeffs = vec![0.0; n * len];
    coeffs
        .par_chunks_mut(len)
        .zip(params.par_iter_mut())
        .enumerate()
        .try_for_each_init(
            || (vec![0.0; len], vec![0.0; len]),
            |(tmp, scratch), (ci, (out, p))| -> Result<()> {
                let children = fine.grid.children(coarse_grid, ci);
                let common = mass_weighted_params(fine, &children);
                out.fill(0.0);
                let w = 1.0 / children.len() as f64;
                for &c in &children {
                    basis.project_into(fine.cell(c), &fine.params[c], &common, tmp, scratch);
                    for (o, x) in out.iter_mut().zip(tmp.iter()) {
                        *o += w * x;
                    }
                }
                *p = common;
                renormalize_slice(&basis, p, out, tmp, scratch).map_err(|e| tag_cell(e, ci))
            },
        )?;
    Ok(MomentField {
        grid: *coarse_grid,
        basis,
        params,
        coeffs,
    })
}

/// Average of the children's arrays, each projected to `coarse_params`.
pub fn restrict_residual(
    fine_grid: &Grid,
    fine: &CellArrays,
    coarse_grid: &Grid,
    coarse_params: &[BasisParams],
    basis: &crate::tensor_basis::HermiteBasis,
) -> CellArrays {
    let len = fine.stride;
    let mut out = CellArrays {
        params: coarse_params.to_vec(),
        coeffs: vec![0.0; coarse_params.len() * len],
        stride: len,
    };
    out.coeffs
        .par_chunks_mut(len)
        .enumerate()
        .for_each_init(
            || (vec![0.0; len], vec![0.0; len]),
            |(tmp, scratch), (ci, o)| {
                let children = fine_grid.children(coarse_grid, ci);
                let w = 1.0 / children.len() as f64;
                for &c in &children {
                    basis.project_into(fine.cell(c), &fine.params[c], &coarse_params[ci], tmp, scratch);
                    for (a, x) in o.iter_mut().zip(tmp.iter()) {
                        *a += w * x;
                    }
                }
            },
        );
    out
}

/// Adds the coarse change `new - old` of each parent to its children, in the
/// children's bases, and renormalizes.
pub fn prolong_correction(
    coarse_new: &MomentField,
    coarse_old: &MomentField,
    fine: &mut MomentField,
) -> Result<()> {
    let basis = fine.basis.clone();
    let len = basis.len();
    let fine_grid = fine.grid;
    let coarse_grid = coarse_new.grid;
    fine.coeffs
        .par_chunks_mut(len)
        .zip(fine.params.par_iter_mut())
        .enumerate()
        .try_for_each_init(
            || (vec![0.0; len], vec![0.0; len], vec![0.0; len]),
            |(a, b, scratch), (i, (c, p))| -> Result<()> {
                let parent = fine_grid.parent(&coarse_grid, i);
                basis.project_into(coarse_new.cell(parent), &coarse_new.params[parent], p, a, scratch);
                basis.project_into(coarse_old.cell(parent), &coarse_old.params[parent], p, b, scratch);
                for k in 0..len {
                    c[k] += a[k] - b[k];
                }
                renormalize_slice(&basis, p, c, a, scratch).map_err(|e| tag_cell(e, i))
            },
        )
}

fn smooth(
    disc: &Discretization,
    field: &mut MomentField,
    rhs: Option<&CellArrays>,
    cfg: &NmgConfig,
    count: usize,
) -> Result<()> {
    for _ in 0..count {
        match &cfg.smoother {
            LevelSmoother::Basic(kind) => {
                smoother_step(*kind, disc, field, rhs, cfg.cfl)?;
            }
            LevelSmoother::Fim(f) => {
                fim_iteration(disc, field, f, rhs)?;
            }
        }
    }
    Ok(())
}

/// One FAS V-cycle starting at `level`.
pub fn vcycle(
    h: &Hierarchy,
    level: usize,
    field: &mut MomentField,
    rhs: Option<&CellArrays>,
    cfg: &NmgConfig,
) -> Result<()> {
    let disc = &h.levels[level];
    let tagged = |e: SolverError| e.at_level(level);
    if level + 1 == h.depth() {
        return smooth(disc, field, rhs, cfg, cfg.s3).map_err(tagged);
    }
    smooth(disc, field, rhs, cfg, cfg.s1).map_err(tagged)?;

    let coarse_disc = &h.levels[level + 1];
    let mut coarse = restrict_field(field, &coarse_disc.grid).map_err(|e| e.at_level(level + 1))?;
    let mut defect = moment_residual(disc, field, rhs).map_err(tagged)?;
    defect.coeffs.iter_mut().for_each(|x| *x = -*x);
    let mut coarse_rhs = restrict_residual(
        &disc.grid,
        &defect,
        &coarse_disc.grid,
        &coarse.params,
        &disc.basis,
    );
    let base = moment_residual(coarse_disc, &coarse, None).map_err(|e| e.at_level(level + 1))?;
    for (r, b) in coarse_rhs.coeffs.iter_mut().zip(&base.coeffs) {
        *r += b;
    }
    let coarse_old = coarse.clone();
    vcycle(h, level + 1, &mut coarse, Some(&coarse_rhs), cfg)?;
    prolong_correction(&coarse, &coarse_old, field).map_err(tagged)?;

    smooth(disc, field, rhs, cfg, cfg.s2).map_err(tagged)
}
