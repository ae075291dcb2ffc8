//! The fast iterative moment (FIM) alternating iteration and the steady-state
//! driver shared by every solver.
//!
//! One FIM iteration smooths the moment system, freezes the stress and heat
//! flux, solves the hydrodynamic subsystem for the primary moments, and writes
//! the improved `(rho, u, theta)` back into the moment field.

use std::str::FromStr;
use std::time::Instant;

use crate::error::{Result, SolverError};
use crate::hydro::{hydro_inner_solve, HydroField, HydroScheme, Vec5};
use crate::kinetic_state::{conserved, enforce_native};
use crate::nmg::{vcycle, Hierarchy, NmgConfig};
use crate::smoothers::{smoother_step, SmootherKind};
use crate::spatial::{l1_norm, moment_residual, CellArrays, Discretization, MomentField};
use crate::tensor_basis::BasisParams;

/// Pairing of moment smoother and hydro scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FimVariant {
    /// Euler / Euler
    Fim1,
    /// SIS / Euler
    Fim2,
    /// SISGS / SGS
    Fim3,
}

impl FimVariant {
    pub fn schemes(self) -> (SmootherKind, HydroScheme) {
        match self {
            FimVariant::Fim1 => (SmootherKind::Euler, HydroScheme::Euler),
            FimVariant::Fim2 => (SmootherKind::Sis, HydroScheme::Euler),
            FimVariant::Fim3 => (SmootherKind::Sisgs, HydroScheme::Sgs),
        }
    }
}

impl FromStr for FimVariant {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fim-1" | "fim1" => Ok(FimVariant::Fim1),
            "fim-2" | "fim2" => Ok(FimVariant::Fim2),
            "fim-3" | "fim3" => Ok(FimVariant::Fim3),
            other => Err(SolverError::InvalidParameter(format!("unknown FIM variant `{other}`"))),
        }
    }
}

/// How the hydro result replaces the primary moments of the smoothed field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WriteBack {
    /// Higher-order coefficients kept numerically unchanged in the new basis.
    Keep,
    /// Higher-order content re-expanded onto the new basis.
    Reproject,
}

impl FromStr for WriteBack {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "keep" => Ok(WriteBack::Keep),
            "reproject" => Ok(WriteBack::Reproject),
            other => Err(SolverError::InvalidParameter(format!("unknown write-back `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FimConfig {
    pub variant: FimVariant,
    pub gamma1: usize,
    pub gamma2: usize,
    pub inner_tol: f64,
    pub writeback: WriteBack,
    pub cfl: f64,
}

impl FimConfig {
    pub fn new(variant: FimVariant, gamma2: usize) -> Self {
        FimConfig {
            variant,
            gamma1: 1,
            gamma2,
            inner_tol: 1e-8,
            writeback: WriteBack::Keep,
            cfl: 0.8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma1 == 0 {
            return Err(SolverError::InvalidParameter("gamma1 must be at least 1".into()));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::InvalidParameter(format!("CFL must lie in (0, 1), got {}", self.cfl)));
        }
        Ok(())
    }
}

/// Counters of one FIM iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FimStats {
    pub inner_steps: usize,
    /// Residual norm of the input field when the first smoothing step
    /// provides it.
    pub residual_norm: Option<f64>,
}

/// Hydro source terms: conserved components of the moment source.
pub fn hydro_rhs(field: &MomentField, rhs: &CellArrays) -> Vec<Vec5> {
    (0..rhs.len())
        .map(|i| conserved(&field.basis, rhs.cell(i), &rhs.params[i]))
        .collect()
}

fn write_back(field: &mut MomentField, hf: &HydroField, mode: WriteBack) -> Result<()> {
    let basis = field.basis.clone();
    let len = basis.len();
    let mut tmp = vec![0.0; len];
    let mut scratch = vec![0.0; len];
    for i in 0..field.len() {
        let (rho, u, theta) = hf.cells[i].primitives();
        if !(rho > 0.0 && theta > 0.0) {
            return Err(SolverError::inadmissible(i, format!("hydro rho={rho}, theta={theta}")));
        }
        let target = BasisParams::new(u, theta);
        let old = field.params[i];
        let c = field.cell_mut(i);
        if mode == WriteBack::Reproject {
            basis.project_into(c, &old, &target, &mut tmp, &mut scratch);
            c.copy_from_slice(&tmp);
        }
        c[0] = rho;
        enforce_native(&basis, c);
        field.params[i] = target;
    }
    Ok(())
}

/// One step of the alternating iteration.
pub fn fim_iteration(
    disc: &Discretization,
    field: &mut MomentField,
    cfg: &FimConfig,
    rhs: Option<&CellArrays>,
) -> Result<FimStats> {
    let (kind, scheme) = cfg.variant.schemes();
    let mut residual_norm = None;
    for k in 0..cfg.gamma1 {
        let r = smoother_step(kind, disc, field, rhs, cfg.cfl)?;
        if k == 0 {
            residual_norm = r;
        }
    }
    if cfg.gamma2 == 0 {
        return Ok(FimStats {
            inner_steps: 0,
            residual_norm,
        });
    }
    let hf0 = HydroField::from_moments(field);
    let rh = rhs.map(|r| hydro_rhs(field, r));
    let (hf, m) = hydro_inner_solve(
        disc,
        &hf0,
        rh.as_deref(),
        cfg.gamma2,
        cfg.inner_tol,
        scheme,
        cfg.cfl,
    )?;
    write_back(field, &hf, cfg.writeback)?;
    Ok(FimStats {
        inner_steps: m,
        residual_norm,
    })
}

/// Rescales every coefficient so that the total mass equals `target`.
pub fn mass_correction(field: &mut MomentField, target: f64) -> Result<()> {
    let mass = field.total_mass();
    if !(mass > 0.0) || !(target > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "mass correction needs positive masses, got {mass} -> {target}"
        )));
    }
    let k = target / mass;
    if k != 1.0 {
        field.coeffs.iter_mut().for_each(|x| *x *= k);
    }
    Ok(())
}

/// Iteration performed by [`solve_to_steady`].
#[derive(Debug, Clone)]
pub enum SolverKind {
    Basic(SmootherKind),
    Fim(FimConfig),
    Nmg(NmgConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub cfl: f64,
    /// Rescale to the initial mass after every iteration.
    pub mass_correction: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-8,
            max_iters: 100_000,
            cfl: 0.8,
            mass_correction: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub iter: usize,
    /// Residual relative to the initial one.
    pub residual: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    Converged,
    MaxIters,
    Diverged(String),
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Iterations taken to reach the final state.
    pub iterations: usize,
    pub initial_residual: f64,
    pub history: Vec<HistoryEntry>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }
}

/// Volume-weighted L1 norm of the residual of `field`.
pub fn residual_norm(disc: &Discretization, field: &MomentField) -> Result<f64> {
    Ok(l1_norm(&moment_residual(disc, field, None)?, disc.grid.cell_volume()))
}

/// Iterates `solver` until the relative L1 residual drops below `opts.tol`.
///
/// `observer` sees every history entry as it is produced, together with the
/// field it was measured on.
pub fn solve_to_steady(
    disc: &Discretization,
    field: &mut MomentField,
    solver: &SolverKind,
    opts: &SolveOptions,
    observer: &mut dyn FnMut(&HistoryEntry, &MomentField),
) -> Result<SolveReport> {
    let start = Instant::now();
    let target_mass = field.total_mass();
    let hierarchy = match solver {
        SolverKind::Nmg(cfg) => Some(Hierarchy::new(disc, cfg)?),
        _ => None,
    };
    if let SolverKind::Fim(cfg) = solver {
        cfg.validate()?;
    }
    let mut history = Vec::new();
    let mut r0 = None;
    let mut k = 0;
    loop {
        let mut next: Option<MomentField> = None;
        let outcome: Result<f64> = (|| match solver {
            SolverKind::Basic(kind @ (SmootherKind::Euler | SmootherKind::Sis)) => {
                let mut f = field.clone();
                let norm = smoother_step(*kind, disc, &mut f, None, opts.cfl)?;
                next = Some(f);
                Ok(norm.expect("jacobi smoothers report the residual"))
            }
            _ => residual_norm(disc, field),
        })();
        let norm = match outcome {
            Ok(n) => n,
            Err(e) => return Ok(diverged(e.to_string(), k, r0, history)),
        };
        let r0v = *r0.get_or_insert(norm);
        let rel = if r0v > 0.0 { norm / r0v } else { 0.0 };
        let entry = HistoryEntry {
            iter: k,
            residual: rel,
            seconds: start.elapsed().as_secs_f64(),
        };
        observer(&entry, field);
        history.push(entry);
        if !rel.is_finite() || rel > 1e6 {
            return Ok(diverged(format!("residual grew to {rel:e}"), k, r0, history));
        }
        if rel < opts.tol {
            return Ok(SolveReport {
                status: SolveStatus::Converged,
                iterations: k,
                initial_residual: r0v,
                history,
            });
        }
        if k >= opts.max_iters {
            return Ok(SolveReport {
                status: SolveStatus::MaxIters,
                iterations: k,
                initial_residual: r0v,
                history,
            });
        }
        let step: Result<()> = (|| {
            match (solver, next.take()) {
                (_, Some(f)) => *field = f,
                (SolverKind::Basic(kind), None) => {
                    smoother_step(*kind, disc, field, None, opts.cfl)?;
                }
                (SolverKind::Fim(cfg), None) => {
                    fim_iteration(disc, field, cfg, None)?;
                }
                (SolverKind::Nmg(cfg), None) => {
                    vcycle(hierarchy.as_ref().unwrap(), 0, field, None, cfg)?;
                }
            }
            if opts.mass_correction {
                mass_correction(field, target_mass)?;
            }
            Ok(())
        })();
        if let Err(e) = step {
            return Ok(diverged(e.to_string(), k, r0, history));
        }
        k += 1;
    }
}

fn diverged(reason: String, k: usize, r0: Option<f64>, history: Vec<HistoryEntry>) -> SolveReport {
    SolveReport {
        status: SolveStatus::Diverged(reason),
        iterations: k,
        initial_residual: r0.unwrap_or(f64::NAN),
        history,
    }
}
