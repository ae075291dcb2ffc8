//! Benchmark set-ups: planar Couette flow, normal shock structure and the
//! lid-driven cavity.

use std::str::FromStr;
use std::sync::Arc;

use crate::collision::{CollisionKind, CollisionModel};
use crate::error::{Result, SolverError};
use crate::kinetic_state::maxwellian_state;
use crate::spatial::{BoundaryKind, BoundarySpec, Discretization, Grid, MomentField, Regularization};
use crate::tensor_basis::HermiteBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Couette,
    Shock,
    Cavity,
}

impl FromStr for ProblemKind {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "couette" => Ok(ProblemKind::Couette),
            "shock" => Ok(ProblemKind::Shock),
            "cavity" => Ok(ProblemKind::Cavity),
            other => Err(SolverError::Config(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// Half of the Couette relative wall speed `1.2577`.
pub const COUETTE_WALL_SPEED: f64 = 0.62885;

/// Viscosity index of the Couette and cavity gas.
pub const POWER_LAW_OMEGA: f64 = 0.81;

/// Viscosity index and Knudsen number of the shock-structure gas.
pub const VHS_OMEGA: f64 = 0.72;
pub const SHOCK_KN: f64 = 0.1;

/// Boltzmann constant and molecular mass used to scale the cavity lid speed.
const K_B: f64 = 1.380649e-23;
const MOLECULAR_MASS: f64 = 6.63e-26;
const CAVITY_WALL_T: f64 = 273.0;
const CAVITY_LID_SPEED: f64 = 50.0;

/// Dimensionless lid speed `u^W / sqrt(k_B T^W / m)`.
pub fn cavity_lid_speed() -> f64 {
    CAVITY_LID_SPEED / (K_B / MOLECULAR_MASS * CAVITY_WALL_T).sqrt()
}

/// Upstream and downstream states of a normal shock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockStates {
    pub mach: f64,
    pub left: (f64, f64, f64),
    pub right: (f64, f64, f64),
}

/// Rankine-Hugoniot states for a monatomic gas with `rho_l = theta_l = 1`.
pub fn shock_states(mach: f64) -> ShockStates {
    let m2 = mach * mach;
    let gamma_sqrt = (5.0f64 / 3.0).sqrt();
    let rho_r = 4.0 * m2 / (m2 + 3.0);
    let u_r = gamma_sqrt * (m2 + 3.0) / (4.0 * mach);
    let theta_r = (5.0 * m2 - 1.0) / (4.0 * rho_r);
    ShockStates {
        mach,
        left: (1.0, gamma_sqrt * mach, 1.0),
        right: (rho_r, u_r, theta_r),
    }
}

/// A ready-to-solve benchmark: operator, initial field and run defaults.
#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    pub kn: f64,
    pub disc: Discretization,
    pub initial: MomentField,
    pub tol: f64,
    pub mass_correction: bool,
    pub shock: Option<ShockStates>,
}

impl Problem {
    /// Hydro step cap used by the paper's runs for this benchmark and Kn.
    pub fn default_gamma2(&self) -> usize {
        let pick = |a, b, c| {
            let l = self.kn.log10();
            if l > -1.5 {
                a
            } else if l > -2.5 {
                b
            } else {
                c
            }
        };
        match self.kind {
            ProblemKind::Couette => pick(40, 300, 600),
            ProblemKind::Shock => 5,
            ProblemKind::Cavity => pick(20, 100, 200),
        }
    }
}

fn check_common(kn: f64, order: usize) -> Result<Arc<HermiteBasis>> {
    if !(kn > 0.0) {
        return Err(SolverError::InvalidParameter(format!("Kn must be positive, got {kn}")));
    }
    if order < 2 {
        return Err(SolverError::InvalidParameter(format!(
            "expansion order must be at least 2, got {order}"
        )));
    }
    HermiteBasis::new(order)
}

/// Planar Couette flow between diffuse walls moving at `+-0.62885` along `y`.
pub fn build_couette(kn: f64, order: usize, n1: usize, reg: Option<Regularization>) -> Result<Problem> {
    let basis = check_common(kn, order)?;
    let grid = Grid::new_1d(n1, 0.0, 1.0)?;
    let lo = BoundaryKind::MaxwellWall {
        u: [0.0, -COUETTE_WALL_SPEED, 0.0],
        theta: 1.0,
    };
    let hi = BoundaryKind::MaxwellWall {
        u: [0.0, COUETTE_WALL_SPEED, 0.0],
        theta: 1.0,
    };
    let model = CollisionModel::new(CollisionKind::PowerLaw, kn, POWER_LAW_OMEGA)?;
    let reg = reg.unwrap_or(Regularization::default_for(order));
    let disc = Discretization::new(grid, basis.clone(), BoundarySpec::new_1d(lo, hi), model, reg)?;
    let initial = MomentField::uniform(grid, basis, 1.0, [0.0; 3], 1.0)?;
    Ok(Problem {
        kind: ProblemKind::Couette,
        kn,
        disc,
        initial,
        tol: 1e-8,
        mass_correction: true,
        shock: None,
    })
}

/// Normal shock on `[-1.5, 1.5]` started from the Riemann data.
pub fn build_shock(mach: f64, order: usize, n1: usize, reg: Option<Regularization>) -> Result<Problem> {
    if !(mach > 1.0) {
        return Err(SolverError::InvalidParameter(format!("Mach number must exceed 1, got {mach}")));
    }
    let basis = check_common(SHOCK_KN, order)?;
    let grid = Grid::new_1d(n1, -1.5, 1.5)?;
    let st = shock_states(mach);
    let (rl, ul, tl) = st.left;
    let (rr, ur, tr) = st.right;
    let bc = BoundarySpec::new_1d(
        BoundaryKind::Prescribed { rho: rl, u: [ul, 0.0, 0.0], theta: tl },
        BoundaryKind::Prescribed { rho: rr, u: [ur, 0.0, 0.0], theta: tr },
    );
    let model = CollisionModel::new(CollisionKind::Vhs, SHOCK_KN, VHS_OMEGA)?;
    let reg = reg.unwrap_or(Regularization::default_for(order));
    let disc = Discretization::new(grid, basis.clone(), bc, model, reg)?;
    let left = maxwellian_state(&basis, rl, [ul, 0.0, 0.0], tl)?;
    let right = maxwellian_state(&basis, rr, [ur, 0.0, 0.0], tr)?;
    let initial = MomentField::from_fn(grid, basis, |i| {
        if grid.center(i)[0] < 0.0 {
            left.clone()
        } else {
            right.clone()
        }
    });
    Ok(Problem {
        kind: ProblemKind::Shock,
        kn: SHOCK_KN,
        disc,
        initial,
        tol: 5e-5,
        mass_correction: false,
        shock: Some(st),
    })
}

/// Lid-driven square cavity; the lid is the upper `y` face moving along `x`.
pub fn build_cavity(
    kn: f64,
    order: usize,
    n1: usize,
    n2: usize,
    reg: Option<Regularization>,
) -> Result<Problem> {
    let basis = check_common(kn, order)?;
    let grid = Grid::new_2d([n1, n2], [0.0; 2], [1.0; 2])?;
    let wall = BoundaryKind::MaxwellWall { u: [0.0; 3], theta: 1.0 };
    let lid = BoundaryKind::MaxwellWall {
        u: [cavity_lid_speed(), 0.0, 0.0],
        theta: 1.0,
    };
    let bc = BoundarySpec::new_2d([wall, wall, wall, lid]);
    let model = CollisionModel::new(CollisionKind::PowerLaw, kn, POWER_LAW_OMEGA)?;
    let reg = reg.unwrap_or(Regularization::default_for(order));
    let disc = Discretization::new(grid, basis.clone(), bc, model, reg)?;
    let initial = MomentField::uniform(grid, basis, 1.0, [0.0; 3], 1.0)?;
    Ok(Problem {
        kind: ProblemKind::Cavity,
        kn,
        disc,
        initial,
        tol: 1e-8,
        mass_correction: true,
        shock: None,
    })
}

/// Normalized shock profile row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockProfileRow {
    pub x: f64,
    pub rho: f64,
    pub u1: f64,
    pub theta: f64,
}

/// `rho_bar = (rho - rho_l)/(rho_r - rho_l)`, `u_bar = (u - u_r)/(u_l - u_r)`,
/// `theta_bar = (theta - theta_l)/(theta_r - theta_l)` for every cell.
pub fn normalize_shock_profile(field: &MomentField, st: &ShockStates) -> Vec<ShockProfileRow> {
    let (rl, ul, tl) = st.left;
    let (rr, ur, tr) = st.right;
    (0..field.len())
        .map(|i| {
            let p = &field.params[i];
            ShockProfileRow {
                x: field.grid.center(i)[0],
                rho: (field.cell(i)[0] - rl) / (rr - rl),
                u1: (p.u[0] - ur) / (ul - ur),
                theta: (p.theta - tl) / (tr - tl),
            }
        })
        .collect()
}
