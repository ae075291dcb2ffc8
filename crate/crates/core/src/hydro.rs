//! Hydrodynamic subsystem embedded in the moment system: conservation laws
//! for `(rho, rho u, rho E)` closed by frozen stress and heat flux.
//!
//! Fluxes use the same wave-speed bounds as the moment system, so the
//! conserved components of the moment residual and the hydrodynamic residual
//! coincide when both are built from the same data.

use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, SolverError};
use crate::kinetic_state::{conserved, stress_heat_unchecked};
use crate::smoothers::local_dt;
use crate::spatial::{
    bounds_from_params, wall_lambda, wall_ghost_density, BoundaryKind, Discretization,
    MomentField, Side,
};
use crate::tensor_basis::BasisParams;

pub type Vec5 = [f64; 5];

/// Conserved vector with frozen closures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroState {
    pub u: Vec5,
    pub sigma: [[f64; 3]; 3],
    pub q: [f64; 3],
}

impl HydroState {
    /// Maxwellian state: no stress, no heat flux.
    pub fn equilibrium(rho: f64, u: [f64; 3], theta: f64) -> Self {
        HydroState {
            u: to_conserved(rho, u, theta),
            sigma: [[0.0; 3]; 3],
            q: [0.0; 3],
        }
    }

    /// `(rho, u, theta)`; `theta = (2E - |u|^2) / 3`.
    pub fn primitives(&self) -> (f64, [f64; 3], f64) {
        primitives(&self.u)
    }
}

pub fn to_conserved(rho: f64, u: [f64; 3], theta: f64) -> Vec5 {
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    [rho, rho * u[0], rho * u[1], rho * u[2], 0.5 * rho * (3.0 * theta + u2)]
}

pub fn primitives(u: &Vec5) -> (f64, [f64; 3], f64) {
    let rho = u[0];
    let v = [u[1] / rho, u[2] / rho, u[3] / rho];
    let v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let theta = (2.0 * u[4] / rho - v2) / 3.0;
    (rho, v, theta)
}

/// Physical flux `F_d(U)` including the frozen closures.
pub fn physical_flux(s: &HydroState, d: usize) -> Vec5 {
    let (rho, u, theta) = s.primitives();
    let p = rho * theta;
    let ud = u[d];
    let mut f = [0.0; 5];
    f[0] = rho * ud;
    for j in 0..3 {
        f[1 + j] = rho * ud * u[j] + s.sigma[d][j] + if j == d { p } else { 0.0 };
    }
    let su: f64 = (0..3).map(|j| s.sigma[d][j] * u[j]).sum();
    f[4] = ud * (s.u[4] + p) + su + s.q[d];
    f
}

/// HLL flux between two hydrodynamic states with supplied bounds.
pub fn hydro_flux(left: &HydroState, right: &HydroState, d: usize, lam_l: f64, lam_r: f64) -> Vec5 {
    if lam_l >= 0.0 {
        return physical_flux(left, d);
    }
    if lam_r <= 0.0 {
        return physical_flux(right, d);
    }
    let fl = physical_flux(left, d);
    let fr = physical_flux(right, d);
    let inv = 1.0 / (lam_r - lam_l);
    let prod = lam_l * lam_r;
    let mut out = [0.0; 5];
    for k in 0..5 {
        out[k] = (lam_r * fl[k] - lam_l * fr[k] + prod * (right.u[k] - left.u[k])) * inv;
    }
    out
}

fn params_of(s: &HydroState) -> BasisParams {
    let (_, u, theta) = s.primitives();
    BasisParams::new(u, theta)
}

/// Hydrodynamic unknowns and frozen closures of every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroField {
    pub cells: Vec<HydroState>,
}

impl HydroField {
    /// Extracts `(U, sigma, q)` from a native moment field.
    pub fn from_moments(field: &MomentField) -> Self {
        let basis = &field.basis;
        let cells = (0..field.len())
            .map(|i| {
                let c = field.cell(i);
                let (sigma, q) = stress_heat_unchecked(basis, c);
                HydroState {
                    u: conserved(basis, c, &field.params[i]),
                    sigma,
                    q,
                }
            })
            .collect();
        HydroField { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn check_admissible(&self) -> Result<()> {
        for (i, s) in self.cells.iter().enumerate() {
            let (rho, _, theta) = s.primitives();
            if !(rho > 0.0 && theta > 0.0 && rho.is_finite() && theta.is_finite()) {
                return Err(SolverError::inadmissible(
                    i,
                    format!("hydro rho={rho}, theta={theta}"),
                ));
            }
        }
        Ok(())
    }
}

/// Exterior state across a boundary face, built from the current interior
/// state adjacent to it.
fn ghost(disc: &Discretization, interior: &HydroState, d: usize, side: Side) -> HydroState {
    match disc.bc.face(d, side) {
        BoundaryKind::MaxwellWall { u, theta } => {
            let (rho, ui, thi) = interior.primitives();
            let lam = wall_lambda(disc.c_m(), &BasisParams::new(ui, thi), theta, d, side);
            HydroState::equilibrium(wall_ghost_density(rho, ui[d], lam), u, theta)
        }
        BoundaryKind::Prescribed { rho, u, theta } => HydroState::equilibrium(rho, u, theta),
        BoundaryKind::Periodic => unreachable!("periodic faces have no ghost"),
    }
}

fn neighbor(disc: &Discretization, hf: &HydroField, i: usize, d: usize, side: Side) -> HydroState {
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
        Some(kk) => hf.cells[grid.along(d, t, kk)],
        None => ghost(disc, &hf.cells[i], d, side),
    }
}

fn cell_residual(disc: &Discretization, hf: &HydroField, i: usize, rhs: Option<&[Vec5]>) -> Vec5 {
    let c_m = disc.c_m();
    let si = &hf.cells[i];
    let pi = params_of(si);
    let mut out = [0.0; 5];
    for d in 0..disc.grid.dim() {
        let s = 1.0 / disc.grid.dx(d);
        let hi = neighbor(disc, hf, i, d, Side::Hi);
        let (l, r) = bounds_from_params(c_m, &pi, &params_of(&hi), d);
        let f = hydro_flux(si, &hi, d, l, r);
        for k in 0..5 {
            out[k] -= s * f[k];
        }
        let lo = neighbor(disc, hf, i, d, Side::Lo);
        let (l, r) = bounds_from_params(c_m, &params_of(&lo), &pi, d);
        let f = hydro_flux(&lo, si, d, l, r);
        for k in 0..5 {
            out[k] += s * f[k];
        }
    }
    if let Some(r) = rhs {
        for k in 0..5 {
            out[k] -= r[i][k];
        }
    }
    out
}

/// `R_i = -sum_d [F(U_i, U_{i+e_d}) - F(U_{i-e_d}, U_i)] / dx_d - r_i`.
pub fn hydro_residual(
    disc: &Discretization,
    hf: &HydroField,
    rhs: Option<&[Vec5]>,
) -> Result<Vec<Vec5>> {
    hf.check_admissible()?;
    Ok((0..hf.len())
        .into_par_iter()
        .map(|i| cell_residual(disc, hf, i, rhs))
        .collect())
}

fn hydro_dt(disc: &Discretization, s: &HydroState, cfl: f64) -> f64 {
    local_dt(disc, &params_of(s), cfl)
}

/// Forward Euler step with the global CFL step of the hydro state.
pub fn hydro_euler_step(
    disc: &Discretization,
    hf: &HydroField,
    rhs: Option<&[Vec5]>,
    cfl: f64,
) -> Result<HydroField> {
    let r = hydro_residual(disc, hf, rhs)?;
    let dt = hf
        .cells
        .iter()
        .map(|s| hydro_dt(disc, s, cfl))
        .fold(f64::INFINITY, f64::min);
    let mut out = hf.clone();
    for (s, ri) in out.cells.iter_mut().zip(&r) {
        for k in 0..5 {
            s.u[k] += dt * ri[k];
        }
    }
    out.check_admissible()?;
    Ok(out)
}

/// Symmetric Gauss-Seidel sweep: forward then backward in storage order,
/// local time steps, latest neighbour values.
pub fn hydro_sgs_sweep(
    disc: &Discretization,
    hf: &mut HydroField,
    rhs: Option<&[Vec5]>,
    cfl: f64,
) -> Result<()> {
    hf.check_admissible()?;
    let n = hf.len();
    for backward in [false, true] {
        for k in 0..n {
            let i = if backward { n - 1 - k } else { k };
            let r = cell_residual(disc, hf, i, rhs);
            let dt = hydro_dt(disc, &hf.cells[i], cfl);
            let s = &mut hf.cells[i];
            for c in 0..5 {
                s.u[c] += dt * r[c];
            }
            let (rho, _, theta) = s.primitives();
            if !(rho > 0.0 && theta > 0.0) {
                return Err(SolverError::inadmissible(
                    i,
                    format!("hydro rho={rho}, theta={theta}"),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HydroScheme {
    Euler,
    Sgs,
}

impl FromStr for HydroScheme {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "euler" => Ok(HydroScheme::Euler),
            "sgs" => Ok(HydroScheme::Sgs),
            other => Err(SolverError::InvalidParameter(format!(
                "unknown hydro scheme `{other}`"
            ))),
        }
    }
}

/// Discrete L1 distance of two hydro fields: the plain sum of `|U - U'|`
/// over cells and components.
pub fn hydro_diff(a: &HydroField, b: &HydroField) -> f64 {
    a.cells
        .iter()
        .zip(&b.cells)
        .map(|(x, y)| (0..5).map(|k| (x.u[k] - y.u[k]).abs()).sum::<f64>())
        .sum::<f64>()
}

/// Iterates the hydro scheme until `gamma2` steps are taken or the L1 norm of
/// the update drops below `tol`. Returns the final state and step count.
pub fn hydro_inner_solve(
    disc: &Discretization,
    u0: &HydroField,
    rhs: Option<&[Vec5]>,
    gamma2: usize,
    tol: f64,
    scheme: HydroScheme,
    cfl: f64,
) -> Result<(HydroField, usize)> {
    let mut cur = u0.clone();
    for m in 1..=gamma2 {
        let next = match scheme {
            HydroScheme::Euler => hydro_euler_step(disc, &cur, rhs, cfl)?,
            HydroScheme::Sgs => {
                let mut n = cur.clone();
                hydro_sgs_sweep(disc, &mut n, rhs, cfl)?;
                n
            }
        };
        let diff = hydro_diff(&next, &cur);
        cur = next;
        if diff < tol {
            return Ok((cur, m));
        }
    }
    Ok((cur, gamma2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::{CollisionKind, CollisionModel};
    use crate::spatial::{BoundarySpec, Grid, Regularization};
    use crate::tensor_basis::HermiteBasis;

    fn wall_disc(n: usize) -> Discretization {
        let grid = Grid::new_1d(n, 0.0, 1.0).unwrap();
        let lo = BoundaryKind::MaxwellWall { u: [0.0, -0.2, 0.0], theta: 1.0 };
        let hi = BoundaryKind::MaxwellWall { u: [0.0, 0.2, 0.0], theta: 1.0 };
        let model = CollisionModel::new(CollisionKind::PowerLaw, 0.1, 0.81).unwrap();
        Discretization::new(
            grid,
            HermiteBasis::new(3).unwrap(),
            BoundarySpec::new_1d(lo, hi),
            model,
            Regularization::Off,
        )
        .unwrap()
    }

    #[test]
    fn consistent_and_dissipative_flux() {
        let s = HydroState::equilibrium(1.2, [0.1, 0.2, 0.0], 0.9);
        assert_eq!(hydro_flux(&s, &s, 0, -2.0, 2.0), physical_flux(&s, 0));

        let l = HydroState::equilibrium(1.0, [0.0; 3], 1.0);
        let r = HydroState::equilibrium(0.5, [0.0; 3], 1.0);
        let f = hydro_flux(&l, &r, 0, -2.0, 2.0);
        // pressure average plus lambda_L lambda_R (U_r - U_l)/(lambda_R - lambda_L)
        let dissip = -4.0 * (0.5 - 1.0) / 4.0;
        assert!((f[0] - dissip).abs() < 1e-15);
        assert!((f[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn uniform_rest_state_is_steady() {
        let disc = wall_disc(8);
        let mut disc = disc;
        disc.bc = BoundarySpec::new_1d(
            BoundaryKind::MaxwellWall { u: [0.0; 3], theta: 1.0 },
            BoundaryKind::MaxwellWall { u: [0.0; 3], theta: 1.0 },
        );
        let hf = HydroField {
            cells: vec![HydroState::equilibrium(1.0, [0.0; 3], 1.0); 8],
        };
        let r = hydro_residual(&disc, &hf, None).unwrap();
        assert!(r.iter().flatten().all(|x| x.abs() < 1e-14));
        let (out, m) = hydro_inner_solve(&disc, &hf, None, 10, 1e-12, HydroScheme::Sgs, 0.8).unwrap();
        assert_eq!(m, 1);
        assert_eq!(out, hf);
        let (out, m) = hydro_inner_solve(&disc, &hf, None, 0, 1e-12, HydroScheme::Euler, 0.8).unwrap();
        assert_eq!(m, 0);
        assert_eq!(out, hf);
    }

    #[test]
    fn euler_and_sgs_share_the_steady_state() {
        let disc = wall_disc(16);
        let init = HydroField {
            cells: vec![HydroState::equilibrium(1.0, [0.0; 3], 1.0); 16],
        };
        let mass = |h: &HydroField| h.cells.iter().map(|s| s.u[0]).sum::<f64>();
        let (a, _) = hydro_inner_solve(&disc, &init, None, 200_000, 1e-15, HydroScheme::Euler, 0.8).unwrap();
        assert!((mass(&a) - 16.0).abs() < 1e-10);
        let mut b = init.clone();
        for _ in 0..20_000 {
            hydro_sgs_sweep(&disc, &mut b, None, 0.8).unwrap();
            let k = 16.0 / mass(&b);
            for s in &mut b.cells {
                s.u.iter_mut().for_each(|x| *x *= k);
            }
        }
        for (x, y) in a.cells.iter().zip(&b.cells) {
            for k in 0..5 {
                assert!((x.u[k] - y.u[k]).abs() < 1e-10, "{x:?} {y:?}");
            }
        }
    }

    #[test]
    fn conserved_moment_residual_matches_hydro_residual() {
        use crate::kinetic_state::{enforce_native, maxwellian_state};
        use crate::spatial::moment_residual;
        let basis = HermiteBasis::new(4).unwrap();
        for dim in [1, 2] {
            let grid = if dim == 1 {
                Grid::new_1d(7, 0.0, 1.0).unwrap()
            } else {
                Grid::new_2d([4, 5], [0.0; 2], [1.0; 2]).unwrap()
            };
            let b = basis.clone();
            let field = MomentField::from_fn(grid, basis.clone(), |i| {
                let x = i as f64;
                let mut s = maxwellian_state(
                    &b,
                    1.0 + 0.2 * (0.7 * x).sin(),
                    [0.1 * (0.3 * x).cos(), 0.2 * (1.1 * x).sin(), 0.05],
                    1.0 + 0.1 * (0.5 * x).cos(),
                )
                .unwrap();
                for p in 4..s.coeffs.len() {
                    s.coeffs[p] = 0.01 * ((p as f64) * 0.37 + x).sin();
                }
                enforce_native(&b, &mut s.coeffs);
                s
            });
            let wall = BoundaryKind::MaxwellWall { u: [0.0, 0.0, 0.3], theta: 1.1 };
            let inflow = BoundaryKind::Prescribed { rho: 1.1, u: [0.2, 0.1, 0.0], theta: 0.9 };
            let bc = BoundarySpec::new_2d([inflow, wall, wall, wall]);
            let model = CollisionModel::new(CollisionKind::PowerLaw, 0.05, 0.81).unwrap();
            let disc = Discretization::new(grid, basis.clone(), bc, model, Regularization::Hme).unwrap();
            let r = moment_residual(&disc, &field, None).unwrap();
            let hf = HydroField::from_moments(&field);
            let rh = hydro_residual(&disc, &hf, None).unwrap();
            for i in 0..field.len() {
                let c = conserved(&basis, r.cell(i), &field.params[i]);
                for k in 0..5 {
                    assert!((c[k] - rh[i][k]).abs() < 1e-10, "cell {i} comp {k}: {} vs {}", c[k], rh[i][k]);
                }
            }
        }
    }
}
