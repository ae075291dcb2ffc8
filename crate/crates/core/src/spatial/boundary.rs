use crate::error::{Result, SolverError};
use crate::kinetic_state::MomentState;
use crate::tensor_basis::{BasisParams, HermiteBasis};

use super::flux::bounds_from_params;
use super::{Grid, MomentField};

/// Boundary condition on one face of the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    /// Fully diffuse wall at velocity `u` and temperature `theta`.
    MaxwellWall { u: [f64; 3], theta: f64 },
    /// Fixed Maxwellian exterior state.
    Prescribed { rho: f64, u: [f64; 3], theta: f64 },
    Periodic,
}

/// Lower or upper end of a direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lo = 0,
    Hi = 1,
}

/// Boundary kinds for the faces `[x_lo, x_hi, y_lo, y_hi]`; the last two are
/// ignored on 1D grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub faces: [BoundaryKind; 4],
}

impl BoundarySpec {
    pub fn new_1d(lo: BoundaryKind, hi: BoundaryKind) -> Self {
        BoundarySpec {
            faces: [lo, hi, BoundaryKind::Periodic, BoundaryKind::Periodic],
        }
    }

    pub fn new_2d(faces: [BoundaryKind; 4]) -> Self {
        BoundarySpec { faces }
    }

    pub fn face(&self, d: usize, side: Side) -> BoundaryKind {
        self.faces[2 * d + side as usize]
    }

    pub fn is_periodic(&self, d: usize) -> bool {
        matches!(self.faces[2 * d], BoundaryKind::Periodic)
    }

    /// True when no face lets mass in or out.
    pub fn is_closed(&self, dim: usize) -> bool {
        (0..2 * dim).all(|f| !matches!(self.faces[f], BoundaryKind::Prescribed { .. }))
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        for d in 0..dim {
            let lo = self.face(d, Side::Lo);
            let hi = self.face(d, Side::Hi);
            if matches!(lo, BoundaryKind::Periodic) != matches!(hi, BoundaryKind::Periodic) {
                return Err(SolverError::InvalidParameter(format!(
                    "direction {d}: periodic faces must come in pairs"
                )));
            }
            for kind in [lo, hi] {
                match kind {
                    BoundaryKind::MaxwellWall { u, theta } => {
                        if !(theta > 0.0) {
                            return Err(SolverError::InvalidParameter(
                                "wall temperature must be positive".into(),
                            ));
                        }
                        if u[d] != 0.0 {
                            return Err(SolverError::InvalidParameter(
                                "wall velocity must be tangential".into(),
                            ));
                        }
                    }
                    BoundaryKind::Prescribed { rho, theta, .. } => {
                        if !(rho > 0.0 && theta > 0.0) {
                            return Err(SolverError::InvalidParameter(
                                "prescribed state needs rho > 0 and theta > 0".into(),
                            ));
                        }
                    }
                    BoundaryKind::Periodic => {}
                }
            }
        }
        Ok(())
    }
}

/// Ghost Maxwellians per boundary face, indexed by the transverse coordinate.
/// Periodic faces carry no ghosts.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostLayer {
    pub faces: [Vec<MomentState>; 4],
}

impl GhostLayer {
    pub fn get(&self, d: usize, side: Side, t: usize) -> &MomentState {
        &self.faces[2 * d + side as usize][t]
    }
}

/// Density of a wall ghost that makes the HLL mass flux through the wall
/// vanish, given the interior density and normal velocity and the wave-speed
/// bound on the ghost side.
///
/// For a ghost on the upper side `rho_g = rho (1 - u_n / lambda_L)`, on the
/// lower side `rho_g = rho (1 - u_n / lambda_R)`.
pub fn wall_ghost_density(rho: f64, u_n: f64, lambda: f64) -> f64 {
    rho * (1.0 - u_n / lambda)
}

/// Wave-speed bound entering [`wall_ghost_density`] for a wall on `side`.
pub(crate) fn wall_lambda(
    c_m: f64,
    interior: &BasisParams,
    wall_theta: f64,
    d: usize,
    side: Side,
) -> f64 {
    let wall = BasisParams::new([0.0; 3], wall_theta);
    match side {
        Side::Hi => bounds_from_params(c_m, interior, &wall, d).0,
        Side::Lo => bounds_from_params(c_m, &wall, interior, d).1,
    }
}

fn wall_ghost(
    basis: &HermiteBasis,
    interior_rho: f64,
    interior: &BasisParams,
    u: [f64; 3],
    theta: f64,
    d: usize,
    side: Side,
) -> MomentState {
    let lambda = wall_lambda(basis.c_m(), interior, theta, d, side);
    let rho = wall_ghost_density(interior_rho, interior.u[d], lambda);
    maxwellian(basis, rho, u, theta)
}

fn maxwellian(basis: &HermiteBasis, rho: f64, u: [f64; 3], theta: f64) -> MomentState {
    let mut coeffs = vec![0.0; basis.len()];
    coeffs[0] = rho;
    MomentState {
        params: BasisParams::new(u, theta),
        coeffs,
    }
}

/// Builds the ghost layer of `field` for boundary spec `bc`.
pub fn ghost_states(field: &MomentField, bc: &BoundarySpec) -> GhostLayer {
    let grid = &field.grid;
    let basis = &field.basis;
    let mut faces: [Vec<MomentState>; 4] = Default::default();
    for d in 0..grid.dim() {
        for side in [Side::Lo, Side::Hi] {
            let kind = bc.face(d, side);
            let out = &mut faces[2 * d + side as usize];
            if matches!(kind, BoundaryKind::Periodic) {
                continue;
            }
            for t in 0..grid.face_len(d) {
                let cell = boundary_cell(grid, d, side, t);
                out.push(match kind {
                    BoundaryKind::MaxwellWall { u, theta } => wall_ghost(
                        basis,
                        field.cell(cell)[0],
                        &field.params[cell],
                        u,
                        theta,
                        d,
                        side,
                    ),
                    BoundaryKind::Prescribed { rho, u, theta } => maxwellian(basis, rho, u, theta),
                    BoundaryKind::Periodic => unreachable!(),
                });
            }
        }
    }
    GhostLayer { faces }
}

/// Interior cell adjacent to boundary face `(d, side)` on transverse line `t`.
pub fn boundary_cell(grid: &Grid, d: usize, side: Side, t: usize) -> usize {
    let k = match side {
        Side::Lo => 0,
        Side::Hi => grid.n(d) - 1,
    };
    grid.along(d, t, k)
}
