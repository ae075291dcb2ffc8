//! Finite-volume discretization of the moment system on Cartesian grids:
//! HLL interface fluxes, boundary ghosts and residual assembly.

mod boundary;
mod field;
mod flux;
mod grid;
mod residual;

use std::sync::Arc;

pub use boundary::{
    boundary_cell, ghost_states, wall_ghost_density, BoundaryKind, BoundarySpec, GhostLayer, Side,
};
pub(crate) use boundary::wall_lambda;
pub use field::{CellArrays, MomentField};
pub use flux::{
    hll_flux_moment, regularization_flux, wave_speed_bounds, FluxScratch, RegTable,
    Regularization, RegularizationFlux,
};
pub(crate) use flux::bounds_from_params;
pub use grid::Grid;
pub use residual::{l1_norm, moment_residual, residual_with_ghosts, CellScratch, Terms};
pub(crate) use residual::cell_residual;

use crate::collision::CollisionModel;
use crate::error::Result;
use crate::tensor_basis::HermiteBasis;

/// Everything that defines the discrete operator apart from the unknown.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub grid: Grid,
    pub basis: Arc<HermiteBasis>,
    pub bc: BoundarySpec,
    pub collision: CollisionModel,
    pub regularization: Regularization,
    reg: Option<RegTable>,
}

impl Discretization {
    pub fn new(
        grid: Grid,
        basis: Arc<HermiteBasis>,
        bc: BoundarySpec,
        collision: CollisionModel,
        regularization: Regularization,
    ) -> Result<Self> {
        bc.validate(grid.dim())?;
        let reg = match regularization {
            Regularization::Off => None,
            Regularization::Hme => Some(RegTable::new(&basis)?),
        };
        Ok(Discretization {
            grid,
            basis,
            bc,
            collision,
            regularization,
            reg,
        })
    }

    /// Same operator on another grid of the same domain.
    pub fn with_grid(&self, grid: Grid) -> Self {
        Discretization {
            grid,
            ..self.clone()
        }
    }

    /// Largest characteristic speed constant `c_M` of the basis.
    pub fn c_m(&self) -> f64 {
        self.basis.c_m()
    }
}
