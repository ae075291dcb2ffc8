use std::sync::Arc;

use crate::error::{Result, SolverError};
use crate::kinetic_state::{maxwellian_state, MomentState};
use crate::tensor_basis::{BasisParams, HermiteBasis};

use super::Grid;

/// Per-cell moment states over a grid, stored as one flat coefficient array.
#[derive(Debug, Clone)]
pub struct MomentField {
    pub grid: Grid,
    pub basis: Arc<HermiteBasis>,
    pub params: Vec<BasisParams>,
    pub coeffs: Vec<f64>,
}

impl MomentField {
    /// Every cell set to the same Maxwellian.
    pub fn uniform(
        grid: Grid,
        basis: Arc<HermiteBasis>,
        rho: f64,
        u: [f64; 3],
        theta: f64,
    ) -> Result<Self> {
        let s = maxwellian_state(&basis, rho, u, theta)?;
        Ok(Self::from_fn(grid, basis, |_| s.clone()))
    }

    pub fn from_fn(
        grid: Grid,
        basis: Arc<HermiteBasis>,
        mut f: impl FnMut(usize) -> MomentState,
    ) -> Self {
        let n = grid.cell_count();
        let len = basis.len();
        let mut params = Vec::with_capacity(n);
        let mut coeffs = Vec::with_capacity(n * len);
        for i in 0..n {
            let s = f(i);
            assert_eq!(s.coeffs.len(), len, "state length does not match basis");
            params.push(s.params);
            coeffs.extend_from_slice(&s.coeffs);
        }
        MomentField {
            grid,
            basis,
            params,
            coeffs,
        }
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Coefficients per cell.
    pub fn stride(&self) -> usize {
        self.basis.len()
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        let l = self.stride();
        &self.coeffs[i * l..(i + 1) * l]
    }

    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        let l = self.stride();
        &mut self.coeffs[i * l..(i + 1) * l]
    }

    pub fn state(&self, i: usize) -> MomentState {
        MomentState {
            params: self.params[i],
            coeffs: self.cell(i).to_vec(),
        }
    }

    pub fn set_state(&mut self, i: usize, s: &MomentState) {
        self.params[i] = s.params;
        self.cell_mut(i).copy_from_slice(&s.coeffs);
    }

    /// `sum_i rho_i vol_i`.
    pub fn total_mass(&self) -> f64 {
        let l = self.stride();
        self.coeffs.iter().step_by(l).sum::<f64>() * self.grid.cell_volume()
    }

    /// Checks that every cell has positive, finite density and temperature.
    pub fn check_admissible(&self) -> Result<()> {
        for (i, p) in self.params.iter().enumerate() {
            let rho = self.cell(i)[0];
            if !(rho > 0.0 && rho.is_finite() && p.theta > 0.0 && p.theta.is_finite()) {
                return Err(SolverError::inadmissible(
                    i,
                    format!("rho={rho}, theta={}", p.theta),
                ));
            }
        }
        Ok(())
    }
}

/// Per-cell coefficient arrays attached to their own basis parameters, used
/// for source terms and residuals that must survive a change of the cell basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CellArrays {
    pub params: Vec<BasisParams>,
    pub coeffs: Vec<f64>,
    pub stride: usize,
}

impl CellArrays {
    pub fn zeros_like(field: &MomentField) -> Self {
        CellArrays {
            params: field.params.clone(),
            coeffs: vec![0.0; field.coeffs.len()],
            stride: field.stride(),
        }
    }

    pub fn cell(&self, i: usize) -> &[f64] {
        &self.coeffs[i * self.stride..(i + 1) * self.stride]
    }

    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coeffs[i * self.stride..(i + 1) * self.stride]
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}
