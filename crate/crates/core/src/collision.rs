//! BGK relaxation in coefficient space and the collision-frequency models.

use crate::error::{Result, SolverError};
use crate::kinetic_state::MomentState;
use crate::tensor_basis::HermiteBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollisionKind {
    /// `nu = sqrt(pi/2) rho theta^(1-omega) / Kn`
    PowerLaw,
    /// Variable hard sphere:
    /// `nu = sqrt(2/pi) (5 - 2 omega)(7 - 2 omega) rho theta^(1-omega) / (15 Kn)`
    Vhs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionModel {
    pub kind: CollisionKind,
    pub kn: f64,
    pub omega: f64,
}

impl CollisionModel {
    pub fn new(kind: CollisionKind, kn: f64, omega: f64) -> Result<Self> {
        if !(kn > 0.0) {
            return Err(SolverError::InvalidParameter(format!("Kn must be positive, got {kn}")));
        }
        if !(omega > 0.0 && omega <= 1.0) {
            return Err(SolverError::InvalidParameter(format!(
                "viscosity index must lie in (0, 1], got {omega}"
            )));
        }
        Ok(CollisionModel { kind, kn, omega })
    }

    pub fn frequency(&self, rho: f64, theta: f64) -> f64 {
        collision_frequency(self, rho, theta)
    }
}

pub fn collision_frequency(m: &CollisionModel, rho: f64, theta: f64) -> f64 {
    use std::f64::consts::PI;
    let base = rho * theta.powf(1.0 - m.omega) / m.kn;
    match m.kind {
        CollisionKind::PowerLaw => (PI / 2.0).sqrt() * base,
        CollisionKind::Vhs => {
            (2.0 / PI).sqrt() * (5.0 - 2.0 * m.omega) * (7.0 - 2.0 * m.omega) / 15.0 * base
        }
    }
}

/// BGK rate of a native state: `-nu f_a` for `|a| >= 2`, zero below.
pub fn bgk_rate(basis: &HermiteBasis, s: &MomentState, nu: f64) -> Result<Vec<f64>> {
    if !s.is_native(basis) {
        return Err(SolverError::NotNative);
    }
    let mut out = vec![0.0; basis.len()];
    add_bgk_rate(basis, &s.coeffs, nu, &mut out);
    Ok(out)
}

/// Accumulates the BGK rate into `acc`.
pub(crate) fn add_bgk_rate(basis: &HermiteBasis, c: &[f64], nu: f64, acc: &mut [f64]) {
    let start = if basis.order() < 2 { c.len() } else { 4 };
    for p in start..c.len() {
        acc[p] -= nu * c[p];
    }
}
