//! Per-cell truncated distributions and their macroscopic content.

use crate::error::{Result, SolverError};
use crate::tensor_basis::{BasisParams, HermiteBasis};

/// Truncated Grad expansion: basis parameters plus coefficients `f_a`.
///
/// A state is *native* when its basis parameters are its own mean velocity
/// and temperature, i.e. `f_{e_d} = 0` and `sum_d f_{2e_d} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentState {
    pub params: BasisParams,
    pub coeffs: Vec<f64>,
}

/// Macroscopic quantities of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroQuantities {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
    pub sigma: [[f64; 3]; 3],
    pub q: [f64; 3],
    pub energy: f64,
    pub pressure: f64,
}

const NATIVE_TOL: f64 = 1e-10;

/// Native Maxwellian: `f_0 = rho`, every other coefficient zero.
pub fn maxwellian_state(basis: &HermiteBasis, rho: f64, u: [f64; 3], theta: f64) -> Result<MomentState> {
    if !(rho > 0.0) || !(theta > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "Maxwellian needs rho > 0 and theta > 0, got rho={rho}, theta={theta}"
        )));
    }
    let mut coeffs = vec![0.0; basis.len()];
    coeffs[0] = rho;
    Ok(MomentState {
        params: BasisParams::new(u, theta),
        coeffs,
    })
}

impl MomentState {
    pub fn rho(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn u(&self) -> [f64; 3] {
        self.params.u
    }

    pub fn theta(&self) -> f64 {
        self.params.theta
    }

    pub fn is_native(&self, basis: &HermiteBasis) -> bool {
        if basis.order() == 0 {
            return true;
        }
        let scale = self.coeffs[0].abs().max(1e-300);
        let e_ok = (0..3).all(|d| self.coeffs[1 + d].abs() <= NATIVE_TOL * scale);
        let trace_ok = basis.order() < 2 || trace2(basis, &self.coeffs).abs() <= NATIVE_TOL * scale;
        e_ok && trace_ok
    }
}

fn trace2(basis: &HermiteBasis, c: &[f64]) -> f64 {
    (0..3)
        .map(|d| basis.index_set().double_unit(d).map_or(0.0, |p| c[p]))
        .sum()
}

/// Density, mean velocity and temperature of the represented function,
/// valid for any basis parameters.
pub fn primary_moments(basis: &HermiteBasis, s: &MomentState) -> Result<(f64, [f64; 3], f64)> {
    moments_of(basis, &s.coeffs, &s.params).and_then(|(rho, u, theta)| {
        if rho > 0.0 && theta > 0.0 && theta.is_finite() {
            Ok((rho, u, theta))
        } else {
            Err(SolverError::inadmissible(
                0,
                format!("rho={rho}, theta={theta}"),
            ))
        }
    })
}

/// Unchecked primary moments of coefficients in basis `params`.
pub(crate) fn moments_of(
    basis: &HermiteBasis,
    c: &[f64],
    params: &BasisParams,
) -> Result<(f64, [f64; 3], f64)> {
    let rho = c[0];
    if !(rho > 0.0) {
        return Err(SolverError::inadmissible(0, format!("rho={rho}")));
    }
    let m = basis.order();
    let mut u = params.u;
    let mut du2 = 0.0;
    if m >= 1 {
        for d in 0..3 {
            let du = c[1 + d] / rho;
            u[d] += du;
            du2 += du * du;
        }
    }
    let tr = if m >= 2 { trace2(basis, c) } else { 0.0 };
    let theta = params.theta + (2.0 / 3.0) * tr / rho - du2 / 3.0;
    Ok((rho, u, theta))
}

/// Conserved densities `(rho, rho u, rho E)` of coefficients in basis `params`,
/// with `E = (3 theta + |u|^2) / 2`.
pub fn conserved(basis: &HermiteBasis, c: &[f64], params: &BasisParams) -> [f64; 5] {
    let m = basis.order();
    let f0 = c[0];
    let fe = if m >= 1 { [c[1], c[2], c[3]] } else { [0.0; 3] };
    let tr = if m >= 2 { trace2(basis, c) } else { 0.0 };
    let u = params.u;
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let ufe = u[0] * fe[0] + u[1] * fe[1] + u[2] * fe[2];
    [
        f0,
        u[0] * f0 + fe[0],
        u[1] * f0 + fe[1],
        u[2] * f0 + fe[2],
        0.5 * (3.0 * params.theta * f0 + 2.0 * tr + u2 * f0 + 2.0 * ufe),
    ]
}

/// Stress tensor and heat flux of a native state.
pub fn stress_heat(basis: &HermiteBasis, s: &MomentState) -> Result<([[f64; 3]; 3], [f64; 3])> {
    if !s.is_native(basis) {
        return Err(SolverError::NotNative);
    }
    Ok(stress_heat_unchecked(basis, &s.coeffs))
}

pub(crate) fn stress_heat_unchecked(basis: &HermiteBasis, c: &[f64]) -> ([[f64; 3]; 3], [f64; 3]) {
    let mut sigma = [[0.0; 3]; 3];
    let mut q = [0.0; 3];
    let coeff = |a: [usize; 3]| basis.position(a).map_or(0.0, |p| c[p]);
    if basis.order() >= 2 {
        for i in 0..3 {
            for j in 0..3 {
                let mut a = [0; 3];
                a[i] += 1;
                a[j] += 1;
                sigma[i][j] = if i == j { 2.0 } else { 1.0 } * coeff(a);
            }
        }
    }
    if basis.order() >= 3 {
        for i in 0..3 {
            let mut a = [0; 3];
            a[i] = 3;
            let mut v = 2.0 * coeff(a);
            for d in 0..3 {
                let mut b = [0; 3];
                b[d] += 2;
                b[i] += 1;
                v += coeff(b);
            }
            q[i] = v;
        }
    }
    (sigma, q)
}

/// Full macroscopic summary of a native state.
pub fn macro_quantities(basis: &HermiteBasis, s: &MomentState) -> Result<MacroQuantities> {
    let (sigma, q) = stress_heat(basis, s)?;
    let rho = s.rho();
    let u = s.u();
    let theta = s.theta();
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    Ok(MacroQuantities {
        rho,
        u,
        theta,
        sigma,
        q,
        energy: 0.5 * (3.0 * theta + u2),
        pressure: rho * theta,
    })
}

/// Re-expresses `s` in its own native basis.
pub fn renormalize(basis: &HermiteBasis, s: &MomentState) -> Result<MomentState> {
    let mut out = s.clone();
    let mut scratch = vec![0.0; basis.len()];
    let mut tmp = vec![0.0; basis.len()];
    renormalize_in_place(basis, &mut out, &mut tmp, &mut scratch)?;
    Ok(out)
}

/// In-place renormalization; `tmp` and `scratch` are caller-owned buffers of
/// basis length.
pub fn renormalize_in_place(
    basis: &HermiteBasis,
    s: &mut MomentState,
    tmp: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    renormalize_slice(basis, &mut s.params, &mut s.coeffs, tmp, scratch)
}

/// Renormalizes a coefficient slice and its basis parameters together.
pub(crate) fn renormalize_slice(
    basis: &HermiteBasis,
    params: &mut BasisParams,
    c: &mut [f64],
    tmp: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let (rho, u, theta) = moments_of(basis, c, params)?;
    if !(theta > 0.0 && theta.is_finite() && rho.is_finite()) {
        return Err(SolverError::inadmissible(0, format!("rho={rho}, theta={theta}")));
    }
    let target = BasisParams::new(u, theta);
    basis.project_into(c, params, &target, tmp, scratch);
    c.copy_from_slice(tmp);
    *params = target;
    enforce_native(basis, c);
    Ok(())
}

/// Clears the `f_{e_d}` slots and the trace of the `f_{2e_d}` block.
pub(crate) fn enforce_native(basis: &HermiteBasis, c: &mut [f64]) {
    let m = basis.order();
    if m >= 1 {
        c[1] = 0.0;
        c[2] = 0.0;
        c[3] = 0.0;
    }
    if m >= 2 {
        let set = basis.index_set();
        let tr = trace2(basis, c) / 3.0;
        for d in 0..3 {
            let p = set.double_unit(d).unwrap();
            c[p] -= tr;
        }
    }
}
