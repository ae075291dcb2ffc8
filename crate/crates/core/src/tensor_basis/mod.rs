//! Hermite machinery for the Grad expansion.
//!
//! A truncated distribution is stored as coefficients `f_a` over the basis
//! functions `H_a^[u, theta]`. In the reduced velocity `v = (xi - u)/sqrt(theta)`
//! a basis function reads `theta^(-|a|/2) He_a(v) phi(v)`, with `phi` the
//! standard normal density. Under this scaling the coefficients carry physical
//! units: `f_0` is the density and `f_{e_d}` a momentum offset.
//!
//! Re-expansion between two parameter sets is a convolution along each
//! velocity direction. For the 1D transfer `(u, theta) -> (u', theta')`
//!
//! ```text
//! b_n = sum_{k <= n} tau_{n-k} a_k,   sum_p tau_p z^p = exp(du z + dtheta z^2 / 2)
//! ```
//!
//! with `du = u - u'` and `dtheta = theta - theta'`. The transfer is lower
//! triangular in degree, so truncation at order `M` commutes with it and all
//! velocity moments of order `<= M` are preserved exactly.

mod hermite;
mod index;

use std::sync::Arc;

pub use hermite::{
    hermite_eval, max_hermite_root, GaussHermite, HermiteRootTable, MAX_TABLE_DEGREE,
};
pub use index::{MultiIndex, MultiIndexSet};

use crate::error::{Result, SolverError};

const NONE: u32 = u32::MAX;

/// Basis parameters `(u, theta)` of an expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    pub u: [f64; 3],
    pub theta: f64,
}

impl BasisParams {
    pub fn new(u: [f64; 3], theta: f64) -> Self {
        BasisParams { u, theta }
    }
}

/// Index set of order `M` plus the neighbour tables and wave-speed constant
/// shared by every state of that order.
#[derive(Debug)]
pub struct HermiteBasis {
    set: MultiIndexSet,
    c_m: f64,
    down: [Vec<u32>; 3],
    up: [Vec<u32>; 3],
    degree: Vec<u8>,
}

impl HermiteBasis {
    pub fn new(order: usize) -> Result<Arc<Self>> {
        if order > 40 {
            return Err(SolverError::InvalidParameter(format!(
                "expansion order {order} is too large"
            )));
        }
        let set = MultiIndexSet::new(order);
        let n = set.len();
        let mut down: [Vec<u32>; 3] = Default::default();
        let mut up: [Vec<u32>; 3] = Default::default();
        for d in 0..3 {
            down[d] = vec![NONE; n];
            up[d] = vec![NONE; n];
            for (p, a) in set.indices().iter().enumerate() {
                if a[d] > 0 {
                    let mut b = *a;
                    b[d] -= 1;
                    down[d][p] = set.position(b).unwrap() as u32;
                }
                let mut b = *a;
                b[d] += 1;
                if let Some(q) = set.position(b) {
                    up[d][p] = q as u32;
                }
            }
        }
        let degree = (0..n).map(|p| set.degree(p) as u8).collect();
        let c_m = max_hermite_root(order + 1)?;
        Ok(Arc::new(HermiteBasis {
            set,
            c_m,
            down,
            up,
            degree,
        }))
    }

    pub fn order(&self) -> usize {
        self.set.order()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn index_set(&self) -> &MultiIndexSet {
        &self.set
    }

    /// Largest root of `He_{M+1}`, the characteristic speed bound of the system.
    pub fn c_m(&self) -> f64 {
        self.c_m
    }

    pub fn degree(&self, pos: usize) -> usize {
        self.degree[pos] as usize
    }

    pub fn multi_index(&self, pos: usize) -> MultiIndex {
        self.set.get(pos)
    }

    pub fn position(&self, a: MultiIndex) -> Option<usize> {
        self.set.position(a)
    }

    /// Position of `a - e_d`, if it exists.
    pub fn lower(&self, d: usize, pos: usize) -> Option<usize> {
        let q = self.down[d][pos];
        (q != NONE).then_some(q as usize)
    }

    /// Position of `a + e_d`, if it is within the truncation.
    pub fn raise(&self, d: usize, pos: usize) -> Option<usize> {
        let q = self.up[d][pos];
        (q != NONE).then_some(q as usize)
    }

    /// Re-expands `src` from basis `from` into basis `to`, writing `dst`.
    ///
    /// `scratch` must have the same length as the coefficient arrays.
    pub fn project_into(
        &self,
        src: &[f64],
        from: &BasisParams,
        to: &BasisParams,
        dst: &mut [f64],
        scratch: &mut [f64],
    ) {
        debug_assert_eq!(src.len(), self.len());
        if from == to {
            dst.copy_from_slice(src);
            return;
        }
        let m = self.order();
        let dtheta = from.theta - to.theta;
        let mut tau = [[0.0f64; 48]; 3];
        for (d, t) in tau.iter_mut().enumerate() {
            shift_kernel(from.u[d] - to.u[d], dtheta, &mut t[..=m]);
        }
        self.convolve(0, &tau[0][..=m], src, dst);
        self.convolve(1, &tau[1][..=m], dst, scratch);
        self.convolve(2, &tau[2][..=m], scratch, dst);
    }

    fn convolve(&self, d: usize, tau: &[f64], src: &[f64], dst: &mut [f64]) {
        let down = &self.down[d];
        for (p, out) in dst.iter_mut().enumerate() {
            let mut acc = tau[0] * src[p];
            let mut q = down[p];
            let mut k = 1;
            while q != NONE {
                acc += tau[k] * src[q as usize];
                q = down[q as usize];
                k += 1;
            }
            *out = acc;
        }
    }

    /// Multiplies the expansion by `xi_d`, truncating at order `M`:
    /// `xi_d H_a = theta H_{a+e_d} + u_d H_a + a_d H_{a-e_d}`.
    pub fn mul_xi_into(&self, d: usize, src: &[f64], params: &BasisParams, dst: &mut [f64]) {
        let ud = params.u[d];
        let theta = params.theta;
        let down = &self.down[d];
        let up = &self.up[d];
        let set = &self.set;
        for p in 0..dst.len() {
            let mut v = ud * src[p];
            if down[p] != NONE {
                v += theta * src[down[p] as usize];
            }
            if up[p] != NONE {
                v += (set.get(p)[d] + 1) as f64 * src[up[p] as usize];
            }
            dst[p] = v;
        }
    }
}

/// Taylor coefficients of `exp(du z + dtheta z^2 / 2)`.
fn shift_kernel(du: f64, dtheta: f64, tau: &mut [f64]) {
    tau[0] = 1.0;
    if tau.len() > 1 {
        tau[1] = du;
    }
    for p in 2..tau.len() {
        tau[p] = (du * tau[p - 1] + dtheta * tau[p - 2]) / p as f64;
    }
}

/// Re-expands `coeffs` given in basis `from` onto basis `to`.
pub fn project_expansion(
    basis: &HermiteBasis,
    coeffs: &[f64],
    from: &BasisParams,
    to: &BasisParams,
) -> Result<Vec<f64>> {
    if !(from.theta > 0.0) || !(to.theta > 0.0) {
        return Err(SolverError::InvalidParameter(format!(
            "projection needs positive temperatures, got {} -> {}",
            from.theta, to.theta
        )));
    }
    if coeffs.len() != basis.len() {
        return Err(SolverError::InvalidParameter(format!(
            "coefficient length {} does not match order {}",
            coeffs.len(),
            basis.order()
        )));
    }
    let mut dst = vec![0.0; coeffs.len()];
    let mut scratch = vec![0.0; coeffs.len()];
    basis.project_into(coeffs, from, to, &mut dst, &mut scratch);
    Ok(dst)
}
