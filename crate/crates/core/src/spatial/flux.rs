use std::str::FromStr;

use crate::error::{Result, SolverError};
use crate::kinetic_state::MomentState;
use crate::tensor_basis::{BasisParams, HermiteBasis};

/// Buffers reused across flux evaluations.
#[derive(Debug, Clone)]
pub struct FluxScratch {
    xl: Vec<f64>,
    xr: Vec<f64>,
    pr: Vec<f64>,
    tmp: Vec<f64>,
    scratch: Vec<f64>,
}

impl FluxScratch {
    pub fn new(len: usize) -> Self {
        FluxScratch {
            xl: vec![0.0; len],
            xr: vec![0.0; len],
            pr: vec![0.0; len],
            tmp: vec![0.0; len],
            scratch: vec![0.0; len],
        }
    }

    pub(crate) fn scratch(&mut self) -> &mut [f64] {
        &mut self.scratch
    }
}

pub(crate) fn bounds_from_params(
    c_m: f64,
    left: &BasisParams,
    right: &BasisParams,
    d: usize,
) -> (f64, f64) {
    let sl = c_m * left.theta.sqrt();
    let sr = c_m * right.theta.sqrt();
    let lo = (left.u[d] - sl).min(right.u[d] - sr);
    let hi = (left.u[d] + sl).max(right.u[d] + sr);
    (lo, hi)
}

/// Minimal and maximal characteristic speeds of the two native states
/// in direction `d`.
pub fn wave_speed_bounds(
    basis: &HermiteBasis,
    left: &MomentState,
    right: &MomentState,
    d: usize,
) -> (f64, f64) {
    bounds_from_params(basis.c_m(), &left.params, &right.params, d)
}

/// HLL moment flux in direction `d`, expanded in the left state's basis.
#[allow(clippy::too_many_arguments)]
pub(crate) fn hll_flux_into(
    basis: &HermiteBasis,
    cl: &[f64],
    pl: &BasisParams,
    cr: &[f64],
    pr: &BasisParams,
    d: usize,
    (lam_l, lam_r): (f64, f64),
    out: &mut [f64],
    ws: &mut FluxScratch,
) {
    if lam_l >= 0.0 {
        basis.mul_xi_into(d, cl, pl, out);
        return;
    }
    if lam_r <= 0.0 {
        basis.mul_xi_into(d, cr, pr, &mut ws.tmp);
        basis.project_into(&ws.tmp, pr, pl, out, &mut ws.scratch);
        return;
    }
    basis.mul_xi_into(d, cl, pl, &mut ws.xl);
    basis.mul_xi_into(d, cr, pr, &mut ws.tmp);
    basis.project_into(&ws.tmp, pr, pl, &mut ws.xr, &mut ws.scratch);
    basis.project_into(cr, pr, pl, &mut ws.pr, &mut ws.scratch);
    let inv = 1.0 / (lam_r - lam_l);
    let prod = lam_l * lam_r;
    for p in 0..out.len() {
        out[p] = (lam_r * ws.xl[p] - lam_l * ws.xr[p] + prod * (ws.pr[p] - cl[p])) * inv;
    }
}

/// HLL flux of two native states in direction `d`; the result is expressed in
/// the left state's basis.
pub fn hll_flux_moment(
    basis: &HermiteBasis,
    left: &MomentState,
    right: &MomentState,
    d: usize,
) -> MomentState {
    let mut out = vec![0.0; basis.len()];
    let mut ws = FluxScratch::new(basis.len());
    let lam = wave_speed_bounds(basis, left, right, d);
    hll_flux_into(
        basis,
        &left.coeffs,
        &left.params,
        &right.coeffs,
        &right.params,
        d,
        lam,
        &mut out,
        &mut ws,
    );
    MomentState {
        params: left.params,
        coeffs: out,
    }
}

/// Hyperbolicity regularization of the interface flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularization {
    Off,
    /// Globally hyperbolic correction of the top-order equations.
    Hme,
}

impl Regularization {
    /// `Hme` from order 4 upward, `Off` below.
    pub fn default_for(order: usize) -> Self {
        if order >= 4 {
            Regularization::Hme
        } else {
            Regularization::Off
        }
    }
}

impl FromStr for Regularization {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "off" => Ok(Regularization::Off),
            "hme" => Ok(Regularization::Hme),
            other => Err(SolverError::InvalidParameter(format!(
                "unknown regularization mode `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
struct RegEntry {
    out: usize,
    factor: f64,
    /// `(k, position of g + e_d - e_k)`
    vel: Vec<(usize, usize)>,
    /// positions of `g + e_d - 2 e_k`
    temp: Vec<usize>,
}

/// Index lists of the top-order correction, one per direction.
///
/// For `|g| = M` the correction accumulated across an interface is
///
/// ```text
/// J_g = (g_d + 1) [ sum_k du_k fbar_{g+e_d-e_k} + dtheta/2 sum_k fbar_{g+e_d-2e_k} ]
/// ```
///
/// with `du`, `dtheta` the parameter jumps and `fbar` the mean coefficients.
/// It is split between the two cells with the HLL weights.
#[derive(Debug, Clone)]
pub struct RegTable {
    dirs: [Vec<RegEntry>; 3],
}

impl RegTable {
    pub fn new(basis: &HermiteBasis) -> Result<Self> {
        let m = basis.order();
        if m < 3 {
            return Err(SolverError::InvalidParameter(format!(
                "hme regularization needs order >= 3, got {m}"
            )));
        }
        let mut dirs: [Vec<RegEntry>; 3] = Default::default();
        let top = basis.index_set().degree_range(m);
        for (d, entries) in dirs.iter_mut().enumerate() {
            for pos in top.clone() {
                let g = basis.multi_index(pos);
                let mut vel = Vec::new();
                let mut temp = Vec::new();
                for k in 0..3 {
                    let mut a = g;
                    a[d] += 1;
                    if a[k] >= 1 {
                        a[k] -= 1;
                        vel.push((k, basis.position(a).unwrap()));
                        if a[k] >= 1 {
                            a[k] -= 1;
                            temp.push(basis.position(a).unwrap());
                        }
                    }
                }
                entries.push(RegEntry {
                    out: pos,
                    factor: (g[d] + 1) as f64,
                    vel,
                    temp,
                });
            }
        }
        Ok(RegTable { dirs })
    }

    /// Adds `scale_l * J` to `left` and `scale_r * J` to `right`, where the
    /// scales are the HLL split weights divided by the cell spacing.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn apply(
        &self,
        d: usize,
        cl: &[f64],
        pl: &BasisParams,
        cr: &[f64],
        pr: &BasisParams,
        (lam_l, lam_r): (f64, f64),
        mut left: Option<(&mut [f64], f64)>,
        mut right: Option<(&mut [f64], f64)>,
    ) {
        let (wl, wr) = split_weights(lam_l, lam_r);
        let du = [pr.u[0] - pl.u[0], pr.u[1] - pl.u[1], pr.u[2] - pl.u[2]];
        let half_dt = 0.5 * (pr.theta - pl.theta);
        for e in &self.dirs[d] {
            let mut acc = 0.0;
            for &(k, q) in &e.vel {
                acc += du[k] * 0.5 * (cl[q] + cr[q]);
            }
            for &q in &e.temp {
                acc += half_dt * 0.5 * (cl[q] + cr[q]);
            }
            let j = e.factor * acc;
            if let Some((buf, s)) = left.as_mut() {
                buf[e.out] += *s * wl * j;
            }
            if let Some((buf, s)) = right.as_mut() {
                buf[e.out] += *s * wr * j;
            }
        }
    }
}

fn split_weights(lam_l: f64, lam_r: f64) -> (f64, f64) {
    if lam_l >= 0.0 {
        (0.0, 1.0)
    } else if lam_r <= 0.0 {
        (1.0, 0.0)
    } else {
        let inv = 1.0 / (lam_r - lam_l);
        (-lam_l * inv, lam_r * inv)
    }
}

/// Regularization contributions of one interface to its two cells, each in
/// its own cell's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationFlux {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Interface regularization between two native states. Only top-order
/// coefficients are nonzero; `Off` gives zeros.
pub fn regularization_flux(
    basis: &HermiteBasis,
    left: &MomentState,
    right: &MomentState,
    d: usize,
    mode: Regularization,
) -> Result<RegularizationFlux> {
    let mut out = RegularizationFlux {
        left: vec![0.0; basis.len()],
        right: vec![0.0; basis.len()],
    };
    if mode == Regularization::Off {
        return Ok(out);
    }
    let table = RegTable::new(basis)?;
    let lam = wave_speed_bounds(basis, left, right, d);
    table.apply(
        d,
        &left.coeffs,
        &left.params,
        &right.coeffs,
        &right.params,
        lam,
        Some((&mut out.left, 1.0)),
        Some((&mut out.right, 1.0)),
    );
    Ok(out)
}
