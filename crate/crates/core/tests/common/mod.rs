//! Independent velocity-space oracles shared by the integration tests.
//!
//! Nothing here calls the library's Hermite tables: nodes come from the
//! Golub-Welsch eigenproblem solved with nalgebra, polynomials from a local
//! three-term recurrence.

#![allow(dead_code)]

use fim_core::fim::{solve_to_steady, SolveOptions, SolveReport, SolverKind};
use fim_core::spatial::{Discretization, MomentField};
use fim_core::tensor_basis::{BasisParams, HermiteBasis};
use nalgebra::DMatrix;

/// Probabilists' Hermite polynomials `He_0..=He_n` at `x`.
pub fn hermite_all(n: usize, x: f64) -> Vec<f64> {
    let mut h = vec![0.0; n + 1];
    h[0] = 1.0;
    if n >= 1 {
        h[1] = x;
    }
    for k in 1..n {
        h[k + 1] = x * h[k] - k as f64 * h[k - 1];
    }
    h
}

/// Gauss rule for the standard normal weight from the Jacobi matrix.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// Eigenvalues of the Jacobi matrix of `He_n`, i.e. its roots, ascending.
pub fn hermite_roots(n: usize) -> Vec<f64> {
    gauss_hermite(n).0
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Tensor-product quadrature in reduced velocity about `params`.
pub struct Quadrature {
    pub params: BasisParams,
    /// `(xi, weight)` pairs; weights integrate against the normal density.
    pub points: Vec<([f64; 3], f64)>,
}

impl Quadrature {
    pub fn new(n: usize, params: BasisParams) -> Self {
        let (x, w) = gauss_hermite(n);
        let s = params.theta.sqrt();
        let mut points = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let xi = [
                        params.u[0] + s * x[a],
                        params.u[1] + s * x[b],
                        params.u[2] + s * x[c],
                    ];
                    points.push((xi, w[a] * w[b] * w[c]));
                }
            }
        }
        Quadrature { params, points }
    }
}

/// `f(xi) / [theta^{-3/2} phi(v)]` of an expansion, where the quadrature
/// reference Gaussian equals the expansion basis Gaussian.
pub fn expansion_ratio(basis: &HermiteBasis, coeffs: &[f64], params: &BasisParams, xi: [f64; 3]) -> f64 {
    let m = basis.order();
    let s = params.theta.sqrt();
    let h: Vec<Vec<f64>> = (0..3).map(|d| hermite_all(m, (xi[d] - params.u[d]) / s)).collect();
    (0..basis.len())
        .map(|p| {
            let a = basis.multi_index(p);
            let deg = a[0] + a[1] + a[2];
            coeffs[p] * params.theta.powf(-(deg as f64) / 2.0) * h[0][a[0]] * h[1][a[1]] * h[2][a[2]]
        })
        .sum()
}

/// Re-expansion of `coeffs` (optionally multiplied by `xi_d`) from `from`
/// to `to` by quadrature:
/// `f'_a = theta'^{|a|/2} / a! * int f(xi) He_a((xi - u')/sqrt(theta')) dxi`.
///
/// The rule is built about `from`, so the integrand is a polynomial of degree
/// at most `2M + 1` and `M + 2` nodes per direction integrate it exactly.
pub fn project_by_quadrature(
    basis: &HermiteBasis,
    coeffs: &[f64],
    from: &BasisParams,
    to: &BasisParams,
    xi_power: Option<usize>,
) -> Vec<f64> {
    let m = basis.order();
    let n = m + 2;
    let q = Quadrature::new(n, *from);
    let st = to.theta.sqrt();
    let mut out = vec![0.0; basis.len()];
    for &(xi, w) in &q.points {
        let mut fv = expansion_ratio(basis, coeffs, from, xi) * w;
        if let Some(d) = xi_power {
            fv *= xi[d];
        }
        let h: Vec<Vec<f64>> = (0..3).map(|d| hermite_all(m, (xi[d] - to.u[d]) / st)).collect();
        for (p, o) in out.iter_mut().enumerate() {
            let a = basis.multi_index(p);
            *o += fv * h[0][a[0]] * h[1][a[1]] * h[2][a[2]];
        }
    }
    for (p, o) in out.iter_mut().enumerate() {
        let a = basis.multi_index(p);
        let deg = a[0] + a[1] + a[2];
        *o *= to.theta.powf(deg as f64 / 2.0) / (factorial(a[0]) * factorial(a[1]) * factorial(a[2]));
    }
    out
}

/// Velocity moment `int xi^k f dxi` of an expansion by quadrature.
pub fn velocity_moment(basis: &HermiteBasis, coeffs: &[f64], params: &BasisParams, k: [usize; 3]) -> f64 {
    let q = Quadrature::new(basis.order() + (k[0] + k[1] + k[2]) / 2 + 2, *params);
    q.points
        .iter()
        .map(|&(xi, w)| {
            expansion_ratio(basis, coeffs, params, xi)
                * w
                * xi[0].powi(k[0] as i32)
                * xi[1].powi(k[1] as i32)
                * xi[2].powi(k[2] as i32)
        })
        .sum()
}

/// `max |a - b| / max |b|`.
pub fn rel_linf(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// Runs a solver to the given tolerance, panicking on divergence.
pub fn converge(
    disc: &Discretization,
    field: &mut MomentField,
    solver: &SolverKind,
    opts: &SolveOptions,
) -> SolveReport {
    solve_to_steady(disc, field, solver, opts, &mut |_, _| {}).expect("solver setup")
}

/// Macroscopic profiles `(rho, u, theta, sigma, q)` flattened per quantity.
pub struct Profiles {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
    pub sigma: Vec<f64>,
    pub q: Vec<f64>,
}

pub fn profiles(field: &MomentField) -> Profiles {
    let mut p = Profiles {
        rho: vec![],
        u: vec![],
        theta: vec![],
        sigma: vec![],
        q: vec![],
    };
    for i in 0..field.len() {
        let m = fim_core::kinetic_state::macro_quantities(&field.basis, &field.state(i)).unwrap();
        p.rho.push(m.rho);
        p.u.extend_from_slice(&m.u);
        p.theta.push(m.theta);
        for r in &m.sigma {
            p.sigma.extend_from_slice(r);
        }
        p.q.extend_from_slice(&m.q);
    }
    p
}

/// Largest pairwise deviation of `(rho, u, theta)` and of `(sigma, q)`.
pub fn profile_deviation(a: &Profiles, b: &Profiles) -> (f64, f64) {
    let prim = rel_linf(&a.rho, &b.rho)
        .max(rel_linf(&a.u, &b.u))
        .max(rel_linf(&a.theta, &b.theta));
    let closure = rel_linf(&a.sigma, &b.sigma).max(rel_linf(&a.q, &b.q));
    (prim, closure)
}
