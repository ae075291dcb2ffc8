use std::sync::OnceLock;

use crate::error::{Result, SolverError};

/// Largest degree held in the shared root table.
pub const MAX_TABLE_DEGREE: usize = 64;

/// Probabilists' Hermite polynomial `He_n(x)` via the three-term recurrence.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    hermite_pair(n, x).0
}

/// Returns `(He_n(x), He_{n-1}(x))`, with `He_{-1} = 0`.
fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Sorted real roots of `He_n` for every degree up to a maximum.
#[derive(Debug, Clone)]
pub struct HermiteRootTable {
    roots: Vec<Vec<f64>>,
}

impl HermiteRootTable {
    pub fn new(max_degree: usize) -> Result<Self> {
        let mut roots: Vec<Vec<f64>> = vec![Vec::new()];
        for n in 1..=max_degree {
            let r = roots_from_interlacing(n, &roots[n - 1])?;
            roots.push(r);
        }
        Ok(HermiteRootTable { roots })
    }

    /// Process-wide table up to [`MAX_TABLE_DEGREE`].
    pub fn shared() -> &'static HermiteRootTable {
        static TABLE: OnceLock<HermiteRootTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            HermiteRootTable::new(MAX_TABLE_DEGREE).expect("hermite root table construction")
        })
    }

    pub fn max_degree(&self) -> usize {
        self.roots.len() - 1
    }

    pub fn roots(&self, n: usize) -> &[f64] {
        &self.roots[n]
    }

    /// Largest root of `He_n`, `n >= 1`.
    pub fn c_max(&self, n: usize) -> f64 {
        *self.roots[n].last().expect("degree >= 1")
    }
}

/// Each root of `He_n` is bracketed by consecutive roots of `He_{n-1}`.
fn roots_from_interlacing(n: usize, lower: &[f64]) -> Result<Vec<f64>> {
    let bound = (4.0 * n as f64 + 2.0).sqrt() + 1.0;
    let mut brackets = Vec::with_capacity(n);
    let mut left = -bound;
    for &r in lower {
        brackets.push((left, r));
        left = r;
    }
    brackets.push((left, bound));

    let mut out = Vec::with_capacity(n);
    for (a, b) in brackets {
        out.push(bracketed_root(n, a, b)?);
    }
    // exact symmetry
    for i in 0..n / 2 {
        let m = 0.5 * (out[n - 1 - i] - out[i]);
        out[i] = -m;
        out[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        out[n / 2] = 0.0;
    }
    Ok(out)
}

fn bracketed_root(n: usize, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = hermite_eval(n, a);
    let fb = hermite_eval(n, b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(SolverError::RootFinding(n));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a < 1e-13 * (1.0 + m.abs()) {
            break;
        }
        let fm = hermite_eval(n, m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    // Newton polish, He_n' = n He_{n-1}
    let mut x = 0.5 * (a + b);
    for _ in 0..4 {
        let (h, hm1) = hermite_pair(n, x);
        let d = n as f64 * hm1;
        if d == 0.0 {
            break;
        }
        let step = h / d;
        x -= step;
        if step.abs() < 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    if !x.is_finite() {
        return Err(SolverError::RootFinding(n));
    }
    Ok(x)
}

/// Largest real root of `He_n`, `n >= 1`.
pub fn max_hermite_root(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(SolverError::InvalidParameter(
            "He_0 has no roots".to_string(),
        ));
    }
    if n <= MAX_TABLE_DEGREE {
        Ok(HermiteRootTable::shared().c_max(n))
    } else {
        let table = HermiteRootTable::new(n)?;
        Ok(table.c_max(n))
    }
}

/// Gauss-Hermite rule for the standard normal weight `exp(-x^2/2)/sqrt(2 pi)`.
///
/// Weights sum to one; the rule is exact for polynomials of degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_DEGREE {
            return Err(SolverError::InvalidParameter(format!(
                "quadrature size {n} outside 1..={MAX_TABLE_DEGREE}"
            )));
        }
        let nodes = HermiteRootTable::shared().roots(n).to_vec();
        let log_fact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        let weights = nodes
            .iter()
            .map(|&x| {
                let h = hermite_eval(n - 1, x);
                (log_fact - 2.0 * (n as f64).ln() - 2.0 * h.abs().ln()).exp()
            })
            .collect();
        Ok(GaussHermite { nodes, weights })
    }
}
