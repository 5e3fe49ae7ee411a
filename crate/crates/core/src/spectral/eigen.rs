//! Spectral gap of a Cayley graph, densely or by power iteration.

use serde::{Deserialize, Serialize};

use super::operator::CayleyOperator;
use crate::error::{Error, Result};
use crate::group::{GenSet, GroupElement, GroupTable};
use crate::numeric::{dot, norm2};

pub const DENSE_CAP: usize = 4000;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

/// Eigenvalues closer than this to 1 count toward the kernel of the Laplacian.
const KERNEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    PowerIteration,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::PowerIteration => "power_iteration",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// First nontrivial Laplacian eigenvalue, `1 - alpha1`.
    pub lambda1: f64,
    /// Largest eigenvalue of T on mean-zero functions.
    pub alpha1: f64,
    /// Smallest eigenvalue of T; -1 exactly when the graph is bipartite.
    pub alpha_min: f64,
    pub method: Method,
    pub iterations: usize,
    /// Residual norm `||T v - alpha1 v||` of the returned eigenvector
    /// estimate (0 for the dense path).
    pub residual: f64,
    pub converged: bool,
    /// Multiplicity of the Laplacian eigenvalue 0 (dense path only), which
    /// equals the number of connected components.
    pub zero_multiplicity: Option<usize>,
    /// Eigenvalues of T, descending (dense path only).
    pub spectrum: Option<Vec<f64>>,
}

impl SpectralReport {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged(self.iterations))
        }
    }
}

/// All eigenvalues of T, descending.
pub fn full_spectrum_of(op: &CayleyOperator, cap: usize) -> Result<Vec<f64>> {
    if op.order() > cap {
        return Err(Error::TooLargeForDense(op.order(), cap));
    }
    let mut vals: Vec<f64> = op.dense().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

pub fn full_spectrum<E: GroupElement>(table: &GroupTable<E>, gens: &GenSet<E>) -> Result<Vec<f64>> {
    full_spectrum_of(&CayleyOperator::new(table, gens)?, DENSE_CAP)
}

pub fn dense_report(op: &CayleyOperator, cap: usize) -> Result<SpectralReport> {
    let spectrum = full_spectrum_of(op, cap)?;
    let alpha1 = spectrum.get(1).copied().unwrap_or(0.0);
    let alpha_min = *spectrum.last().unwrap();
    let zero_multiplicity = spectrum.iter().filter(|&&a| (1.0 - a).abs() < KERNEL_TOL).count();
    Ok(SpectralReport {
        lambda1: 1.0 - alpha1,
        alpha1,
        alpha_min,
        method: Method::Dense,
        iterations: 0,
        residual: 0.0,
        converged: true,
        zero_multiplicity: Some(zero_multiplicity),
        spectrum: Some(spectrum),
    })
}

/// Deterministic start vector: alternating signs, mean removed, unit norm.
fn start_vector(n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    // tilt slightly so the vector is not orthogonal to symmetric eigenspaces
    for (i, x) in v.iter_mut().enumerate() {
        *x += (i % 7) as f64 / 7.0;
    }
    project_mean_zero(&mut v);
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    v
}

fn project_mean_zero(v: &mut [f64]) {
    let mean = crate::numeric::pairwise_sum(v) / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

/// Power iteration for an extreme eigenvalue of T on mean-zero functions.
///
/// Iterates `(I + sign T) / 2`, whose spectrum lies in [0, 1], so the top
/// eigenvalue on the mean-zero subspace is `alpha1` for `sign = +1` and
/// `-alpha_min` for `sign = -1`. The constant vector is projected out each
/// step. Stops when the Rayleigh quotient moves by less than `tol` and the
/// geometric tail of the remaining moves is also below `tol`.
fn power_extreme(op: &CayleyOperator, sign: f64, tol: f64, max_iter: usize) -> (f64, usize, f64, bool) {
    let n = op.order();
    let mut v = start_vector(n);
    let mut tv = vec![0.0; n];
    let mut prev_rq = f64::NAN;
    let mut prev_delta = f64::INFINITY;
    let mut rq = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        op.apply_into(&v, &mut tv);
        // Rayleigh quotient of T at the current unit vector
        rq = dot(&v, &tv);
        let delta = (rq - prev_rq).abs();
        if delta <= 1e-14 * rq.abs().max(1.0) {
            // moves at rounding level carry no further information
            converged = true;
            break;
        }
        if delta < tol {
            let q = (delta / prev_delta).min(0.999_999);
            if delta * q / (1.0 - q) < tol {
                converged = true;
                break;
            }
        }
        if delta.is_finite() {
            prev_delta = delta.max(f64::MIN_POSITIVE);
        }
        prev_rq = rq;
        for (x, t) in v.iter_mut().zip(&tv) {
            *x = 0.5 * (*x + sign * t);
        }
        project_mean_zero(&mut v);
        let nv = norm2(&v);
        if nv == 0.0 {
            // only the trivial eigenvalue on this component structure
            converged = true;
            break;
        }
        v.iter_mut().for_each(|x| *x /= nv);
    }
    let resid: Vec<f64> = tv.iter().zip(&v).map(|(t, x)| t - rq * x).collect();
    (rq, iterations, norm2(&resid), converged)
}

pub fn iterative_report(op: &CayleyOperator, tol: f64, max_iter: usize) -> SpectralReport {
    let (alpha1, it1, residual, c1) = power_extreme(op, 1.0, tol, max_iter);
    let (alpha_min, it2, _, c2) = power_extreme(op, -1.0, tol, max_iter);
    SpectralReport {
        lambda1: 1.0 - alpha1,
        alpha1,
        alpha_min,
        method: Method::PowerIteration,
        iterations: it1 + it2,
        residual,
        converged: c1 && c2,
        zero_multiplicity: None,
        spectrum: None,
    }
}

/// Spectral gap `lambda1 = 1 - alpha1` of Cay(G, S).
pub fn lambda1<E: GroupElement>(
    table: &GroupTable<E>,
    gens: &GenSet<E>,
    method: Method,
    tol: f64,
) -> Result<SpectralReport> {
    let op = CayleyOperator::new(table, gens)?;
    match method {
        Method::Dense => dense_report(&op, DENSE_CAP),
        Method::PowerIteration => Ok(iterative_report(&op, tol, DEFAULT_MAX_ITER)),
    }
}

/// Dense when the group is small enough, otherwise iterative.
pub fn lambda1_auto(op: &CayleyOperator, tol: f64) -> SpectralReport {
    if op.order() <= DENSE_CAP {
        dense_report(op, DENSE_CAP).expect("under cap")
    } else {
        iterative_report(op, tol, DEFAULT_MAX_ITER)
    }
}
