//! Trace identity, quasirandomness bounds, Observation-1 style gap bounds,
//! product-group gaps and l2-flattening trajectories.

use serde::{Deserialize, Serialize};

use super::eigen::{full_spectrum_of, lambda1_auto, SpectralReport, DENSE_CAP};
use super::operator::CayleyOperator;
use crate::error::{Error, Result};
use crate::group::{enumerate_group, GenSet, GroupElement, GroupTable, IntMat, MatFp, Pair, PrimeModulus};
use crate::walk::exact::{Distribution, Powers};

/// `|sum_i alpha_i^n - |G| mu^n(1)|` for even n.
pub fn trace_identity_residual<E: GroupElement>(table: &GroupTable<E>, gens: &GenSet<E>, n: usize) -> Result<f64> {
    if n % 2 != 0 {
        return Err(Error::InvalidParameter("trace identity needs even n".into()));
    }
    let op = CayleyOperator::new(table, gens)?;
    let spectrum = full_spectrum_of(&op, DENSE_CAP)?;
    Ok(trace_residuals(&op, &spectrum, table.identity(), &[n])[0])
}

/// Residuals for several even times sharing one spectrum and one walk.
pub fn trace_residuals(op: &CayleyOperator, spectrum: &[f64], identity: u32, times: &[usize]) -> Vec<f64> {
    let max_n = times.iter().copied().max().unwrap_or(0);
    let returns: Vec<f64> = Powers::new(op, identity)
        .take(max_n + 1)
        .map(|d| d.at(identity))
        .collect();
    times
        .iter()
        .map(|&n| {
            let powers: Vec<f64> = spectrum.iter().map(|a| a.powi(n as i32)).collect();
            let trace = crate::numeric::pairwise_sum(&powers);
            (trace - op.order() as f64 * returns[n]).abs()
        })
        .collect()
}

/// Lower bound on the dimension of nontrivial complex representations of
/// SL_d(F_p), and the exponent `beta` with `min_dim = |G|^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasirandomBound {
    pub min_dim: u64,
    pub beta: f64,
    /// Set when the bound carries no information (min_dim <= 1).
    pub degenerate: bool,
}

/// Frobenius' `(p-1)/2` for d = 2; for d >= 3 the Landazuri-Seitz bound
/// `p^{d-1} - 1` (Landazuri and Seitz, J. Algebra 32 (1974)) with its listed
/// small exceptions for SL_3(F_2) and SL_4(F_2), SL_4(F_3).
pub fn quasirandom_bound(p: u64, d: usize) -> Result<QuasirandomBound> {
    let modulus = PrimeModulus::new(p, d)?;
    let min_dim = match (d, p) {
        (2, _) => (p - 1) / 2,
        (3, 2) => 2,
        (4, 2) => 7,
        (4, 3) => 26,
        _ => p.pow(d as u32 - 1) - 1,
    };
    let order = modulus.sl_order() as f64;
    let beta = if min_dim >= 1 {
        (min_dim as f64).ln() / order.ln()
    } else {
        0.0
    };
    Ok(QuasirandomBound {
        min_dim,
        beta,
        degenerate: min_dim <= 1,
    })
}

/// If `mu^n(1) <= |G|^{-(1 - beta/2)}` for an even `n <= c1 log|G|`, returns
/// the bound `alpha1 <= exp(-beta / (2 c1))`; otherwise `None`.
pub fn observation1_check(mu_n_at_1: f64, n: usize, beta: f64, c1: f64, group_order: usize) -> Option<f64> {
    let g = group_order as f64;
    if n % 2 != 0 || n as f64 > c1 * g.ln() {
        return None;
    }
    if mu_n_at_1 <= g.powf(-(1.0 - beta / 2.0)) {
        Some((-beta / (2.0 * c1)).exp())
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductGap {
    pub p1: u64,
    pub p2: u64,
    pub image_order: usize,
    pub report: SpectralReport,
}

/// Spectral gap of the image of `gens` under reduction mod p1 and p2 jointly,
/// inside SL_d(F_p1) x SL_d(F_p2).
pub fn product_group_gap(p1: u64, p2: u64, gens: &GenSet<IntMat>, cap: usize, tol: f64) -> Result<ProductGap> {
    if p1 == p2 {
        return Err(Error::DegenerateProduct(p1));
    }
    let d = gens.dim();
    let (m1, m2) = (PrimeModulus::new(p1, d)?, PrimeModulus::new(p2, d)?);
    let pairs: GenSet<Pair<MatFp, MatFp>> =
        gens.map(|g| Ok(Pair(crate::group::reduce_mod(g, m1)?, crate::group::reduce_mod(g, m2)?)))?;
    let table = enumerate_group(&pairs, cap)?;
    let op = CayleyOperator::new(&table, &pairs)?;
    Ok(ProductGap {
        p1,
        p2,
        image_order: table.order(),
        report: lambda1_auto(&op, tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatteningPoint {
    pub n: usize,
    /// `||mu^n||_2`
    pub l2: f64,
    /// `||mu^{2n}||_2 / ||mu^n||_2`
    pub ratio: f64,
}

/// l2 norms of `start * mu^n` along a schedule together with the doubling ratios.
pub fn flattening_trajectory_from(
    op: &CayleyOperator,
    start: Distribution,
    schedule: &[usize],
) -> Vec<FlatteningPoint> {
    let max_n = schedule.iter().map(|n| 2 * n).max().unwrap_or(0);
    let mut norms = Vec::with_capacity(max_n + 1);
    let mut cur = start;
    for _ in 0..=max_n {
        norms.push(cur.l2_norm());
        cur = crate::walk::exact::convolve_step_with(op, &cur);
    }
    schedule
        .iter()
        .map(|&n| FlatteningPoint {
            n,
            l2: norms[n],
            ratio: norms[2 * n] / norms[n],
        })
        .collect()
}

pub fn flattening_trajectory<E: GroupElement>(
    table: &GroupTable<E>,
    gens: &GenSet<E>,
    schedule: &[usize],
) -> Result<Vec<FlatteningPoint>> {
    let op = CayleyOperator::new(table, gens)?;
    Ok(flattening_trajectory_from(
        &op,
        Distribution::delta(table.order(), table.identity()),
        schedule,
    ))
}
