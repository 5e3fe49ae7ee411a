//! Exact convolution powers of the step measure on an enumerated group.

use crate::error::{Error, Result};
use crate::group::{GenSet, GroupElement, GroupTable, IdSet};
use crate::numeric::{norm2, pairwise_sum};
use crate::spectral::CayleyOperator;

/// A probability vector over the ids of a group table.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    mass: Vec<f64>,
}

impl Distribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() || mass.iter().any(|&m| !(m >= 0.0)) {
            return Err(Error::InvalidParameter("masses must be non-negative".into()));
        }
        let total = pairwise_sum(&mass);
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("masses sum to {total}")));
        }
        Ok(Self { mass })
    }

    pub fn delta(order: usize, id: u32) -> Self {
        let mut mass = vec![0.0; order];
        mass[id as usize] = 1.0;
        Self { mass }
    }

    pub fn uniform(order: usize) -> Self {
        Self {
            mass: vec![1.0 / order as f64; order],
        }
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn at(&self, id: u32) -> f64 {
        self.mass[id as usize]
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn total(&self) -> f64 {
        pairwise_sum(&self.mass)
    }

    pub fn l2_norm(&self) -> f64 {
        norm2(&self.mass)
    }

    pub fn mass_of(&self, set: &IdSet) -> f64 {
        let v: Vec<f64> = set.ids().iter().map(|&i| self.mass[i as usize]).collect();
        pairwise_sum(&v)
    }

    /// `max_x |mu(x) - 1/|G||`.
    pub fn sup_deviation(&self) -> f64 {
        let u = 1.0 / self.mass.len() as f64;
        self.mass.iter().map(|m| (m - u).abs()).fold(0.0, f64::max)
    }
}

/// One step `mu_S * dist`, at cost O(k |G|).
pub fn convolve_step_with(op: &CayleyOperator, dist: &Distribution) -> Distribution {
    let mut out = vec![0.0; dist.len()];
    op.apply_into(&dist.mass, &mut out);
    Distribution { mass: out }
}

pub fn convolve_step<E: GroupElement>(
    dist: &Distribution,
    table: &GroupTable<E>,
    gens: &GenSet<E>,
) -> Result<Distribution> {
    let op = CayleyOperator::new(table, gens)?;
    if dist.len() != op.order() {
        return Err(Error::DimensionMismatch {
            expected: op.order(),
            got: dist.len(),
        });
    }
    Ok(convolve_step_with(&op, dist))
}

/// Iterator over `mu^0 = delta_1, mu^1, mu^2, ...`.
pub struct Powers<'a> {
    op: &'a CayleyOperator,
    current: Distribution,
}

impl<'a> Powers<'a> {
    pub fn new(op: &'a CayleyOperator, identity: u32) -> Self {
        Self {
            op,
            current: Distribution::delta(op.order(), identity),
        }
    }
}

impl Iterator for Powers<'_> {
    type Item = Distribution;

    fn next(&mut self) -> Option<Distribution> {
        let next = convolve_step_with(self.op, &self.current);
        Some(std::mem::replace(&mut self.current, next))
    }
}

/// Return probability with its second route for even times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnProbability {
    pub n: usize,
    /// `mu^n(1)` from convolution.
    pub direct: f64,
    /// `||mu^{n/2}||_2^2` for even n.
    pub via_l2: Option<f64>,
}

pub fn return_probability<E: GroupElement>(
    table: &GroupTable<E>,
    gens: &GenSet<E>,
    n: usize,
) -> Result<ReturnProbability> {
    let op = CayleyOperator::new(table, gens)?;
    Ok(return_probability_with(&op, table.identity(), n))
}

pub fn return_probability_with(op: &CayleyOperator, identity: u32, n: usize) -> ReturnProbability {
    let mut via_l2 = None;
    let mut direct = 0.0;
    for (k, dist) in Powers::new(op, identity).take(n + 1).enumerate() {
        if n % 2 == 0 && k == n / 2 {
            let l2 = dist.l2_norm();
            via_l2 = Some(l2 * l2);
        }
        if k == n {
            direct = dist.at(identity);
        }
    }
    ReturnProbability { n, direct, via_l2 }
}

/// `mu^n(H)` for every n in `0..=max_n`, for a verified subgroup H.
pub fn subgroup_mass<E: GroupElement>(
    table: &GroupTable<E>,
    gens: &GenSet<E>,
    subgroup: &IdSet,
    max_n: usize,
) -> Result<Vec<f64>> {
    if !subgroup.is_subgroup_of(table) {
        return Err(Error::NotASubgroup);
    }
    let op = CayleyOperator::new(table, gens)?;
    let masses: Vec<f64> = Powers::new(&op, table.identity())
        .take(max_n + 1)
        .map(|d| d.mass_of(subgroup))
        .collect();
    Ok(masses)
}

/// Exact deviation from uniform at time n, with the bound `alpha^n` implied by
/// the spectral gap on the mean-zero part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equidistribution {
    pub n: usize,
    pub deviation: f64,
    /// `max(|alpha1|, |alpha_min|)^n`, an upper bound for the deviation.
    pub spectral_bound: Option<f64>,
}

pub fn equidistribution_test<E: GroupElement>(
    table: &GroupTable<E>,
    gens: &GenSet<E>,
    n: usize,
    spectral_radius: Option<f64>,
) -> Result<Equidistribution> {
    let op = CayleyOperator::new(table, gens)?;
    let dist = Powers::new(&op, table.identity()).nth(n).unwrap();
    Ok(Equidistribution {
        n,
        deviation: dist.sup_deviation(),
        spectral_bound: spectral_radius.map(|r| r.powi(n as i32)),
    })
}
