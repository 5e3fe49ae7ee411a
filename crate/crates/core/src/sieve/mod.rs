//! The group sieve: prime batteries, per-prime excluded sets and their
//! densities, sieve runs over Monte Carlo walks, and the probabilistic
//! inequalities behind the method.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    cycle_type, elementary_generators, enumerate_group, is_power_unipotent, is_prime, is_regular_semisimple, GenSet,
    GroupTable, IdSet, IntMat, MatFp, PrimeModulus,
};
use crate::numeric::{wilson, Z_99};
use crate::walk::{decay_fit, noise_floor, DecayFit, WalkSampler};

/// Distinct primes `p >= p_min` with `p = 1 mod m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeBattery {
    pub primes: Vec<u64>,
    /// The modulus m of the congruence `p = 1 mod m`, when m > 1.
    pub congruence: Option<u64>,
    pub p_min: u64,
    pub source_note: String,
}

impl PrimeBattery {
    /// A battery from an explicit list; entries must be distinct primes.
    pub fn explicit(primes: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::NotPrime(bad));
        }
        let mut sorted = primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() {
            return Err(Error::InvalidParameter("battery primes must be distinct".into()));
        }
        Ok(Self {
            p_min: sorted.first().copied().unwrap_or(2),
            primes,
            congruence: None,
            source_note: "explicit list".into(),
        })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// The `count` smallest primes `p >= p_min` with `p = 1 mod m`, scanning no
/// further than `ceiling`.
pub fn select_primes(count: usize, m: u64, p_min: u64, ceiling: u64) -> Result<PrimeBattery> {
    if count == 0 || m == 0 {
        return Err(Error::InvalidParameter("need count >= 1 and m >= 1".into()));
    }
    let mut primes = Vec::with_capacity(count);
    let mut p = p_min.max(2);
    while primes.len() < count && p <= ceiling {
        if p % m == 1 % m && is_prime(p) {
            primes.push(p);
        }
        p += 1;
    }
    if primes.len() < count {
        return Err(Error::SearchBoundExceeded {
            ceiling,
            found: primes.len(),
            wanted: count,
        });
    }
    Ok(PrimeBattery {
        primes,
        congruence: (m > 1).then_some(m),
        p_min,
        source_note: format!("{count} smallest primes >= {p_min} congruent to 1 mod {m}"),
    })
}

/// Which elements each prime excludes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    /// m-th powers.
    MPower {
        m: u64,
    },
    /// Everything except the regular semisimple elements of this cycle type.
    MissingCycleType {
        partition: Vec<usize>,
    },
    TraceValue {
        t: i64,
    },
    PowerUnipotent,
    /// Explicit matrices per prime, given as row-major integer entries.
    CustomSubset {
        sets: BTreeMap<u64, Vec<Vec<i64>>>,
    },
}

impl TargetKind {
    pub fn validate(&self, d: usize) -> Result<()> {
        match self {
            TargetKind::MPower { m } if *m < 2 => Err(Error::InvalidParameter(format!("m = {m} must be at least 2"))),
            TargetKind::MissingCycleType { partition }
                if partition.iter().sum::<usize>() != d || partition.contains(&0) =>
            {
                Err(Error::InvalidParameter(format!(
                    "{partition:?} is not a partition of {d}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TargetKind::MPower { m } => format!("m_power({m})"),
            TargetKind::MissingCycleType { partition } => format!("missing_cycle_type{partition:?}"),
            TargetKind::TraceValue { t } => format!("trace_value({t})"),
            TargetKind::PowerUnipotent => "power_unipotent".into(),
            TargetKind::CustomSubset { .. } => "custom_subset".into(),
        }
    }
}

/// SL_d(F_p) enumerated from a generator set, for one battery prime.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    pub p: u64,
    pub table: Arc<GroupTable<MatFp>>,
    /// Whether the generators reach all of SL_d(F_p).
    pub surjective: bool,
}

/// Enumerates the image of `gens` at every battery prime, in parallel.
pub fn prime_tables(gens: &GenSet<IntMat>, battery: &PrimeBattery, cap: usize) -> Result<Vec<PrimeTable>> {
    let d = gens.dim();
    battery
        .primes
        .par_iter()
        .map(|&p| {
            let modulus = PrimeModulus::new(p, d)?;
            let table = enumerate_group(&gens.reduce(modulus)?, cap)?;
            Ok(PrimeTable {
                p,
                surjective: table.order() as u128 == modulus.sl_order(),
                table: Arc::new(table),
            })
        })
        .collect()
}

/// Excluded set at one prime.
#[derive(Debug, Clone)]
pub struct ExcludedSet {
    pub table: Arc<GroupTable<MatFp>>,
    pub set: IdSet,
}

impl ExcludedSet {
    pub fn density(&self) -> Ratio<u64> {
        Ratio::new(self.set.len() as u64, self.table.order() as u64)
    }

    pub fn contains(&self, m: &MatFp) -> bool {
        self.table.id_of(m).is_some_and(|id| self.set.contains(id))
    }
}

/// A target family with its per-prime excluded sets.
#[derive(Debug, Clone)]
pub struct TargetPredicate {
    pub kind: TargetKind,
    pub sets: BTreeMap<u64, ExcludedSet>,
}

impl TargetPredicate {
    pub fn build(kind: TargetKind, tables: &[PrimeTable]) -> Result<Self> {
        let sets = tables
            .par_iter()
            .map(|pt| {
                let d = pt.table.element(0).d();
                kind.validate(d)?;
                let set = excluded_ids(&kind, pt)?;
                Ok((
                    pt.p,
                    ExcludedSet {
                        table: pt.table.clone(),
                        set,
                    },
                ))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self { kind, sets })
    }

    /// Custom per-prime id sets, for targets defined programmatically.
    pub fn from_sets(sets: BTreeMap<u64, ExcludedSet>) -> Self {
        Self {
            kind: TargetKind::CustomSubset { sets: BTreeMap::new() },
            sets,
        }
    }
}

fn excluded_ids(kind: &TargetKind, pt: &PrimeTable) -> Result<IdSet> {
    let table = &pt.table;
    let order = table.order();
    Ok(match kind {
        TargetKind::MPower { m } => power_image(table, *m),
        TargetKind::MissingCycleType { partition } => IdSet::from_predicate(table, |g| {
            !(is_regular_semisimple(g) && cycle_type(g).is_ok_and(|c| &c == partition))
        }),
        TargetKind::TraceValue { t } => {
            let r = t.rem_euclid(pt.p as i64) as u32;
            IdSet::from_predicate(table, |g| g.trace() == r)
        }
        TargetKind::PowerUnipotent => IdSet::from_predicate(table, is_power_unipotent),
        TargetKind::CustomSubset { sets } => {
            let d = table.element(0).d();
            let modulus = PrimeModulus::new(pt.p, d)?;
            let mats = sets.get(&pt.p).ok_or(Error::PredicateMissingPrime(pt.p))?;
            let ids = mats
                .iter()
                .map(|e| {
                    let m = MatFp::new(modulus, e)?;
                    table
                        .id_of(&m)
                        .ok_or_else(|| Error::InvalidParameter(format!("{m} is not in the image")))
                })
                .collect::<Result<Vec<_>>>()?;
            IdSet::from_ids(order, ids)
        }
    })
}

fn power_image(table: &GroupTable<MatFp>, m: u64) -> IdSet {
    IdSet::from_ids(
        table.order(),
        table
            .elements()
            .iter()
            .map(|g| table.id_of(&g.pow(m)).expect("powers stay in the group")),
    )
}

fn full_sl(p: u64, d: usize, cap: usize) -> Result<GroupTable<MatFp>> {
    let gens = elementary_generators(d)?.reduce(PrimeModulus::new(p, d)?)?;
    enumerate_group(&gens, cap)
}

/// `|{g^m : g in SL_d(F_p)}| / |SL_d(F_p)|`, by enumeration.
pub fn m_power_density(p: u64, m: u64, d: usize, cap: usize) -> Result<Ratio<u64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let table = full_sl(p, d, cap)?;
    Ok(Ratio::new(power_image(&table, m).len() as u64, table.order() as u64))
}

/// Counts of regular semisimple elements by cycle type, and the count of the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleCensus {
    pub order: u64,
    pub by_type: BTreeMap<String, u64>,
    pub not_regular_semisimple: u64,
}

pub fn cycle_type_census(p: u64, d: usize, cap: usize) -> Result<CycleCensus> {
    let table = full_sl(p, d, cap)?;
    let mut by_type = BTreeMap::new();
    let mut rest = 0;
    for g in table.elements() {
        match cycle_type(g) {
            Ok(c) => *by_type.entry(format!("{c:?}")).or_insert(0) += 1,
            Err(_) => rest += 1,
        }
    }
    Ok(CycleCensus {
        order: table.order() as u64,
        by_type,
        not_regular_semisimple: rest,
    })
}

/// Fraction of SL_d(F_p) that is regular semisimple with the given cycle type.
pub fn cycle_type_density(p: u64, partition: &[usize], d: usize, cap: usize) -> Result<Ratio<u64>> {
    TargetKind::MissingCycleType {
        partition: partition.to_vec(),
    }
    .validate(d)?;
    let mut sorted = partition.to_vec();
    sorted.sort_unstable();
    let census = cycle_type_census(p, d, cap)?;
    let count = census.by_type.get(&format!("{sorted:?}")).copied().unwrap_or(0);
    Ok(Ratio::new(count, census.order))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeDensity {
    pub p: u64,
    pub order: u64,
    pub excluded: u64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveReport {
    pub target: String,
    pub battery: Vec<u64>,
    pub densities: Vec<PrimeDensity>,
    /// `min_i (1 - |pi_i(Z)| / |G_i|)`.
    pub alpha_min: f64,
    pub n_schedule: Vec<usize>,
    pub samples: u64,
    pub hits: Vec<u64>,
    pub estimate: Vec<f64>,
    pub ci_lo: Vec<f64>,
    pub ci_hi: Vec<f64>,
    pub fit: Option<DecayFit>,
    /// `1 / N`.
    pub bound: f64,
    pub b_hat: f64,
    /// `b_hat * ln N`.
    pub threshold_n: f64,
    /// Whether every estimate at `n >= threshold_n` is at most `1/N`;
    /// `None` when the schedule stops short of the threshold.
    pub bound_held: Option<bool>,
    /// First scheduled n with estimate at most `1/N`.
    pub first_below_bound: Option<usize>,
}

/// Runs the sieve: a sample hits at time n when its residue lies in the
/// excluded set at every battery prime.
pub fn sieve_run(
    sampler: &WalkSampler,
    target: &TargetPredicate,
    battery: &PrimeBattery,
    schedule: &[usize],
    samples: u64,
    b_hat: f64,
) -> Result<SieveReport> {
    if battery.is_empty() {
        return Err(Error::EmptyBattery);
    }
    if samples == 0 || schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "need samples >= 1 and a strictly increasing schedule".into(),
        ));
    }
    let mut checks = Vec::with_capacity(battery.len());
    for &p in &battery.primes {
        let set = target.sets.get(&p).ok_or(Error::PredicateMissingPrime(p))?;
        let slot = sampler.prime_index(p).ok_or(Error::PredicateMissingPrime(p))?;
        checks.push((slot, set));
    }
    let hits = (0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; schedule.len()],
            |mut acc, i| {
                let mut path = sampler.path(i);
                for (si, &n) in schedule.iter().enumerate() {
                    while path.steps() < n {
                        path.step();
                    }
                    if checks.iter().all(|(slot, set)| set.contains(&path.residue(*slot))) {
                        acc[si] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; schedule.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let densities: Vec<PrimeDensity> = checks
        .iter()
        .zip(&battery.primes)
        .map(|((_, set), &p)| PrimeDensity {
            p,
            order: set.table.order() as u64,
            excluded: set.set.len() as u64,
            density: set.set.len() as f64 / set.table.order() as f64,
        })
        .collect();
    let alpha_min = densities.iter().map(|d| 1.0 - d.density).fold(f64::INFINITY, f64::min);
    let estimate: Vec<f64> = hits.iter().map(|&h| h as f64 / samples as f64).collect();
    let (ci_lo, ci_hi) = hits.iter().map(|&h| wilson(h, samples, Z_99)).unzip();
    let n_primes = battery.len() as f64;
    let bound = 1.0 / n_primes;
    let threshold_n = b_hat * n_primes.ln();
    let late: Vec<f64> = schedule
        .iter()
        .zip(&estimate)
        .filter(|(&n, _)| n as f64 >= threshold_n)
        .map(|(_, &e)| e)
        .collect();
    Ok(SieveReport {
        target: target.kind.label(),
        battery: battery.primes.clone(),
        densities,
        alpha_min,
        n_schedule: schedule.to_vec(),
        samples,
        fit: decay_fit(schedule, &estimate, noise_floor(samples)).ok(),
        first_below_bound: schedule
            .iter()
            .zip(&estimate)
            .find(|(_, &e)| e <= bound)
            .map(|(&n, _)| n),
        bound_held: (!late.is_empty()).then(|| late.iter().all(|&e| e <= bound)),
        hits,
        estimate,
        ci_lo,
        ci_hi,
        bound,
        b_hat,
        threshold_n,
    })
}

/// `(delta + 3/N) / omega^2`, the bound on `P(A_1 ∩ ... ∩ A_N)` for events
/// with `P(A_i) <= 1 - omega` and pairwise correlations at most delta.
pub fn pairwise_bound(omega: f64, delta: f64, n: u64) -> Result<f64> {
    if !(omega > 0.0 && omega <= 1.0) || !(delta >= 0.0) || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < omega <= 1, delta >= 0, N >= 1; got {omega}, {delta}, {n}"
        )));
    }
    Ok((delta + 3.0 / n as f64) / (omega * omega))
}

/// Both tail inequalities for a non-negative variable, evaluated exactly on
/// the empirical distribution of a sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    /// `P(X <= T E X) >= 1 - 1/T`.
    pub chebyshev_ok: bool,
    /// `P(X >= E X / T) >= (1 - 1/T)^2 (E X)^2 / E X^2`.
    pub second_moment_ok: bool,
}

pub fn moment_check(samples: &[f64], t: f64) -> Result<MomentCheck> {
    if samples.is_empty() || !(t >= 1.0) || !t.is_finite() {
        return Err(Error::InvalidParameter("need a nonempty sample and T >= 1".into()));
    }
    let exact =
        |x: f64| BigRational::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("{x} is not finite")));
    let xs = samples
        .iter()
        .map(|&x| {
            if x < 0.0 {
                Err(Error::InvalidParameter(format!("negative sample {x}")))
            } else {
                exact(x)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let t = exact(t)?;
    let n = BigRational::from_integer(BigInt::from(xs.len()));
    let mean = xs.iter().fold(BigRational::zero(), |a, x| a + x) / &n;
    let second = xs.iter().fold(BigRational::zero(), |a, x| a + x * x) / &n;
    let frac = |k: usize| BigRational::from_integer(BigInt::from(k)) / &n;
    let one = BigRational::from_integer(1.into());
    let below = xs.iter().filter(|&x| *x <= &t * &mean).count();
    let chebyshev_ok = frac(below) >= &one - t.recip();
    let above = xs.iter().filter(|&x| *x >= &mean / &t).count();
    let second_moment_ok = if second.is_zero() {
        true
    } else {
        let factor = &one - t.recip();
        frac(above) >= &factor * &factor * &mean * &mean / &second
    };
    Ok(MomentCheck {
        chebyshev_ok,
        second_moment_ok,
    })
}

/// Exchangeable events driven by a shared coin: with probability `c` each
/// `A_i` occurs independently with probability `q1`, otherwise with `q0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedEvents {
    pub n: u64,
    pub c: f64,
    pub q0: f64,
    pub q1: f64,
}

impl PlantedEvents {
    /// `P(A_i)`.
    pub fn marginal(&self) -> f64 {
        self.c * self.q1 + (1.0 - self.c) * self.q0
    }

    /// `|P(A_i ∩ A_j) - P(A_i) P(A_j)| = c (1 - c) (q1 - q0)^2`.
    pub fn delta(&self) -> f64 {
        self.c * (1.0 - self.c) * (self.q1 - self.q0).powi(2)
    }

    pub fn omega(&self) -> f64 {
        1.0 - self.marginal()
    }

    /// Exact `P(A_1 ∩ ... ∩ A_N)`.
    pub fn intersection(&self) -> f64 {
        let n = self.n as i32;
        self.c * self.q1.powi(n) + (1.0 - self.c) * self.q0.powi(n)
    }

    /// Empirical `P(A_1 ∩ ... ∩ A_N)` over `trials` draws.
    pub fn simulate(&self, trials: u64, rng: &mut impl Rng) -> f64 {
        let mut hits = 0u64;
        for _ in 0..trials {
            let q = if rng.random_bool(self.c) { self.q1 } else { self.q0 };
            if (0..self.n).all(|_| rng.random_bool(q)) {
                hits += 1;
            }
        }
        hits as f64 / trials as f64
    }
}

pub fn ratio_to_f64(r: &Ratio<u64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{sanov, sl_order, DEFAULT_CAP};
    use proptest::{collection, prop_assert, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_selection() {
        assert_eq!(select_primes(4, 1, 3, 100).unwrap().primes, vec![3, 5, 7, 11]);
        assert_eq!(select_primes(3, 3, 7, 100).unwrap().primes, vec![7, 13, 19]);
        let b = select_primes(2, 4, 3, 100).unwrap();
        assert_eq!(b.primes, vec![5, 13]);
        assert_eq!(b.congruence, Some(4));
        assert_eq!(
            select_primes(10, 1, 3, 20).unwrap_err(),
            Error::SearchBoundExceeded {
                ceiling: 20,
                found: 7,
                wanted: 10
            }
        );
        let big = select_primes(100, 6, 5, 10_000).unwrap();
        assert!(big.primes.iter().all(|&p| is_prime(p) && p % 6 == 1 && p >= 5));
        assert!(big.primes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn power_densities() {
        assert_eq!(m_power_density(7, 1, 2, DEFAULT_CAP).unwrap(), Ratio::from_integer(1));
        // |SL_2(F_5)| = 120 is prime to 7
        assert_eq!(m_power_density(5, 7, 2, DEFAULT_CAP).unwrap(), Ratio::from_integer(1));
        let cubes = m_power_density(13, 3, 2, DEFAULT_CAP).unwrap();
        assert!(cubes <= Ratio::new(5, 6));
        assert!(cubes < Ratio::from_integer(1));
    }

    #[test]
    fn power_density_is_one_for_coprime_exponents() {
        for p in [3u64, 5, 7, 11] {
            let order = sl_order(p, 2) as u64;
            for m in 2..=30u64 {
                let g = num_integer::gcd(m, order);
                let dens = m_power_density(p, m, 2, DEFAULT_CAP).unwrap();
                if g == 1 {
                    assert_eq!(dens, Ratio::from_integer(1), "p = {p}, m = {m}");
                } else if p % m == 1 {
                    assert!(dens <= Ratio::new(5, 6), "p = {p}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn cycle_type_counts_for_p7() {
        assert_eq!(
            cycle_type_density(7, &[2], 2, DEFAULT_CAP).unwrap(),
            Ratio::new(126, 336)
        );
        assert_eq!(
            cycle_type_density(7, &[1, 1], 2, DEFAULT_CAP).unwrap(),
            Ratio::new(112, 336)
        );
        for p in [3u64, 5, 7, 11, 13] {
            let c = cycle_type_census(p, 2, DEFAULT_CAP).unwrap();
            let total: u64 = c.by_type.values().sum::<u64>() + c.not_regular_semisimple;
            assert_eq!(total, c.order);
        }
        let c3 = cycle_type_census(3, 3, DEFAULT_CAP).unwrap();
        assert_eq!(c3.by_type.values().sum::<u64>() + c3.not_regular_semisimple, 5616);
        // F_3 has two units, so three distinct eigenvalues cannot occur
        assert_eq!(c3.by_type.len(), 2);
    }

    #[test]
    fn pairwise_bound_values() {
        assert!((pairwise_bound(0.5, 0.01, 100).unwrap() - 0.16).abs() < 1e-15);
        assert!((pairwise_bound(1.0, 0.0, 1_000_000).unwrap() - 3e-6).abs() < 1e-18);
        assert!(pairwise_bound(0.0, 0.1, 10).is_err());
        assert!(pairwise_bound(0.5, -0.1, 10).is_err());
        assert!(pairwise_bound(0.5, 0.1, 0).is_err());
    }

    #[test]
    fn moment_examples() {
        let c = moment_check(&[2.5; 10], 2.0).unwrap();
        assert!(c.chebyshev_ok && c.second_moment_ok);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bern: Vec<f64> = (0..10_000).map(|_| f64::from(u8::from(rng.random_bool(0.3)))).collect();
        let c = moment_check(&bern, 2.0).unwrap();
        assert!(c.chebyshev_ok && c.second_moment_ok);
        // Markov is tight for {0, T E X}
        let tight = [0.0, 0.0, 0.0, 4.0];
        assert_eq!(moment_check(&tight, 4.0).unwrap().chebyshev_ok, true);
        assert!(moment_check(&[], 2.0).is_err());
        assert!(moment_check(&[1.0], 0.5).is_err());
        assert!(moment_check(&[-1.0], 2.0).is_err());
    }

    proptest! {
        #[test]
        fn moment_inequalities_are_universal(xs in collection::vec(0.0f64..1e6, 1..50), t in 1.0f64..20.0) {
            let c = moment_check(&xs, t).unwrap();
            prop_assert!(c.chebyshev_ok && c.second_moment_ok);
        }
    }

    fn setup(primes: &[u64]) -> (WalkSampler, PrimeBattery, Vec<PrimeTable>) {
        let battery = PrimeBattery::explicit(primes.to_vec()).unwrap();
        let tables = prime_tables(&sanov(), &battery, DEFAULT_CAP).unwrap();
        assert!(tables.iter().all(|t| t.surjective));
        (WalkSampler::new(sanov(), primes, 99).unwrap(), battery, tables)
    }

    #[test]
    fn empty_and_full_targets() {
        let (sampler, battery, tables) = setup(&[5, 7]);
        let mut sets = BTreeMap::new();
        for pt in &tables {
            let set = if pt.p == 5 {
                IdSet::from_ids(pt.table.order(), [])
            } else {
                IdSet::full(pt.table.order())
            };
            sets.insert(
                pt.p,
                ExcludedSet {
                    table: pt.table.clone(),
                    set,
                },
            );
        }
        let r = sieve_run(
            &sampler,
            &TargetPredicate::from_sets(sets),
            &battery,
            &[0, 3, 8],
            500,
            1.0,
        )
        .unwrap();
        assert!(r.estimate.iter().all(|&e| e == 0.0));
        let full: BTreeMap<_, _> = tables
            .iter()
            .map(|pt| {
                (
                    pt.p,
                    ExcludedSet {
                        table: pt.table.clone(),
                        set: IdSet::full(pt.table.order()),
                    },
                )
            })
            .collect();
        let r = sieve_run(
            &sampler,
            &TargetPredicate::from_sets(full),
            &battery,
            &[0, 3, 8],
            500,
            1.0,
        )
        .unwrap();
        assert!(r.estimate.iter().all(|&e| e == 1.0));
        assert_eq!(r.alpha_min, 0.0);
    }

    #[test]
    fn errors() {
        let (sampler, _, tables) = setup(&[5, 7]);
        let target = TargetPredicate::build(TargetKind::TraceValue { t: 0 }, &tables).unwrap();
        let empty = PrimeBattery {
            primes: vec![],
            congruence: None,
            p_min: 2,
            source_note: String::new(),
        };
        assert_eq!(
            sieve_run(&sampler, &target, &empty, &[1], 10, 1.0).unwrap_err(),
            Error::EmptyBattery
        );
        let wider = PrimeBattery::explicit(vec![5, 7, 11]).unwrap();
        assert_eq!(
            sieve_run(&sampler, &target, &wider, &[1], 10, 1.0).unwrap_err(),
            Error::PredicateMissingPrime(11)
        );
        assert!(TargetPredicate::build(TargetKind::MPower { m: 1 }, &tables).is_err());
        assert!(TargetPredicate::build(TargetKind::MissingCycleType { partition: vec![1] }, &tables).is_err());
        assert!(PrimeBattery::explicit(vec![5, 5]).is_err());
        assert_eq!(PrimeBattery::explicit(vec![9]).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn custom_subset_and_power_unipotent() {
        let (_, _, tables) = setup(&[5]);
        let mut sets = BTreeMap::new();
        sets.insert(5, vec![vec![1, 0, 0, 1], vec![1, 2, 0, 1]]);
        let t = TargetPredicate::build(TargetKind::CustomSubset { sets }, &tables).unwrap();
        assert_eq!(t.sets[&5].set.len(), 2);
        let pu = TargetPredicate::build(TargetKind::PowerUnipotent, &tables).unwrap();
        // identity, -identity, and the p^2 - 1 nontrivial unipotents times +-1
        assert_eq!(pu.sets[&5].set.len(), 2 * 25);
    }

    #[test]
    fn adding_a_prime_never_increases_hits() {
        let primes = [5u64, 7, 11, 13];
        let (sampler, _, tables) = setup(&primes);
        let target = TargetPredicate::build(TargetKind::MissingCycleType { partition: vec![2] }, &tables).unwrap();
        let schedule: Vec<usize> = (0..=16).collect();
        let mut prev: Option<Vec<u64>> = None;
        for k in 1..=primes.len() {
            let battery = PrimeBattery::explicit(primes[..k].to_vec()).unwrap();
            let r = sieve_run(&sampler, &target, &battery, &schedule, 5_000, 1.0).unwrap();
            if let Some(p) = &prev {
                assert!(r.hits.iter().zip(p).all(|(a, b)| a <= b));
            }
            prev = Some(r.hits);
        }
    }

    #[test]
    fn independent_primes_multiply() {
        let (sampler, battery, tables) = setup(&[5, 7]);
        let target = TargetPredicate::build(TargetKind::TraceValue { t: 1 }, &tables).unwrap();
        let r = sieve_run(&sampler, &target, &battery, &[80, 81], 200_000, 1.0).unwrap();
        let product: f64 = r.densities.iter().map(|d| d.density).product();
        for i in 0..2 {
            assert!(r.ci_lo[i] <= product && product <= r.ci_hi[i], "{r:?}");
        }
    }

    #[test]
    fn planted_events_respect_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let ev = PlantedEvents {
                n: rng.random_range(2..40),
                c: rng.random_range(0.0..0.5),
                q0: rng.random_range(0.1..0.9),
                q1: rng.random_range(0.1..0.95),
            };
            let bound = pairwise_bound(ev.omega(), ev.delta(), ev.n).unwrap();
            assert!(ev.intersection() <= bound);
            assert!(ev.simulate(500, &mut rng) <= bound);
        }
    }
}
