//! Monte Carlo walks on finitely generated matrix groups, tracked through
//! their reductions modulo a set of primes.

use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::matfp::{mul_entries, Entries};
use crate::group::{
    enumerate_group, heights, reduce_mod, GenSet, GroupTable, IdSet, IntMat, MatFp, PrimeModulus, SubgroupKind,
};
use crate::numeric::{least_squares, wilson, LineFit, Z_99};

/// Random walk driver: generators over Q, a seed, and the primes whose
/// residues are tracked.
///
/// Sample `i` draws its steps from a ChaCha8 stream keyed by `(seed, i)`, so
/// every sample is reproducible on its own and samples can run in any order.
#[derive(Debug, Clone)]
pub struct WalkSampler {
    gens: GenSet<IntMat>,
    seed: u64,
    moduli: Vec<PrimeModulus>,
    /// `reduced[j][s]`: generator s modulo the j-th prime.
    reduced: Vec<Vec<Entries>>,
}

impl WalkSampler {
    pub fn new(gens: GenSet<IntMat>, primes: &[u64], seed: u64) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let d = gens.dim();
        let mut moduli = Vec::with_capacity(primes.len());
        let mut reduced = Vec::with_capacity(primes.len());
        for &p in primes {
            if moduli.iter().any(|m: &PrimeModulus| m.p() as u64 == p) {
                continue;
            }
            let modulus = PrimeModulus::new(p, d)?;
            let gs = gens
                .members()
                .iter()
                .map(|g| Ok(reduce_mod(g, modulus)?.entries().iter().copied().collect()))
                .collect::<Result<Vec<Entries>>>()?;
            moduli.push(modulus);
            reduced.push(gs);
        }
        Ok(Self {
            gens,
            seed,
            moduli,
            reduced,
        })
    }

    pub fn gens(&self) -> &GenSet<IntMat> {
        &self.gens
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn primes(&self) -> Vec<u64> {
        self.moduli.iter().map(|m| m.p() as u64).collect()
    }

    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.moduli.iter().position(|m| m.p() as u64 == p)
    }

    /// A fresh walk for sample `index`, positioned at the identity.
    pub fn path(&self, index: u64) -> SamplePath<'_> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let residues = self
            .moduli
            .iter()
            .map(|m| MatFp::identity(*m).entries().iter().copied().collect())
            .collect();
        SamplePath {
            sampler: self,
            rng,
            word: Vec::new(),
            residues,
            positions: vec![0; self.moduli.len()],
        }
    }
}

/// One sample's walk: the drawn word and, per prime, the residue of a prefix
/// of it. Residues catch up on demand, one multiplication per step, so
/// primes that are never queried cost nothing.
pub struct SamplePath<'a> {
    sampler: &'a WalkSampler,
    rng: ChaCha8Rng,
    /// Generator index per step; `k` or more marks a lazy step.
    word: Vec<usize>,
    residues: Vec<Entries>,
    positions: Vec<usize>,
}

impl SamplePath<'_> {
    /// Draws one step, `X <- s X`, and returns the generator index used
    /// (`None` for a lazy step that stayed put).
    pub fn step(&mut self) -> Option<usize> {
        let k = self.sampler.gens.len();
        let draw = if self.sampler.gens.is_lazy() {
            self.rng.random_range(0..2 * k)
        } else {
            self.rng.random_range(0..k)
        };
        self.word.push(draw);
        (draw < k).then_some(draw)
    }

    pub fn steps(&self) -> usize {
        self.word.len()
    }

    /// Residue of the current product at the j-th registered prime.
    pub fn residue(&mut self, j: usize) -> MatFp {
        let modulus = self.sampler.moduli[j];
        let (d, p) = (modulus.d(), modulus.p() as u64);
        let gens = &self.sampler.reduced[j];
        let res = &mut self.residues[j];
        for &g in &self.word[self.positions[j]..] {
            if let Some(g) = gens.get(g) {
                left_mul(g, res, d, p);
            }
        }
        self.positions[j] = self.word.len();
        MatFp::from_reduced(modulus, res.clone())
    }
}

fn left_mul(g: &[u32], x: &mut Entries, d: usize, p: u64) {
    if d == 2 {
        let (a, b, c, e) = (g[0] as u64, g[1] as u64, g[2] as u64, g[3] as u64);
        let (x0, x1, x2, x3) = (x[0] as u64, x[1] as u64, x[2] as u64, x[3] as u64);
        x[0] = ((a * x0 + b * x2) % p) as u32;
        x[1] = ((a * x1 + b * x3) % p) as u32;
        x[2] = ((c * x0 + e * x2) % p) as u32;
        x[3] = ((c * x1 + e * x3) % p) as u32;
    } else {
        *x = mul_entries(g, x, d, p);
    }
}

type Membership = Arc<dyn Fn(&MatFp) -> bool + Send + Sync>;

/// A named set of residues at one prime.
#[derive(Clone)]
pub struct Target {
    name: String,
    prime: u64,
    test: Membership,
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Target({} mod {})", self.name, self.prime)
    }
}

impl Target {
    pub fn new(name: impl Into<String>, prime: u64, test: impl Fn(&MatFp) -> bool + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            prime,
            test: Arc::new(test),
        }
    }

    pub fn identity(prime: u64) -> Self {
        Self::new("identity", prime, |m: &MatFp| {
            m.entries().iter().enumerate().all(|(i, &e)| {
                let d = m.d();
                e == u32::from(i / d == i % d)
            })
        })
    }

    pub fn subgroup(prime: u64, kind: SubgroupKind) -> Self {
        let name = match &kind {
            SubgroupKind::Borel => "borel".to_string(),
            SubgroupKind::Torus => "torus".to_string(),
            SubgroupKind::Monomial => "monomial".to_string(),
            SubgroupKind::LineStabilizer(v) => format!("line_stabilizer{v:?}"),
        };
        Self::new(name, prime, move |m: &MatFp| kind.contains(m))
    }

    pub fn trace_value(prime: u64, t: i64) -> Self {
        let r = t.rem_euclid(prime as i64) as u32;
        Self::new(format!("trace={t}"), prime, move |m: &MatFp| m.trace() == r)
    }

    /// Membership in an id set of an enumerated table.
    pub fn in_set(name: impl Into<String>, table: Arc<GroupTable<MatFp>>, set: Arc<IdSet>) -> Self {
        let prime = table.element(0).p() as u64;
        Self::new(name, prime, move |m: &MatFp| {
            table.id_of(m).is_some_and(|id| set.contains(id))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn contains(&self, m: &MatFp) -> bool {
        (self.test)(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetStats {
    pub name: String,
    pub prime: u64,
    pub hits: Vec<u64>,
    pub frequency: Vec<f64>,
    /// Wilson 99% interval bounds.
    pub ci_lo: Vec<f64>,
    pub ci_hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkStats {
    pub n_schedule: Vec<usize>,
    pub samples: u64,
    pub targets: Vec<TargetStats>,
}

fn check_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "schedule must be non-empty and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Runs `samples` independent walks and counts, for every target and every
/// scheduled time, how many walks sit in the target. Counts are integers
/// merged across workers, so results do not depend on the thread count.
pub fn monte_carlo_walk(
    sampler: &WalkSampler,
    schedule: &[usize],
    samples: u64,
    targets: &[Target],
) -> Result<WalkStats> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    check_schedule(schedule)?;
    let slots = targets
        .iter()
        .map(|t| {
            sampler
                .prime_index(t.prime)
                .ok_or(Error::PredicateMissingPrime(t.prime))
        })
        .collect::<Result<Vec<_>>>()?;
    let cells = targets.len() * schedule.len();
    let counts = (0..samples)
        .into_par_iter()
        .fold(
            || vec![0u64; cells],
            |mut acc, i| {
                let mut path = sampler.path(i);
                for (si, &n) in schedule.iter().enumerate() {
                    while path.steps() < n {
                        path.step();
                    }
                    for (ti, t) in targets.iter().enumerate() {
                        if t.contains(&path.residue(slots[ti])) {
                            acc[ti * schedule.len() + si] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; cells],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let targets = targets
        .iter()
        .enumerate()
        .map(|(ti, t)| {
            let hits = counts[ti * schedule.len()..(ti + 1) * schedule.len()].to_vec();
            let (ci_lo, ci_hi) = hits.iter().map(|&h| wilson(h, samples, Z_99)).unzip();
            TargetStats {
                name: t.name.clone(),
                prime: t.prime,
                frequency: hits.iter().map(|&h| h as f64 / samples as f64).collect(),
                hits,
                ci_lo,
                ci_hi,
            }
        })
        .collect();
    Ok(WalkStats {
        n_schedule: schedule.to_vec(),
        samples,
        targets,
    })
}

/// Exponential decay fit `freq ~ A e^{-c n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c: f64,
    pub r_squared: f64,
    pub intercept: f64,
    /// First and last n used.
    pub window: (usize, usize),
    pub points: usize,
}

/// Smallest number of usable points for a decay fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Monte Carlo noise floor `5 / sqrt(samples)`.
pub fn noise_floor(samples: u64) -> f64 {
    5.0 / (samples as f64).sqrt()
}

/// Least-squares fit of `ln freq` against n over the points strictly above
/// `floor`.
pub fn decay_fit(ns: &[usize], freqs: &[f64], floor: f64) -> Result<DecayFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = ns
        .iter()
        .zip(freqs)
        .filter(|(_, &f)| f > floor && f > 0.0)
        .map(|(&n, &f)| (n as f64, f.ln()))
        .unzip();
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientSignal {
            usable: xs.len(),
            required: MIN_FIT_POINTS,
        });
    }
    let LineFit {
        slope,
        intercept,
        r_squared,
    } = least_squares(&xs, &ys).ok_or_else(|| Error::InvalidParameter("degenerate fit".into()))?;
    Ok(DecayFit {
        c: -slope,
        r_squared,
        intercept,
        window: (xs[0] as usize, *xs.last().unwrap() as usize),
        points: xs.len(),
    })
}

/// Decay fit for one target of a walk run, above the noise floor.
pub fn nonconcentration_fit(stats: &WalkStats, target: usize) -> Result<DecayFit> {
    let t = stats
        .targets
        .get(target)
        .ok_or_else(|| Error::InvalidParameter(format!("no target {target}")))?;
    decay_fit(&stats.n_schedule, &t.frequency, noise_floor(stats.samples))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanOutcome {
    Surjective,
    Proper {
        order: usize,
    },
    /// Not verified: the image exceeded the cap or the prime divides a denominator.
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub p: u64,
    pub outcome: ScanOutcome,
    /// Largest naive height among the generators.
    pub m_s: f64,
}

/// Enumerates the image of `gens` modulo each prime and compares its order
/// with |SL_d(F_p)|.
pub fn strong_approx_scan(gens: &GenSet<IntMat>, primes: &[u64], cap: usize) -> Result<Vec<ScanEntry>> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let m_s = gens
        .members()
        .iter()
        .map(|g| heights(g).naive.to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    primes
        .iter()
        .map(|&p| {
            let modulus = PrimeModulus::new(p, gens.dim())?;
            let outcome = match gens.reduce(modulus) {
                Err(Error::DenominatorDivisibleByP(_)) => ScanOutcome::Skipped {
                    reason: format!("{p} divides a denominator"),
                },
                Err(e) => return Err(e),
                Ok(reduced) => match enumerate_group(&reduced, cap) {
                    Ok(table) if table.order() as u128 == modulus.sl_order() => ScanOutcome::Surjective,
                    Ok(table) => ScanOutcome::Proper { order: table.order() },
                    Err(Error::CapExceeded { cap, .. }) => ScanOutcome::Skipped {
                        reason: format!("image exceeds cap {cap}; surjectivity not verified"),
                    },
                    Err(e) => return Err(e),
                },
            };
            Ok(ScanEntry { p, outcome, m_s })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{sanov, sl_table, DEFAULT_CAP};

    #[test]
    fn time_zero_is_identity() {
        let s = WalkSampler::new(sanov(), &[5, 7], 1).unwrap();
        let stats = monte_carlo_walk(&s, &[0, 1], 1000, &[Target::identity(5), Target::identity(7)]).unwrap();
        for t in &stats.targets {
            assert_eq!(t.frequency[0], 1.0);
            assert_eq!(t.frequency[1], 0.0);
        }
    }

    #[test]
    fn unregistered_prime_is_rejected() {
        let s = WalkSampler::new(sanov(), &[5], 7).unwrap();
        assert_eq!(
            monte_carlo_walk(&s, &[1], 10, &[Target::identity(7)]).unwrap_err(),
            Error::PredicateMissingPrime(7)
        );
        assert!(monte_carlo_walk(&s, &[3, 2], 10, &[]).is_err());
    }

    #[test]
    fn residues_match_exact_products() {
        let gens = GenSet::symmetrized(vec![
            IntMat::from_ints(2, &[1, 2, 0, 1]).unwrap(),
            IntMat::from_ints(2, &[1, 0, 2, 1]).unwrap(),
            IntMat::from_fractions(2, &[(2, 1), (0, 1), (0, 1), (1, 2)]).unwrap(),
        ])
        .unwrap();
        let primes = [3, 5, 101, 65_537];
        let s = WalkSampler::new(gens.clone(), &primes, 9).unwrap();
        for i in 0..200 {
            let mut path = s.path(i);
            let mut exact = IntMat::identity(2);
            for _ in 0..12 {
                let g = path.step().unwrap();
                exact = gens.members()[g].mul(&exact);
                for (j, &p) in primes.iter().enumerate() {
                    let m = PrimeModulus::new(p, 2).unwrap();
                    assert_eq!(path.residue(j), reduce_mod(&exact, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn lazy_walk_idles_about_half_the_time() {
        let s = WalkSampler::new(sanov().lazy(true), &[5], 3).unwrap();
        let mut path = s.path(0);
        let idle = (0..10_000).filter(|_| path.step().is_none()).count();
        assert!((4700..5300).contains(&idle), "{idle}");
    }

    #[test]
    fn frequencies_match_exact_convolution() {
        let schedule: Vec<usize> = (1..=20).collect();
        let mut targets = Vec::new();
        let mut exact = Vec::new();
        for p in [5, 7] {
            let (t, g) = sl_table(&sanov(), p, DEFAULT_CAP).unwrap();
            let op = crate::spectral::CayleyOperator::new(&t, &g).unwrap();
            let dists: Vec<_> = crate::walk::exact::Powers::new(&op, 0).take(21).collect();
            let ts = [
                Target::subgroup(p, SubgroupKind::Borel),
                Target::subgroup(p, SubgroupKind::Torus),
                Target::trace_value(p, 0),
                Target::trace_value(p, 1),
            ];
            for target in ts {
                let set = IdSet::from_predicate(&t, |m| target.contains(m));
                exact.push(dists.iter().map(|d| d.mass_of(&set)).collect::<Vec<_>>());
                targets.push(target);
            }
        }
        let mut cells = 0;
        let mut inside = 0;
        for seed in [2024, 2025, 2026] {
            let s = WalkSampler::new(sanov(), &[5, 7], seed).unwrap();
            let stats = monte_carlo_walk(&s, &schedule, 1_000_000, &targets).unwrap();
            for (ts, ex) in stats.targets.iter().zip(&exact) {
                for (i, &n) in schedule.iter().enumerate() {
                    cells += 1;
                    inside += usize::from(ts.ci_lo[i] <= ex[n] && ex[n] <= ts.ci_hi[i]);
                }
            }
        }
        assert!(inside as f64 >= 0.97 * cells as f64, "{inside}/{cells}");
    }

    #[test]
    fn worker_count_does_not_change_counts() {
        let s = WalkSampler::new(sanov(), &[7, 11], 77).unwrap();
        let targets = [Target::trace_value(7, 0), Target::subgroup(11, SubgroupKind::Borel)];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_walk(&s, &[2, 5, 9], 20_000, &targets).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(8));
    }

    #[test]
    fn planted_decay_is_recovered() {
        let ns: Vec<usize> = (0..30).collect();
        let f: Vec<f64> = ns.iter().map(|&n| (-0.3 * n as f64).exp()).collect();
        let fit = decay_fit(&ns, &f, 0.0).unwrap();
        assert!((fit.c - 0.3).abs() < 1e-6);
        assert!(fit.r_squared > 0.999_999);
        assert_eq!(
            decay_fit(&ns[..3], &f[..3], 0.0).unwrap_err(),
            Error::InsufficientSignal { usable: 3, required: 4 }
        );
        assert!(decay_fit(&ns, &f, 0.5).is_err());
    }

    #[test]
    fn scan_small_primes() {
        let scan = strong_approx_scan(&sanov(), &[2, 3, 5, 7], DEFAULT_CAP).unwrap();
        assert_eq!(scan[0].outcome, ScanOutcome::Proper { order: 1 });
        assert!(scan[1..].iter().all(|e| e.outcome == ScanOutcome::Surjective));
        assert_eq!(scan[0].m_s, 2.0);
        let borel_only = GenSet::symmetrized(vec![IntMat::from_ints(2, &[1, 1, 0, 1]).unwrap()]).unwrap();
        for e in strong_approx_scan(&borel_only, &[3, 5, 7, 11], DEFAULT_CAP).unwrap() {
            assert_eq!(e.outcome, ScanOutcome::Proper { order: e.p as usize });
        }
        let capped = strong_approx_scan(&sanov(), &[7], 100).unwrap();
        assert!(matches!(capped[0].outcome, ScanOutcome::Skipped { .. }));
    }
}
