//! One runner per subcommand. Runners only compute; files are written by
//! the caller once everything has succeeded.

use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Generators, MethodChoice, SetSpec, TargetSpec};
use super::output::{fmt_f64, OutputFile, RunManifest, StageTiming};
use crate::approx::{approx_report, growth_scan, larsen_pink_ratio, ApproxReport, FiniteSubset, GrowthScan, Variety};
use crate::error::{Error, Result};
use crate::group::{cycle, is_prime, sl_table, standard_subgroup, GenSet, GroupElement, GroupTable, SubgroupKind};
use crate::sieve::{prime_tables, select_primes, sieve_run, PrimeBattery, SieveReport, TargetPredicate};
use crate::spectral::{dense_report, iterative_report, CayleyOperator, SpectralReport, DENSE_CAP};
use crate::walk::{
    monte_carlo_walk, nonconcentration_fit, strong_approx_scan, DecayFit, ScanEntry, ScanOutcome, Target, WalkSampler,
    WalkStats,
};

/// What a runner produced.
#[derive(Debug, Clone, Default)]
pub struct Execution {
    pub files: Vec<OutputFile>,
    /// False when an experiment-level check failed.
    pub verified: bool,
    pub warnings: Vec<String>,
    pub stages: Vec<StageTiming>,
}

struct Stages {
    start: Instant,
    done: Vec<StageTiming>,
}

impl Stages {
    fn new() -> Self {
        Self {
            start: Instant::now(),
            done: Vec::new(),
        }
    }

    fn mark(&mut self, stage: &str) {
        let now = Instant::now();
        self.done.push(StageTiming {
            stage: stage.into(),
            millis: (now - self.start).as_secs_f64() * 1e3,
        });
        self.start = now;
    }
}

fn missing(block: &str) -> Error {
    Error::InvalidParameter(format!("config needs a [{block}] table"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub p: u64,
    pub group_order: usize,
    pub report: SpectralReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapOutput {
    pub rows: Vec<GapRow>,
    pub warnings: Vec<String>,
}

fn spectral<E: GroupElement>(
    table: &GroupTable<E>,
    gens: &GenSet<E>,
    method: MethodChoice,
    tol: f64,
    max_iter: usize,
) -> Result<SpectralReport> {
    let op = CayleyOperator::new(table, gens)?;
    let mut report = match method {
        MethodChoice::Dense => dense_report(&op, DENSE_CAP)?,
        MethodChoice::Auto if op.order() <= DENSE_CAP => dense_report(&op, DENSE_CAP)?,
        _ => iterative_report(&op, tol, max_iter),
    };
    report.spectrum = None;
    Ok(report)
}

pub fn run_gap(cfg: &ExperimentConfig, base: &Path) -> Result<Execution> {
    let params = cfg.gap.clone().ok_or_else(|| missing("gap"))?;
    let mut stages = Stages::new();
    let mut rows = Vec::new();
    match cfg.resolve_generators(base)? {
        Generators::Cyclic(n) => {
            let (table, gens) = cycle(n);
            let gens = gens.lazy(params.lazy);
            let report = spectral(&table, &gens, params.method, params.tol, params.max_iter)?;
            rows.push(GapRow {
                p: n,
                group_order: table.order(),
                report,
            });
        }
        Generators::Matrices(gens) => {
            if params.primes.is_empty() {
                return Err(Error::InvalidParameter("gap needs at least one prime".into()));
            }
            let gens = gens.lazy(params.lazy);
            for &p in &params.primes {
                let (table, reduced) = sl_table(&gens, p, params.cap)?;
                let report = spectral(&table, &reduced, params.method, params.tol, params.max_iter)?;
                rows.push(GapRow {
                    p,
                    group_order: table.order(),
                    report,
                });
            }
        }
    }
    stages.mark("compute");
    let mut warnings = Vec::new();
    for r in &rows {
        if !params.lazy && r.report.alpha_min < -1.0 + 1e-6 {
            warnings.push(format!(
                "p = {}: alpha_min = {} is at -1 (bipartite graph); set lazy = true for a walk that mixes",
                r.p, r.report.alpha_min
            ));
        }
        if !r.report.converged {
            warnings.push(format!("p = {}: iteration did not converge", r.p));
        }
    }
    let csv_rows = rows
        .iter()
        .map(|r| {
            Ok(vec![
                r.p.to_string(),
                r.group_order.to_string(),
                fmt_f64(r.report.lambda1)?,
                fmt_f64(r.report.alpha1)?,
                fmt_f64(r.report.alpha_min)?,
                r.report.method.as_str().to_string(),
                r.report.iterations.to_string(),
                fmt_f64(r.report.residual)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let verified = rows.iter().all(|r| r.report.converged);
    let files = vec![
        OutputFile::csv(
            "gap.csv",
            &[
                "p",
                "group_order",
                "lambda1",
                "alpha1",
                "alpha_min",
                "method",
                "iterations",
                "residual",
            ],
            &csv_rows,
        )?,
        OutputFile::json(
            "gap.json",
            &GapOutput {
                rows,
                warnings: warnings.clone(),
            },
        )?,
    ];
    stages.mark("serialize");
    Ok(Execution {
        files,
        verified,
        warnings,
        stages: stages.done,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetFit {
    pub target: String,
    pub prime: u64,
    pub fit: Option<DecayFit>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkOutput {
    pub seed: u64,
    pub stats: WalkStats,
    pub fits: Vec<TargetFit>,
}

fn build_target(spec: &TargetSpec) -> Target {
    match *spec {
        TargetSpec::Identity { prime } => Target::identity(prime),
        TargetSpec::Borel { prime } => Target::subgroup(prime, SubgroupKind::Borel),
        TargetSpec::Torus { prime } => Target::subgroup(prime, SubgroupKind::Torus),
        TargetSpec::Monomial { prime } => Target::subgroup(prime, SubgroupKind::Monomial),
        TargetSpec::Trace { prime, value } => Target::trace_value(prime, value),
    }
}

pub fn run_walk(cfg: &ExperimentConfig, base: &Path) -> Result<Execution> {
    let params = cfg.walk.clone().ok_or_else(|| missing("walk"))?;
    let seed = cfg.require_seed()?;
    let schedule = params.schedule.values()?;
    let gens = cfg.matrix_generators(base)?.lazy(params.lazy);
    let mut primes: Vec<u64> = params
        .primes
        .iter()
        .copied()
        .chain(params.targets.iter().map(TargetSpec::prime))
        .collect();
    primes.sort_unstable();
    primes.dedup();
    let mut stages = Stages::new();
    let sampler = WalkSampler::new(gens, &primes, seed)?;
    let targets: Vec<Target> = params.targets.iter().map(build_target).collect();
    stages.mark("setup");
    let stats = monte_carlo_walk(&sampler, &schedule, params.samples, &targets)?;
    stages.mark("sample");
    let fits = if params.fit {
        (0..targets.len())
            .map(|i| {
                let (fit, note) = match nonconcentration_fit(&stats, i) {
                    Ok(f) => (Some(f), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                TargetFit {
                    target: targets[i].name().to_string(),
                    prime: targets[i].prime(),
                    fit,
                    note,
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut rows = Vec::new();
    for (si, &n) in stats.n_schedule.iter().enumerate() {
        for t in &stats.targets {
            rows.push(vec![
                n.to_string(),
                t.name.clone(),
                t.prime.to_string(),
                fmt_f64(t.frequency[si])?,
                fmt_f64(t.ci_lo[si])?,
                fmt_f64(t.ci_hi[si])?,
                stats.samples.to_string(),
            ]);
        }
    }
    let files = vec![
        OutputFile::csv(
            "walk.csv",
            &["n", "target", "prime", "frequency", "ci_lo", "ci_hi", "samples"],
            &rows,
        )?,
        OutputFile::json("walk.json", &WalkOutput { seed, stats, fits })?,
    ];
    stages.mark("serialize");
    Ok(Execution {
        files,
        verified: true,
        warnings: Vec::new(),
        stages: stages.done,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LarsenPinkRow {
    pub variety: Variety,
    pub dim_v: usize,
    pub dim_g: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxOutput {
    pub prime: u64,
    pub group_order: usize,
    pub set_ids: Vec<u32>,
    pub report: ApproxReport,
    pub growth: GrowthScan,
    pub larsen_pink: Vec<LarsenPinkRow>,
}

pub fn run_approx(cfg: &ExperimentConfig, base: &Path) -> Result<Execution> {
    let params = cfg.approx.clone().ok_or_else(|| missing("approx"))?;
    let gens = cfg.matrix_generators(base)?;
    let mut stages = Stages::new();
    let (table, reduced) = sl_table(&gens, params.prime, params.cap)?;
    let a = match &params.set {
        SetSpec::Subgroup { name } => FiniteSubset::from_set(&table, standard_subgroup(&table, name)?),
        SetSpec::Random { size } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.require_seed()?);
            FiniteSubset::random_symmetric(&table, *size, &mut rng)?
        }
        SetSpec::Ids { path } => {
            let path = base.join(path);
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let ids: Vec<u32> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            FiniteSubset::new(&table, ids)?
        }
        SetSpec::Generators => {
            let mut ids: Vec<u32> = reduced
                .members()
                .iter()
                .map(|g| table.id_of(g).expect("generator in its own closure"))
                .collect();
            ids.push(table.identity());
            FiniteSubset::new(&table, ids)?
        }
        SetSpec::Whole => FiniteSubset::whole(&table),
    };
    stages.mark("setup");
    let report = approx_report(&a)?;
    let growth = growth_scan(&a, params.max_power)?;
    let larsen_pink = params
        .varieties
        .iter()
        .map(|v| {
            Ok(LarsenPinkRow {
                variety: v.variety.clone(),
                dim_v: v.dim_v,
                dim_g: v.dim_g,
                ratio: larsen_pink_ratio(&a, &v.variety, v.dim_v, v.dim_g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    stages.mark("compute");
    let out = ApproxOutput {
        prime: params.prime,
        group_order: table.order(),
        set_ids: a.ids().to_vec(),
        report,
        growth,
        larsen_pink,
    };
    let files = vec![OutputFile::json("approx.json", &out)?];
    stages.mark("serialize");
    Ok(Execution {
        files,
        verified: true,
        warnings: Vec::new(),
        stages: stages.done,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SieveOutput {
    pub seed: u64,
    pub battery: PrimeBattery,
    pub report: SieveReport,
}

pub fn run_sieve(cfg: &ExperimentConfig, base: &Path) -> Result<Execution> {
    let params = cfg.sieve.clone().ok_or_else(|| missing("sieve"))?;
    let seed = cfg.require_seed()?;
    let schedule = params.schedule.values()?;
    let gens = cfg.matrix_generators(base)?;
    let b = &params.battery;
    let mut stages = Stages::new();
    let battery = select_primes(b.count, b.m, b.p_min, b.ceiling)?;
    let tables = prime_tables(&gens, &battery, params.cap)?;
    if let Some(bad) = tables.iter().find(|t| !t.surjective) {
        return Err(Error::Verification(format!(
            "generators are not surjective mod {} (image of order {})",
            bad.p,
            bad.table.order()
        )));
    }
    let target = TargetPredicate::build(params.target.clone(), &tables)?;
    let sampler = WalkSampler::new(gens, &battery.primes, seed)?;
    stages.mark("setup");
    let report = sieve_run(&sampler, &target, &battery, &schedule, params.samples, params.b_hat)?;
    stages.mark("sample");
    let verified = report.densities.iter().all(|d| (0.0..=1.0).contains(&d.density));
    let rows = (0..report.n_schedule.len())
        .map(|i| {
            Ok(vec![
                report.n_schedule[i].to_string(),
                fmt_f64(report.estimate[i])?,
                fmt_f64(report.ci_lo[i])?,
                fmt_f64(report.ci_hi[i])?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let files = vec![
        OutputFile::csv("sieve.csv", &["n", "estimate", "ci_lo", "ci_hi"], &rows)?,
        OutputFile::json("sieve.json", &SieveOutput { seed, battery, report })?,
    ];
    stages.mark("serialize");
    Ok(Execution {
        files,
        verified,
        warnings: Vec::new(),
        stages: stages.done,
    })
}

pub fn run_strongapprox(cfg: &ExperimentConfig, base: &Path) -> Result<Execution> {
    let params = cfg.strongapprox.clone().ok_or_else(|| missing("strongapprox"))?;
    if params.from > params.to {
        return Err(Error::InvalidParameter("empty prime range".into()));
    }
    let gens = cfg.matrix_generators(base)?;
    let mut stages = Stages::new();
    let primes: Vec<u64> = (params.from..=params.to).filter(|&p| is_prime(p)).collect();
    let scan: Vec<ScanEntry> = strong_approx_scan(&gens, &primes, params.cap)?;
    stages.mark("compute");
    let rows = scan
        .iter()
        .map(|e| {
            let (status, order, note) = match &e.outcome {
                ScanOutcome::Surjective => ("surjective", String::new(), String::new()),
                ScanOutcome::Proper { order } => ("proper", order.to_string(), String::new()),
                ScanOutcome::Skipped { reason } => ("skipped", String::new(), reason.clone()),
            };
            Ok(vec![e.p.to_string(), status.into(), order, fmt_f64(e.m_s)?, note])
        })
        .collect::<Result<Vec<_>>>()?;
    let files = vec![
        OutputFile::csv("strongapprox.csv", &["p", "status", "order", "m_s", "note"], &rows)?,
        OutputFile::json("strongapprox.json", &scan)?,
    ];
    stages.mark("serialize");
    Ok(Execution {
        files,
        verified: true,
        warnings: Vec::new(),
        stages: stages.done,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOutput {
    pub command: String,
    pub version: String,
    pub config_hash: String,
    pub files: usize,
    pub problems: Vec<(String, String)>,
}

/// Re-reads a manifest and checks every recorded digest.
pub fn run_report(cfg: &ExperimentConfig, base: &Path, out_dir: &Path) -> Result<Execution> {
    let dir = cfg
        .report
        .as_ref()
        .and_then(|r| r.dir.as_ref())
        .map(|d| base.join(d))
        .unwrap_or_else(|| out_dir.to_path_buf());
    let manifest = RunManifest::load(&dir)?;
    let problems = manifest.verify(&dir);
    let out = ReportOutput {
        command: manifest.command.clone(),
        version: manifest.version.clone(),
        config_hash: manifest.config_hash.clone(),
        files: manifest.outputs.len(),
        problems,
    };
    Ok(Execution {
        verified: out.problems.is_empty(),
        files: vec![OutputFile::json("report.json", &out)?],
        warnings: Vec::new(),
        stages: Vec::new(),
    })
}
