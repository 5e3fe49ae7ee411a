//! TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::approx::Variety;
use crate::error::{Error, Result};
use crate::group::{elementary_generators, io, sanov, GenSet, IntMat, SubgroupKind, DEFAULT_CAP};
use crate::sieve::TargetKind;
use crate::spectral::{DEFAULT_MAX_ITER, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Gap,
    Walk,
    Approx,
    Sieve,
    Strongapprox,
    Report,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Gap => "gap",
            Command::Walk => "walk",
            Command::Approx => "approx",
            Command::Sieve => "sieve",
            Command::Strongapprox => "strongapprox",
            Command::Report => "report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Must agree with the subcommand when given.
    pub command: Option<Command>,
    pub seed: Option<u64>,
    /// A preset (`sanov`, `elementary2`, `elementary3`, `cyclic:N`) or a
    /// path to a generator JSON file.
    #[serde(default = "default_generators")]
    pub generators: String,
    pub out_dir: Option<PathBuf>,
    pub gap: Option<GapParams>,
    pub walk: Option<WalkParams>,
    pub approx: Option<ApproxParams>,
    pub sieve: Option<SieveParams>,
    pub strongapprox: Option<ScanParams>,
    pub report: Option<ReportParams>,
}

fn default_generators() -> String {
    "sanov".into()
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapParams {
    /// Primes for matrix generators; ignored by the cyclic preset.
    #[serde(default)]
    pub primes: Vec<u64>,
    #[serde(default)]
    pub method: MethodChoice,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub lazy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    Arithmetic {
        start: usize,
        step: usize,
        end: usize,
    },
    /// `start, start*ratio, ...` rounded to integers, duplicates dropped.
    Geometric {
        start: usize,
        ratio: f64,
        end: usize,
    },
    List {
        values: Vec<usize>,
    },
}

impl Schedule {
    pub fn values(&self) -> Result<Vec<usize>> {
        let v: Vec<usize> = match self {
            Schedule::Arithmetic { start, step, end } => {
                if *step == 0 {
                    return Err(Error::InvalidParameter("schedule step must be positive".into()));
                }
                (*start..=*end).step_by(*step).collect()
            }
            Schedule::Geometric { start, ratio, end } => {
                if !(*ratio > 1.0) || *start == 0 {
                    return Err(Error::InvalidParameter(
                        "geometric schedule needs start >= 1 and ratio > 1".into(),
                    ));
                }
                let mut out: Vec<usize> = Vec::new();
                let mut x = *start as f64;
                while x.round() as usize <= *end {
                    let n = x.round() as usize;
                    if out.last() != Some(&n) {
                        out.push(n);
                    }
                    x *= ratio;
                }
                out
            }
            Schedule::List { values } => values.clone(),
        };
        if v.is_empty() || v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "schedule must be non-empty and strictly increasing".into(),
            ));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    Identity { prime: u64 },
    Borel { prime: u64 },
    Torus { prime: u64 },
    Monomial { prime: u64 },
    Trace { prime: u64, value: i64 },
}

impl TargetSpec {
    pub fn prime(&self) -> u64 {
        match self {
            TargetSpec::Identity { prime }
            | TargetSpec::Borel { prime }
            | TargetSpec::Torus { prime }
            | TargetSpec::Monomial { prime }
            | TargetSpec::Trace { prime, .. } => *prime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkParams {
    /// Extra primes to track besides those named by targets.
    #[serde(default)]
    pub primes: Vec<u64>,
    pub samples: u64,
    pub schedule: Schedule,
    pub targets: Vec<TargetSpec>,
    #[serde(default)]
    pub lazy: bool,
    #[serde(default = "default_true")]
    pub fit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Subgroup {
        name: SubgroupKind,
    },
    /// Random symmetric set containing the identity, drawn with the run seed.
    Random {
        size: usize,
    },
    /// JSON array of element ids.
    Ids {
        path: PathBuf,
    },
    /// The generators together with the identity.
    Generators,
    Whole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub variety: Variety,
    pub dim_v: usize,
    pub dim_g: usize,
}

fn default_max_power() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxParams {
    pub prime: u64,
    pub set: SetSpec,
    #[serde(default = "default_max_power")]
    pub max_power: usize,
    #[serde(default)]
    pub varieties: Vec<VarietySpec>,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_m() -> u64 {
    1
}

fn default_p_min() -> u64 {
    3
}

fn default_ceiling() -> u64 {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatterySpec {
    pub count: usize,
    #[serde(default = "default_m")]
    pub m: u64,
    #[serde(default = "default_p_min")]
    pub p_min: u64,
    #[serde(default = "default_ceiling")]
    pub ceiling: u64,
}

fn default_b_hat() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SieveParams {
    pub battery: BatterySpec,
    pub target: TargetKind,
    pub schedule: Schedule,
    pub samples: u64,
    #[serde(default = "default_b_hat")]
    pub b_hat: f64,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanParams {
    pub from: u64,
    pub to: u64,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportParams {
    /// Directory holding the manifest to check; defaults to the output directory.
    pub dir: Option<PathBuf>,
}

/// Resolved generator source.
#[derive(Debug, Clone)]
pub enum Generators {
    Matrices(GenSet<IntMat>),
    Cyclic(u64),
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Canonical JSON form, used for the config hash.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::InvalidParameter("this command needs a seed".into()))
    }

    /// Resolves the generator source; relative paths are taken from `base`.
    pub fn resolve_generators(&self, base: &Path) -> Result<Generators> {
        let g = self.generators.trim();
        if let Some(n) = g.strip_prefix("cyclic:") {
            let n: u64 = n
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad cyclic preset {g:?}")))?;
            if n < 2 {
                return Err(Error::InvalidParameter("cyclic preset needs n >= 2".into()));
            }
            return Ok(Generators::Cyclic(n));
        }
        Ok(Generators::Matrices(match g {
            "sanov" => sanov(),
            "elementary2" => elementary_generators(2)?,
            "elementary3" => elementary_generators(3)?,
            path => io::load_generators(&base.join(path))?,
        }))
    }

    pub fn matrix_generators(&self, base: &Path) -> Result<GenSet<IntMat>> {
        match self.resolve_generators(base)? {
            Generators::Matrices(g) => Ok(g),
            Generators::Cyclic(_) => Err(Error::InvalidParameter(
                "the cyclic preset is only available for gap".into(),
            )),
        }
    }
}
