use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sampling::SamplingMode;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::lattice::DEFAULT_CELL_BUDGET;
use crate::metrics::BfsConfig;

/// Where rescaled samples come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// `diam(Γ(G,S)) / |G^ab|^{1/k}` for random generating sets of `spec`.
    Group(GroupSpec),
    /// `ℓ¹` torus diameters of rescaled congruence lattices modulo the prime `q`.
    HaarProxy { q: u64 },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Group(spec) => write!(f, "{spec}"),
            Source::HaarProxy { q } => write!(f, "haar-proxy:{q}"),
        }
    }
}

/// Monte Carlo run configuration, read from a flat `key = value` file.
///
/// | key              | default      | meaning                                   |
/// |------------------|--------------|-------------------------------------------|
/// | `spec`           | required*    | group descriptor, e.g. `ut:199,3`         |
/// | `source`         | `group`      | `group` or `haar-proxy`                   |
/// | `haar_q`         | `1000003`    | prime modulus of the Haar proxy           |
/// | `k`              | required     | number of positive generators / dimension |
/// | `trials`         | `100`        | number of trials `N`                      |
/// | `mode`           | `iid`        | `iid` or `uniform-symmetric`              |
/// | `seed`           | `0`          | master seed                               |
/// | `layers`         | `false`      | record per-layer diameters                |
/// | `memory_cap`     | `3221225472` | BFS memory cap in bytes                   |
/// | `diameter_hint`  | `254`        | expected diameter, sizes BFS cells        |
/// | `eps`            | `0.01`       | torus enclosure width                     |
/// | `max_cells`      | `4000000`    | torus branch-and-bound budget             |
/// | `sampling_budget`| `10000`      | candidate draws per trial                 |
/// | `threads`        | pool default | worker threads (`NILCAYLEY_THREADS` wins) |
/// | `wall_time`      | `false`      | include wall time in records              |
/// | `q_grid`         | none         | moduli for the filtration experiment      |
///
/// \* not needed when `source = haar-proxy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub source: Source,
    pub k: usize,
    pub trials: u64,
    pub mode: SamplingMode,
    pub seed: u64,
    pub layers: bool,
    pub memory_cap: u64,
    pub diameter_hint: u64,
    pub eps: f64,
    pub max_cells: u64,
    pub sampling_budget: u64,
    pub threads: Option<usize>,
    pub wall_time: bool,
    pub q_grid: Vec<u64>,
}

impl Config {
    pub fn group(spec: GroupSpec, k: usize, trials: u64) -> Self {
        Config {
            source: Source::Group(spec),
            k,
            trials,
            mode: SamplingMode::Iid,
            seed: 0,
            layers: false,
            memory_cap: BfsConfig::default().memory_cap,
            diameter_hint: BfsConfig::default().diameter_hint,
            eps: 1e-2,
            max_cells: DEFAULT_CELL_BUDGET,
            sampling_budget: 10_000,
            threads: None,
            wall_time: false,
            q_grid: Vec::new(),
        }
    }

    pub fn haar_proxy(q: u64, k: usize, trials: u64) -> Self {
        Config {
            source: Source::HaarProxy { q },
            ..Config::group(GroupSpec::abelian(vec![2]).expect("valid"), k, trials)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn bfs(&self) -> BfsConfig {
        BfsConfig { memory_cap: self.memory_cap, diameter_hint: self.diameter_hint }
    }

    pub fn spec(&self) -> Result<&GroupSpec> {
        match &self.source {
            Source::Group(spec) => Ok(spec),
            Source::HaarProxy { .. } => Err(Error::Precondition("configuration has no group spec".into())),
        }
    }

    /// Worker count: `NILCAYLEY_THREADS`, then `threads`, then rayon's default.
    pub fn thread_count(&self) -> Result<Option<usize>> {
        match std::env::var("NILCAYLEY_THREADS") {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .map(Some)
                .ok_or_else(|| Error::Parse(format!("NILCAYLEY_THREADS=`{v}` is not a positive integer"))),
            Err(_) => Ok(self.threads),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Parse(format!("bad boolean `{value}` for `{key}`"))),
    }
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut spec: Option<GroupSpec> = None;
        let mut source = "group".to_string();
        let mut haar_q = 1_000_003u64;
        let mut k: Option<usize> = None;
        let mut c = Config::group(GroupSpec::abelian(vec![2]).expect("valid"), 1, 100);
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "spec" => spec = Some(value.parse()?),
                "source" => source = value.to_string(),
                "haar_q" => haar_q = parse_value(key, value)?,
                "k" => k = Some(parse_value(key, value)?),
                "trials" | "N" => c.trials = parse_value(key, value)?,
                "mode" => c.mode = value.parse()?,
                "seed" => c.seed = parse_value(key, value)?,
                "layers" => c.layers = parse_bool(key, value)?,
                "memory_cap" => c.memory_cap = parse_value(key, value)?,
                "diameter_hint" => c.diameter_hint = parse_value(key, value)?,
                "eps" => c.eps = parse_value(key, value)?,
                "max_cells" => c.max_cells = parse_value(key, value)?,
                "sampling_budget" => c.sampling_budget = parse_value(key, value)?,
                "threads" => c.threads = Some(parse_value(key, value)?),
                "wall_time" => c.wall_time = parse_bool(key, value)?,
                "q_grid" => {
                    c.q_grid = value.split(',').map(|t| parse_value(key, t.trim())).collect::<Result<Vec<u64>>>()?
                }
                _ => return Err(Error::Parse(format!("line {}: unknown key `{key}`", n + 1))),
            }
        }
        c.k = k.ok_or_else(|| Error::Parse("missing key `k`".into()))?;
        if c.k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        c.source = match source.as_str() {
            "group" => Source::Group(spec.ok_or_else(|| Error::Parse("missing key `spec`".into()))?),
            "haar-proxy" => Source::HaarProxy { q: haar_q },
            other => return Err(Error::Parse(format!("unknown source `{other}`"))),
        };
        Ok(c)
    }
}
