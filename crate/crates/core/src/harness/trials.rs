use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Config, Source};
use super::sampling::{sample_generating_set, trial_rng};
use super::stats::{EmpiricalDistribution, REPORT_QUANTILES};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::lattice::{sample_haar_proxy, torus_diameter_l1_with, Enclosure};
use crate::metrics::{fast_diameter, FiltrationReport, LayerDiameters};

/// One Monte Carlo trial. Group trials fill the diameter fields, Haar-proxy
/// trials the lattice fields; a failed trial carries `error` instead.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub source: String,
    pub k: usize,
    pub mode: String,
    pub seed: u64,
    pub trial: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attempts: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diam: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diam_ab: Option<u32>,
    /// Rescaled diameter; the enclosure midpoint for lattice trials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_ab: Option<f64>,
    /// `x - x_ab`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<LayerDiameters>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<Enclosure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_code: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl TrialRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    /// `(diam - diam_ab) / √diam_ab`.
    pub fn collapse_ratio(&self) -> Option<f64> {
        match (self.diam, self.diam_ab) {
            (Some(d), Some(a)) if a > 0 => Some((d as f64 - a as f64) / (a as f64).sqrt()),
            _ => None,
        }
    }
}

/// `|G^ab|^{1/k}`, the rescaling divisor.
pub fn rescaling(spec: &GroupSpec, k: usize) -> f64 {
    (spec.abelianisation().order() as f64).powf(1.0 / k as f64)
}

fn group_trial(config: &Config, spec: &GroupSpec, rec: &mut TrialRecord) -> Result<()> {
    let mut rng = trial_rng(config.seed, rec.trial);
    let (gens, attempts) = sample_generating_set(spec, config.k, config.mode, &mut rng, config.sampling_budget)?;
    rec.generators = Some(gens.describe(spec));
    rec.attempts = Some(attempts);
    let bfs = config.bfs();
    let (diam, diam_ab) = if config.layers {
        let report = FiltrationReport::for_generators(spec, &gens, &bfs)?;
        rec.layers = Some(report.layers.clone());
        (report.diameter, report.diameter_ab)
    } else {
        let diam = fast_diameter(spec, &gens, &bfs)?;
        let diam_ab = if spec.is_abelian() {
            diam
        } else {
            fast_diameter(&spec.abelianisation(), &gens.abelianised(spec)?, &bfs)?
        };
        (diam, diam_ab)
    };
    let norm = rescaling(spec, config.k);
    let (x, x_ab) = (diam as f64 / norm, diam_ab as f64 / norm);
    rec.diam = Some(diam);
    rec.diam_ab = Some(diam_ab);
    rec.x = Some(x);
    rec.x_ab = Some(x_ab);
    rec.eps = Some(x - x_ab);
    Ok(())
}

fn lattice_trial(config: &Config, q: u64, rec: &mut TrialRecord) -> Result<()> {
    let mut rng = trial_rng(config.seed, rec.trial);
    let lattice = sample_haar_proxy(config.k, q, &mut rng)?;
    let basis = lattice.integer_basis();
    rec.lattice = Some(
        basis.iter().map(|b| b.iter().map(i64::to_string).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";"),
    );
    let e = torus_diameter_l1_with(&lattice, config.eps, config.max_cells)?;
    rec.enclosure = Some(e);
    rec.x = Some(e.midpoint());
    Ok(())
}

/// Runs trial `trial` of `config`; failures are recorded, not returned.
pub fn run_trial(config: &Config, trial: u64) -> TrialRecord {
    let start = Instant::now();
    let mut rec = TrialRecord {
        source: config.source.to_string(),
        k: config.k,
        mode: match config.source {
            Source::Group(_) => config.mode.to_string(),
            Source::HaarProxy { .. } => "haar-proxy".into(),
        },
        seed: config.seed,
        trial,
        ..TrialRecord::default()
    };
    let outcome = match &config.source {
        Source::Group(spec) => group_trial(config, spec, &mut rec),
        Source::HaarProxy { q } => lattice_trial(config, *q, &mut rec),
    };
    if let Err(e) = outcome {
        rec.error = Some(e.to_string());
        rec.exit_code = Some(e.exit_code());
    }
    if config.wall_time {
        rec.wall_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rec
}

pub fn write_record<W: Write + ?Sized>(out: &mut W, rec: &TrialRecord) -> Result<()> {
    serde_json::to_writer(&mut *out, rec)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<TrialRecord>> {
    input
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| Ok(serde_json::from_str(&l?)?))
        .collect()
}

/// Runs `config.trials` trials on a work-stealing pool. Records are written
/// to `sink` as JSON lines in trial order as soon as their predecessors are
/// done, and returned in the same order.
pub fn run_trials(config: &Config, mut sink: Option<&mut dyn Write>) -> Result<Vec<TrialRecord>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    let mut out = Vec::with_capacity(config.trials as usize);
    let mut write_error = None;
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        scope.spawn(move || {
            pool.install(|| {
                (0..config.trials).into_par_iter().for_each_with(tx, |tx, t| {
                    let _ = tx.send((t, run_trial(config, t)));
                })
            })
        });
        let mut pending = BTreeMap::new();
        for (t, rec) in rx {
            pending.insert(t, rec);
            while let Some(rec) = pending.remove(&(out.len() as u64)) {
                if let (Some(w), None) = (sink.as_deref_mut(), &write_error) {
                    if let Err(e) = write_record(w, &rec).and_then(|_| Ok(w.flush()?)) {
                        write_error = Some(e);
                    }
                }
                out.push(rec);
            }
        }
    });
    match write_error {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Aggregate of one batch, one CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub source: String,
    pub k: usize,
    pub mode: String,
    pub seed: u64,
    pub trials: usize,
    pub ok: usize,
    pub errors: usize,
    pub x_mean: f64,
    pub x_q05: f64,
    pub x_q25: f64,
    pub x_q50: f64,
    pub x_q75: f64,
    pub x_q95: f64,
    pub x_ab_mean: Option<f64>,
    pub eps_mean: Option<f64>,
    pub eps_max: Option<f64>,
    pub collapse_mean: Option<f64>,
    pub collapse_max: Option<f64>,
    pub diam_ab_violations: usize,
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

fn max(v: &[f64]) -> Option<f64> {
    v.iter().copied().reduce(f64::max)
}

/// Rescaled values `x` of the successful records.
pub fn x_samples(records: &[TrialRecord]) -> Vec<f64> {
    records.iter().filter_map(|r| r.x).collect()
}

pub fn summarize(config: &Config, records: &[TrialRecord]) -> Result<BatchSummary> {
    let xs = EmpiricalDistribution::new(x_samples(records))?;
    let q = |p: f64| xs.quantile(p).unwrap_or(f64::NAN);
    let [q05, q25, q50, q75, q95] = REPORT_QUANTILES.map(q);
    let x_ab: Vec<f64> = records.iter().filter_map(|r| r.x_ab).collect();
    let eps: Vec<f64> = records.iter().filter_map(|r| r.eps).collect();
    let collapse: Vec<f64> = records.iter().filter_map(TrialRecord::collapse_ratio).collect();
    let ok = records.iter().filter(|r| r.is_ok()).count();
    Ok(BatchSummary {
        source: config.source.to_string(),
        k: config.k,
        mode: records.first().map_or_else(|| config.mode.to_string(), |r| r.mode.clone()),
        seed: config.seed,
        trials: records.len(),
        ok,
        errors: records.len() - ok,
        x_mean: if xs.is_empty() { f64::NAN } else { xs.mean() },
        x_q05: q05,
        x_q25: q25,
        x_q50: q50,
        x_q75: q75,
        x_q95: q95,
        x_ab_mean: mean(&x_ab),
        eps_mean: mean(&eps),
        eps_max: max(&eps),
        collapse_mean: mean(&collapse),
        collapse_max: max(&collapse),
        diam_ab_violations: records
            .iter()
            .filter(|r| matches!((r.diam, r.diam_ab), (Some(d), Some(a)) if a > d))
            .count(),
    })
}

pub fn write_summary_csv<W: Write>(out: W, rows: &[BatchSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials() {
        let c = Config::group("ut:5,3".parse().unwrap(), 3, 0);
        assert!(run_trials(&c, None).unwrap().is_empty());
    }

    #[test]
    fn abelian_trials_do_not_collapse() {
        let c = Config::group("abelian:31".parse().unwrap(), 2, 10).with_seed(5);
        for r in run_trials(&c, None).unwrap() {
            assert!(r.is_ok());
            assert_eq!(r.diam, r.diam_ab);
            assert_eq!(r.eps, Some(0.0));
        }
    }

    #[test]
    fn layered_trials_satisfy_the_sandwich() {
        let mut c = Config::group("ut:5,3".parse().unwrap(), 3, 10).with_seed(11);
        c.layers = true;
        for r in run_trials(&c, None).unwrap() {
            let layers = r.layers.as_ref().unwrap();
            let (d, a) = (r.diam.unwrap(), r.diam_ab.unwrap());
            let upper: u32 = a + layers.iter().skip(1).map(|l| l.quotient).sum::<u32>();
            assert!(a <= d && d <= upper, "{r:?}");
        }
    }

    #[test]
    fn jsonl_round_trip_and_order() {
        let c = Config::group("ut:7,3".parse().unwrap(), 3, 6).with_seed(2);
        let mut buf = Vec::new();
        let recs = run_trials(&c, Some(&mut buf)).unwrap();
        assert_eq!(recs.iter().map(|r| r.trial).collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
        assert_eq!(read_records(&buf[..]).unwrap(), recs);
        let summary = summarize(&c, &recs).unwrap();
        assert_eq!((summary.trials, summary.ok), (6, 6));
        let mut csv = Vec::new();
        write_summary_csv(&mut csv, &[summary]).unwrap();
        assert!(String::from_utf8(csv).unwrap().starts_with("source,k,mode"));
    }

    #[test]
    fn sampling_failures_are_recorded() {
        let mut c = Config::group("abelian:2".parse().unwrap(), 1, 2);
        c.mode = super::super::SamplingMode::UniformSymmetric;
        c.sampling_budget = 20;
        let recs = run_trials(&c, None).unwrap();
        assert!(recs.iter().all(|r| r.exit_code == Some(4)));
    }
}
