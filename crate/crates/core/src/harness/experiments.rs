use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::{Config, Source};
use super::stats::{ks_distance, EmpiricalDistribution, REPORT_QUANTILES};
use super::trials::{run_trials, x_samples, TrialRecord};
use crate::error::{Error, Result};
use crate::group::{Family, GroupSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub label: String,
    pub count: usize,
    pub mean: f64,
    /// `(p, quantile)` for each level in [`REPORT_QUANTILES`].
    pub quantiles: Vec<(f64, f64)>,
}

/// Two-sample comparison of rescaled diameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub a: SampleSummary,
    pub b: SampleSummary,
    pub ks: f64,
    pub cdf_a: Vec<(f64, f64)>,
    pub cdf_b: Vec<(f64, f64)>,
}

fn summary(label: &str, d: &EmpiricalDistribution) -> Result<SampleSummary> {
    Ok(SampleSummary {
        label: label.to_string(),
        count: d.len(),
        mean: d.mean(),
        quantiles: REPORT_QUANTILES.iter().map(|&p| Ok((p, d.quantile(p)?))).collect::<Result<_>>()?,
    })
}

/// Compares the `x` values of two sets of records.
pub fn compare_samples(label_a: &str, a: &[TrialRecord], label_b: &str, b: &[TrialRecord]) -> Result<CompareReport> {
    let da = EmpiricalDistribution::new(x_samples(a))?;
    let db = EmpiricalDistribution::new(x_samples(b))?;
    Ok(CompareReport {
        ks: ks_distance(&da, &db)?,
        a: summary(label_a, &da)?,
        b: summary(label_b, &db)?,
        cdf_a: da.cdf_table(),
        cdf_b: db.cdf_table(),
    })
}

/// Runs both configurations and compares them. The records are returned
/// alongside the report.
pub fn compare_experiment(a: &Config, b: &Config) -> Result<(CompareReport, Vec<TrialRecord>, Vec<TrialRecord>)> {
    let ra = run_trials(a, None)?;
    let rb = run_trials(b, None)?;
    let report = compare_samples(&a.source.to_string(), &ra, &b.source.to_string(), &rb)?;
    Ok((report, ra, rb))
}

/// Tab-separated `x\tF(x)` step table.
pub fn write_cdf_tsv<W: Write>(mut out: W, table: &[(f64, f64)]) -> Result<()> {
    writeln!(out, "x\tF")?;
    for (x, f) in table {
        writeln!(out, "{x}\t{f}")?;
    }
    Ok(())
}

/// One `(q, i)` cell of the filtration scaling table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationRow {
    pub q: u64,
    pub i: usize,
    pub trials: usize,
    pub mean: f64,
    pub max: u32,
    /// `diam(G^(i)) / q^{(d-1)/(ik)}`.
    pub mean_ratio: f64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiltrationTable {
    pub d: usize,
    pub k: usize,
    pub rows: Vec<FiltrationRow>,
    /// Least-squares slope of `ln mean diam(G^(i))` against `ln q`, for
    /// `i = 1..=d-1`; `None` with fewer than two usable moduli.
    pub slopes: Vec<(usize, Option<f64>)>,
}

impl FiltrationTable {
    pub fn row(&self, q: u64, i: usize) -> Option<&FiltrationRow> {
        self.rows.iter().find(|r| r.q == q && r.i == i)
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "q\ti\ttrials\tmean\tmax\tmean_ratio\tmax_ratio")?;
        for r in &self.rows {
            writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}\t{}", r.q, r.i, r.trials, r.mean, r.max, r.mean_ratio, r.max_ratio)?;
        }
        Ok(())
    }
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per-layer diameters of `H_{q,d}` over `config.q_grid` (or the group's own
/// `q` when the grid is empty), for `i = 1..=d`; row `i = d` is the trivial
/// subgroup and always 0.
pub fn filtration_scaling_experiment(config: &Config) -> Result<FiltrationTable> {
    let spec = config.spec()?;
    let (q0, d) = match spec.family() {
        Family::Unitriangular { q, d } => (*q, *d),
        Family::Abelian { .. } => {
            return Err(Error::Precondition("the filtration experiment needs a unitriangular group".into()))
        }
    };
    let grid = if config.q_grid.is_empty() { vec![q0] } else { config.q_grid.clone() };
    let k = config.k;
    let mut rows = Vec::new();
    for &q in &grid {
        let mut c = config.clone();
        c.source = Source::Group(GroupSpec::unitriangular(q, d)?);
        c.layers = true;
        let records = run_trials(&c, None)?;
        let layered: Vec<_> = records.iter().filter_map(|r| r.layers.as_ref()).collect();
        if layered.is_empty() {
            let why = records.iter().find_map(|r| r.error.clone()).unwrap_or_default();
            return Err(Error::Precondition(format!("no successful trials for q = {q}: {why}")));
        }
        for i in 1..=d {
            let values: Vec<u32> = layered.iter().map(|l| l.get(i - 1).map_or(0, |l| l.subgroup)).collect();
            let norm = (q as f64).powf((d - 1) as f64 / (i * k) as f64);
            let max = values.iter().copied().max().unwrap_or(0);
            let mean = values.iter().map(|&v| v as f64).sum::<f64>() / values.len() as f64;
            rows.push(FiltrationRow {
                q,
                i,
                trials: values.len(),
                mean,
                max,
                mean_ratio: mean / norm,
                max_ratio: max as f64 / norm,
            });
        }
    }
    let slopes = (1..d)
        .map(|i| {
            let pts: Vec<(f64, f64)> =
                rows.iter().filter(|r| r.i == i && r.mean > 0.0).map(|r| ((r.q as f64).ln(), r.mean.ln())).collect();
            (i, slope(&pts))
        })
        .collect();
    Ok(FiltrationTable { d, k, rows, slopes })
}
