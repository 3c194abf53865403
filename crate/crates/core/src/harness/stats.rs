use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted sample with empirical CDF and quantile queries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
}

pub const REPORT_QUANTILES: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

impl EmpiricalDistribution {
    /// NaN samples are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Precondition("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalDistribution { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `F(x) = #{v ≤ x} / n`, right-continuous.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.partition_point(|&v| v <= x) as f64 / self.values.len() as f64
    }

    /// Inverse ECDF: the smallest sample `x` with `F(x) ≥ p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::Precondition("quantile of an empty sample".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Precondition(format!("quantile level {p} outside [0,1]")));
        }
        let n = self.values.len();
        let idx = ((p * n as f64).ceil() as usize).clamp(1, n) - 1;
        Ok(self.values[idx])
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Step points `(x, F(x))` at each distinct sample value.
    pub fn cdf_table(&self) -> Vec<(f64, f64)> {
        let n = self.values.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }
}

/// `sup_x |F_A(x) - F_B(x)|`, by one sweep over the merged samples.
pub fn ks_distance(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("KS distance needs two nonempty samples".into()));
    }
    let (va, vb) = (a.values(), b.values());
    let (na, nb) = (va.len() as f64, vb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best: f64 = 0.0;
    while i < va.len() || j < vb.len() {
        let x = match (va.get(i), vb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < va.len() && va[i] <= x {
            i += 1;
        }
        while j < vb.len() && vb[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&dist(&[1.0, 2.0, 3.0]), &dist(&[3.0, 1.0, 2.0])).unwrap(), 0.0);
        assert_eq!(ks_distance(&dist(&[0.0; 3]), &dist(&[1.0; 3])).unwrap(), 1.0);
        assert_eq!(ks_distance(&dist(&[1.0, 2.0]), &dist(&[1.0, 3.0])).unwrap(), 0.5);
        assert!(ks_distance(&dist(&[]), &dist(&[1.0])).is_err());
    }

    #[test]
    fn cdf_and_quantiles() {
        let d = dist(&[3.0, 1.0, 2.0, 2.0]);
        assert_eq!(d.cdf(0.5), 0.0);
        assert_eq!(d.cdf(2.0), 0.75);
        assert_eq!(d.cdf(3.0), 1.0);
        assert_eq!(d.quantile(0.5).unwrap(), 2.0);
        assert_eq!(d.quantile(0.0).unwrap(), 1.0);
        assert_eq!(d.quantile(1.0).unwrap(), 3.0);
        assert_eq!(d.cdf_table(), vec![(1.0, 0.25), (2.0, 0.75), (3.0, 1.0)]);
        assert!(EmpiricalDistribution::new(vec![f64::NAN]).is_err());
    }
}
