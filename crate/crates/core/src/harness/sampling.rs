use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ElementCode, GeneratingSet, GroupSpec};

/// How the positive generators `z_1..z_k` are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMode {
    /// `k` independent uniform elements, redrawn until they generate.
    #[default]
    Iid,
    /// A uniform symmetric generating set `{z_i^{±1}}` of exactly `2k`
    /// distinct elements, by rejection from `k` independent draws.
    UniformSymmetric,
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplingMode::Iid => "iid",
            SamplingMode::UniformSymmetric => "uniform-symmetric",
        })
    }
}

impl FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "iid" | "iid-generators" => Ok(SamplingMode::Iid),
            "uniform-symmetric" | "uniform-symmetric-subset" => Ok(SamplingMode::UniformSymmetric),
            other => Err(Error::Parse(format!("unknown sampling mode `{other}`"))),
        }
    }
}

/// RNG for trial `trial` of a run with master seed `seed`: one ChaCha
/// stream per trial, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Warning text when `k` does not exceed the rank of the abelianisation.
pub fn rank_warning(spec: &GroupSpec, k: usize) -> Option<String> {
    let r = spec.rank();
    (k <= r).then(|| format!("k = {k} does not exceed the rank {r} of {spec}; generation will often fail"))
}

/// Draws a generating set and reports how many candidates were tried.
///
/// In [`SamplingMode::UniformSymmetric`] a candidate is accepted only if
/// the `2k` elements `z_i^{±1}` are pairwise distinct (so no identity and
/// no involutions) and generate. Every such set arises from exactly
/// `2^k k!` ordered tuples, so accepted sets are uniform.
pub fn sample_generating_set<R: Rng + ?Sized>(
    spec: &GroupSpec,
    k: usize,
    mode: SamplingMode,
    rng: &mut R,
    budget: u64,
) -> Result<(GeneratingSet, u64)> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    for attempt in 1..=budget {
        let positives: Vec<ElementCode> = (0..k).map(|_| ElementCode(rng.gen_range(0..spec.order()))).collect();
        if mode == SamplingMode::UniformSymmetric {
            let mut all = Vec::with_capacity(2 * k);
            for &z in &positives {
                all.push(z);
                all.push(spec.inv(z)?);
            }
            all.sort_unstable();
            all.dedup();
            if all.len() != 2 * k {
                continue;
            }
        }
        if spec.generates(&positives)? {
            return Ok((GeneratingSet::new(spec, positives)?, attempt));
        }
    }
    Err(Error::SamplingBudget { attempts: budget as usize })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_trial() {
        let h = GroupSpec::unitriangular(101, 3).unwrap();
        let a = sample_generating_set(&h, 3, SamplingMode::Iid, &mut trial_rng(9, 4), 100).unwrap();
        let b = sample_generating_set(&h, 3, SamplingMode::Iid, &mut trial_rng(9, 4), 100).unwrap();
        let c = sample_generating_set(&h, 3, SamplingMode::Iid, &mut trial_rng(9, 5), 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
    }

    #[test]
    fn cyclic_of_order_four() {
        let z = GroupSpec::abelian(vec![4]).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let (s, _) = sample_generating_set(&z, 1, SamplingMode::Iid, &mut rng, 1000).unwrap();
            assert!(matches!(s.positives()[0].0, 1 | 3));
        }
    }

    #[test]
    fn symmetric_mode_has_distinct_elements() {
        let z = GroupSpec::abelian(vec![8]).unwrap();
        let mut rng = trial_rng(2, 0);
        for _ in 0..50 {
            let (s, _) = sample_generating_set(&z, 2, SamplingMode::UniformSymmetric, &mut rng, 1000).unwrap();
            assert_eq!(s.symmetric().len(), 4);
        }
        // Z/2 has no symmetric 2-element set of the required shape
        let z2 = GroupSpec::abelian(vec![2]).unwrap();
        assert!(matches!(
            sample_generating_set(&z2, 1, SamplingMode::UniformSymmetric, &mut rng, 100),
            Err(Error::SamplingBudget { attempts: 100 })
        ));
    }

    #[test]
    fn rejection_rate_on_h101() {
        let h = GroupSpec::unitriangular(101, 3).unwrap();
        let mut rng = trial_rng(3, 0);
        let mut rejected = 0;
        for _ in 0..1000 {
            let (_, attempts) = sample_generating_set(&h, 3, SamplingMode::Iid, &mut rng, 10_000).unwrap();
            rejected += attempts - 1;
        }
        assert!((rejected as f64) / (1000.0 + rejected as f64) <= 0.05, "{rejected}");
    }

    #[test]
    fn warns_when_k_is_small() {
        let h = GroupSpec::unitriangular(5, 3).unwrap();
        assert!(rank_warning(&h, 2).is_some());
        assert!(rank_warning(&h, 3).is_none());
        assert_eq!("uniform-symmetric".parse::<SamplingMode>().unwrap().to_string(), "uniform-symmetric");
    }
}
