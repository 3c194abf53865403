//! Fixtures shared by the benchmarks.

use nilcayley_core::harness::{sample_generating_set, trial_rng, SamplingMode};
use nilcayley_core::{GeneratingSet, GroupSpec};

/// A seeded random generating set of `k` elements for `spec`.
pub fn fixture(spec: &str, k: usize, seed: u64) -> (GroupSpec, GeneratingSet) {
    let spec: GroupSpec = spec.parse().expect("valid descriptor");
    let (gens, _) =
        sample_generating_set(&spec, k, SamplingMode::Iid, &mut trial_rng(seed, 0), 10_000).expect("sampling");
    (spec, gens)
}
