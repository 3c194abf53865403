use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::bfs::{bfs_distance_map_with, unreached, with_cells, BfsConfig, Cell, Cells, DistanceMap};
use crate::error::{Error, Result};
use crate::group::{ElementCode, GeneratingSet, GroupSpec};

/// Graph diameter of `Γ(G, S)`: the eccentricity of the identity, which by
/// vertex transitivity is every vertex's eccentricity.
pub fn diameter(dm: &DistanceMap) -> Result<u32> {
    with_cells!(dm.cells(), v => {
        let mut max = 0u32;
        for &c in v.iter() {
            if unreached(c) {
                return Err(Error::NotGenerating);
            }
            max = max.max(c.level());
        }
        Ok(max)
    })
}

fn check_complete(dm: &DistanceMap) -> Result<()> {
    if dm.is_complete() {
        Ok(())
    } else {
        Err(Error::NotGenerating)
    }
}

fn check_layer(spec: &GroupSpec, i: usize, max: usize) -> Result<()> {
    if i == 0 || i > max {
        return Err(Error::Precondition(format!("layer index {i} outside 1..={max} for {spec}")));
    }
    Ok(())
}

/// `diam(G^(i), S)`: largest ambient distance between two elements of `G^(i)`.
///
/// `G^(i)` is normal, so `h₁⁻¹h₂ ∈ G^(i)` and it suffices to maximise the
/// distance from the identity. Its elements are the codes below
/// [`GroupSpec::lcs_bound`].
pub fn subgroup_diameter(dm: &DistanceMap, i: usize) -> Result<u32> {
    let spec = dm.spec();
    check_layer(spec, i, spec.class() + 1)?;
    check_complete(dm)?;
    let bound = spec.lcs_bound(i) as usize;
    Ok(with_cells!(dm.cells(), v => v[..bound].iter().map(|c| c.level()).max().unwrap_or(0)))
}

/// `diam(G^(i) / G^(i+1), S)` under the induced quotient metric: the largest,
/// over cosets inside `G^(i)`, of the smallest distance to a coset member.
///
/// Cosets of `G^(i+1)` are contiguous code blocks of length `|G^(i+1)|`.
pub fn quotient_diameter(dm: &DistanceMap, i: usize) -> Result<u32> {
    let spec = dm.spec();
    check_layer(spec, i, spec.class() + 1)?;
    check_complete(dm)?;
    if i > spec.class() {
        return Ok(0);
    }
    let members = spec.lcs_bound(i) as usize;
    let block = spec.lcs_bound(i + 1) as usize;
    Ok(block_max_min(dm.cells(), members, block))
}

fn block_max_min(cells: &Cells, members: usize, block: usize) -> u32 {
    with_cells!(cells, v => v[..members]
        .chunks(block)
        .map(|chunk| chunk.iter().map(|c| c.level()).min().expect("nonempty block"))
        .max()
        .unwrap_or(0))
}

/// Quotient diameter for an arbitrary normal subgroup `N` of a normal `H`:
/// `in_h` selects `H`, `key` maps each element of `H` to its coset of `N`.
pub fn quotient_diameter_by<F, K>(dm: &DistanceMap, in_h: F, key: K) -> Result<u32>
where
    F: Fn(ElementCode) -> bool,
    K: Fn(ElementCode) -> u64,
{
    check_complete(dm)?;
    let mut best: HashMap<u64, u32> = HashMap::new();
    for g in (0..dm.len() as u64).map(ElementCode) {
        if in_h(g) {
            let d = dm.distance(g).expect("complete");
            best.entry(key(g)).and_modify(|b| *b = (*b).min(d)).or_insert(d);
        }
    }
    Ok(best.into_values().max().unwrap_or(0))
}

/// Subgroup diameter for an arbitrary normal subgroup selected by `in_h`.
pub fn subgroup_diameter_by<F>(dm: &DistanceMap, in_h: F) -> Result<u32>
where
    F: Fn(ElementCode) -> bool,
{
    check_complete(dm)?;
    Ok((0..dm.len() as u64)
        .map(ElementCode)
        .filter(|&g| in_h(g))
        .map(|g| dm.distance(g).expect("complete"))
        .max()
        .unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerDiameters {
    pub i: usize,
    /// `diam(G^(i), S)`.
    pub subgroup: u32,
    /// `diam(G^(i) / G^(i+1), S)`.
    pub quotient: u32,
}

/// Diameters along the lower central series of one Cayley graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    /// Rows for `i = 1..=class`.
    pub layers: Vec<LayerDiameters>,
    /// `diam(Γ(G, S))`.
    pub diameter: u32,
    /// `diam(Γ(G^ab, S))`, computed by an independent BFS on `G^ab`.
    pub diameter_ab: u32,
}

impl FiltrationReport {
    pub fn compute(dm: &DistanceMap, ab: &DistanceMap) -> Result<Self> {
        let spec = dm.spec();
        let layers = (1..=spec.class())
            .map(|i| Ok(LayerDiameters { i, subgroup: subgroup_diameter(dm, i)?, quotient: quotient_diameter(dm, i)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiltrationReport { layers, diameter: diameter(dm)?, diameter_ab: diameter(ab)? })
    }

    /// Runs both BFS passes (group and abelianisation) and builds the report.
    pub fn for_generators(spec: &GroupSpec, gens: &GeneratingSet, config: &BfsConfig) -> Result<Self> {
        let dm = bfs_distance_map_with(spec, gens, config)?;
        let ab = bfs_distance_map_with(&spec.abelianisation(), &gens.abelianised(spec)?, config)?;
        Self::compute(&dm, &ab)
    }

    /// `diam(G^(i), S)` with `G^(class+1)` read as 0.
    pub fn subgroup(&self, i: usize) -> u32 {
        self.layers.get(i - 1).map_or(0, |l| l.subgroup)
    }

    /// Checks the exact inequalities every report must satisfy:
    /// `quotient(i) <= subgroup(i) <= quotient(i) + subgroup(i+1)`,
    /// `diam_ab <= diam <= Σ quotient(i)` and `quotient(1) = diam_ab`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.layers {
            let next = self.subgroup(l.i + 1);
            if l.quotient > l.subgroup || l.subgroup > l.quotient + next {
                out.push(format!("layer {}: quotient {} subgroup {} next {}", l.i, l.quotient, l.subgroup, next));
            }
        }
        if self.diameter_ab > self.diameter {
            out.push(format!("diam_ab {} > diam {}", self.diameter_ab, self.diameter));
        }
        let total: u32 = self.layers.iter().map(|l| l.quotient).sum();
        if self.diameter > total {
            out.push(format!("diam {} > sum of quotients {total}", self.diameter));
        }
        if self.layers.first().map(|l| l.quotient) != Some(self.diameter_ab) {
            out.push("quotient(1) differs from diam_ab".into());
        }
        if self.layers.first().map(|l| l.subgroup) != Some(self.diameter) {
            out.push("subgroup(1) differs from diam".into());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::bfs_distance_map;

    fn heisenberg_xy(q: u64) -> DistanceMap {
        let h = GroupSpec::unitriangular(q, 3).unwrap();
        let s = GeneratingSet::parse(&h, "1,0,0;0,1,0").unwrap();
        bfs_distance_map(&h, &s).unwrap()
    }

    #[test]
    fn cycle_diameters() {
        for q in [2u64, 5, 8, 13] {
            let z = GroupSpec::abelian(vec![q]).unwrap();
            let s = GeneratingSet::new(&z, vec![ElementCode(1)]).unwrap();
            let dm = bfs_distance_map(&z, &s).unwrap();
            assert_eq!(diameter(&dm).unwrap() as u64, q / 2);
            assert_eq!(quotient_diameter(&dm, 1).unwrap() as u64, q / 2);
            assert_eq!(subgroup_diameter(&dm, 2).unwrap(), 0);
        }
    }

    #[test]
    fn non_generating_is_an_error() {
        let z = GroupSpec::abelian(vec![6]).unwrap();
        let s = GeneratingSet::new(&z, vec![ElementCode(3)]).unwrap();
        let dm = bfs_distance_map(&z, &s).unwrap();
        assert!(matches!(diameter(&dm), Err(Error::NotGenerating)));
    }

    #[test]
    fn heisenberg_3_diameters() {
        let dm = heisenberg_xy(3);
        let brute = (0..27).map(|g| dm.distance(ElementCode(g)).unwrap()).max().unwrap();
        assert_eq!(diameter(&dm).unwrap(), brute);
        assert_eq!(subgroup_diameter(&dm, 1).unwrap(), brute);
        assert_eq!(subgroup_diameter(&dm, 2).unwrap(), 4);
        assert_eq!(subgroup_diameter(&dm, 3).unwrap(), 0);
        assert!(subgroup_diameter(&dm, 4).is_err());
        assert!(subgroup_diameter(&dm, 0).is_err());
    }

    #[test]
    fn quotient_matches_abelianisation_bfs() {
        for q in [3u64, 5, 7] {
            let dm = heisenberg_xy(q);
            let h = dm.spec().clone();
            let ab = bfs_distance_map(&h.abelianisation(), &dm.gens().abelianised(&h).unwrap()).unwrap();
            assert_eq!(quotient_diameter(&dm, 1).unwrap(), diameter(&ab).unwrap());
        }
    }

    #[test]
    fn z4_modulo_two() {
        let z = GroupSpec::abelian(vec![4]).unwrap();
        let s = GeneratingSet::new(&z, vec![ElementCode(1)]).unwrap();
        let dm = bfs_distance_map(&z, &s).unwrap();
        assert_eq!(quotient_diameter_by(&dm, |_| true, |g| g.0 % 2).unwrap(), 1);
        assert_eq!(subgroup_diameter_by(&dm, |g| g.0 % 2 == 0).unwrap(), 2);
    }

    #[test]
    fn generic_routes_agree_with_block_routes() {
        let h = GroupSpec::unitriangular(3, 4).unwrap();
        let s = GeneratingSet::parse(&h, "1,0,0,0,0,0;0,1,0,0,0,0;0,0,1,2,0,1").unwrap();
        let dm = bfs_distance_map(&h, &s).unwrap();
        for i in 1..=3 {
            let in_h = |g: ElementCode| h.lcs_member(i, g).unwrap();
            assert_eq!(subgroup_diameter_by(&dm, in_h).unwrap(), subgroup_diameter(&dm, i).unwrap());
            assert_eq!(
                quotient_diameter_by(&dm, in_h, |g| h.coset_key(i, g).0).unwrap(),
                quotient_diameter(&dm, i).unwrap()
            );
        }
    }

    #[test]
    fn report_has_no_violations() {
        let h = GroupSpec::unitriangular(3, 4).unwrap();
        let s = GeneratingSet::parse(&h, "1,0,0,0,0,0;0,1,0,0,0,0;0,0,1,0,0,0").unwrap();
        let report = FiltrationReport::for_generators(&h, &s, &BfsConfig::default()).unwrap();
        assert_eq!(report.layers.len(), 3);
        assert!(report.violations().is_empty(), "{:?}", report.violations());
    }
}
