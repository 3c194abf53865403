//! Brute-force oracles over the full element set.
//!
//! These enumerate the group explicitly and are only meant for small orders.
//! They share nothing with the structural predicates they check beyond the
//! group law itself.

use super::ops::ElementCode;
use super::spec::GroupSpec;
use crate::error::{Error, Result};

/// Largest order the oracles accept.
pub const ORACLE_MAX_ORDER: u64 = 1 << 16;

fn guard(spec: &GroupSpec) -> Result<()> {
    if spec.order() > ORACLE_MAX_ORDER {
        return Err(Error::Resource(format!("brute-force oracle refuses a group of order {}", spec.order())));
    }
    Ok(())
}

/// Dense product table helper: decodes once, multiplies on entry vectors.
struct Table<'a> {
    spec: &'a GroupSpec,
    entries: Vec<Vec<u64>>,
    inverses: Vec<ElementCode>,
}

impl<'a> Table<'a> {
    fn new(spec: &'a GroupSpec) -> Result<Self> {
        let entries = (0..spec.order()).map(|a| spec.decode(ElementCode(a))).collect::<Result<Vec<_>>>()?;
        let inverses = (0..spec.order()).map(|a| spec.inv(ElementCode(a))).collect::<Result<Vec<_>>>()?;
        Ok(Table { spec, entries, inverses })
    }

    fn mul(&self, a: ElementCode, b: ElementCode, buf: &mut [u64]) -> ElementCode {
        self.spec.mul_entries(&self.entries[a.index()], &self.entries[b.index()], buf);
        self.spec.encode_unchecked(buf)
    }

    fn commutator(&self, x: ElementCode, y: ElementCode, buf: &mut [u64]) -> ElementCode {
        let xy = self.mul(x, y, buf);
        let t = self.mul(xy, self.inverses[x.index()], buf);
        self.mul(t, self.inverses[y.index()], buf)
    }
}

/// Membership bitmap of the subgroup generated by `gens`.
pub fn subgroup_closure(spec: &GroupSpec, gens: &[ElementCode]) -> Result<Vec<bool>> {
    guard(spec)?;
    let table = Table::new(spec)?;
    closure_with(&table, gens)
}

fn closure_with(table: &Table<'_>, gens: &[ElementCode]) -> Result<Vec<bool>> {
    let spec = table.spec;
    for &g in gens {
        spec.check(g)?;
    }
    let mut seen = vec![false; spec.order() as usize];
    let mut stack = vec![spec.identity()];
    seen[0] = true;
    let mut buf = vec![0; spec.digits()];
    while let Some(a) = stack.pop() {
        for &g in gens {
            let b = table.mul(a, g, &mut buf);
            if !seen[b.index()] {
                seen[b.index()] = true;
                stack.push(b);
            }
        }
    }
    Ok(seen)
}

/// The lower central series `G^(1) ⊇ G^(2) ⊇ …` down to the trivial group,
/// computed as `G^(i+1) = ⟨[g, h] : g ∈ G, h ∈ G^(i)⟩`.
pub fn lower_central_series(spec: &GroupSpec) -> Result<Vec<Vec<bool>>> {
    guard(spec)?;
    let table = Table::new(spec)?;
    let n = spec.order() as usize;
    let mut series = vec![vec![true; n]];
    let mut buf = vec![0; spec.digits()];
    loop {
        let current = series.last().expect("nonempty");
        if current.iter().filter(|&&b| b).count() == 1 {
            break;
        }
        let mut is_comm = vec![false; n];
        for g in 0..n {
            for h in (0..n).filter(|&h| current[h]) {
                let c = table.commutator(ElementCode(g as u64), ElementCode(h as u64), &mut buf);
                is_comm[c.index()] = true;
            }
        }
        let gens: Vec<ElementCode> = (0..n).filter(|&c| is_comm[c]).map(|c| ElementCode(c as u64)).collect();
        let next = closure_with(&table, &gens)?;
        if &next == current {
            // not nilpotent; cannot happen for the supported families
            return Err(Error::Precondition("lower central series stabilised".into()));
        }
        series.push(next);
    }
    Ok(series)
}

/// Whether `gens` generates the group, by reachability from the identity.
pub fn generates_by_reachability(spec: &GroupSpec, gens: &[ElementCode]) -> Result<bool> {
    guard(spec)?;
    let table = Table::new(spec)?;
    let mut sym = gens.to_vec();
    sym.extend(gens.iter().map(|g| table.inverses[g.index()]));
    Ok(closure_with(&table, &sym)?.into_iter().all(|b| b))
}

/// Checks the pattern predicate `lcs_member` against the closure computation.
///
/// Returns the first disagreeing `(i, element)`.
pub fn validate_lcs_pattern(spec: &GroupSpec) -> Result<Option<(usize, ElementCode)>> {
    let series = lower_central_series(spec)?;
    if series.len() != spec.class() + 1 {
        return Ok(Some((series.len(), spec.identity())));
    }
    for i in 1..=series.len() + 1 {
        let expected = series.get(i - 1);
        for a in 0..spec.order() {
            let member = spec.lcs_member(i, ElementCode(a))?;
            let truth = expected.map_or(a == 0, |s| s[a as usize]);
            if member != truth {
                return Ok(Some((i, ElementCode(a))));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_series_sizes() {
        let h = GroupSpec::unitriangular(3, 4).unwrap();
        let sizes: Vec<usize> =
            lower_central_series(&h).unwrap().iter().map(|s| s.iter().filter(|&&b| b).count()).collect();
        assert_eq!(sizes, vec![729, 27, 3, 1]);
    }

    #[test]
    fn pattern_matches_closure_small() {
        for (q, d) in [(2, 3), (3, 3), (2, 4), (4, 3), (2, 5)] {
            let h = GroupSpec::unitriangular(q, d).unwrap();
            assert_eq!(validate_lcs_pattern(&h).unwrap(), None, "H_{{{q},{d}}}");
        }
        let a = GroupSpec::abelian(vec![4, 6]).unwrap();
        assert_eq!(validate_lcs_pattern(&a).unwrap(), None);
    }

    #[test]
    fn oracle_refuses_large_groups() {
        let h = GroupSpec::unitriangular(101, 3).unwrap();
        assert!(matches!(lower_central_series(&h), Err(Error::Resource(_))));
    }
}
