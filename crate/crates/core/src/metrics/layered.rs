//! Diameter-only BFS over row bitsets.
//!
//! Split an element into `(outer, inner)` where `inner` is the last digit
//! (the corner entry of `H_{q,d}`). Left multiplication by `s` sends
//! `(outer, inner)` to `(φ_s(outer), inner + τ_s(outer))`: no entry of `s·g`
//! other than the corner depends on the corner of `g`. A frontier stored as
//! one bitset row per outer value therefore advances by whole-row rotations,
//! 64 elements per word operation. Only sphere sizes are produced; use
//! [`super::bfs_distance_map`] when per-element distances are needed.

use super::bfs::{BfsConfig, LeftMul};
use crate::error::{Error, Result};
use crate::group::{ElementCode, GeneratingSet, GroupSpec};

/// `dst[j] |= src[(j - shift) mod m]` for `j < m`, where `doubled` holds the
/// source row twice in a row (bits `[0, m)` and `[m, 2m)`), so the rotation
/// is a window starting at bit `m - shift`.
#[inline]
fn or_window(dst: &mut [u64], doubled: &[u64], m: usize, shift: usize) {
    let off = if shift == 0 { 0 } else { m - shift };
    let (w, b) = (off / 64, off % 64);
    let src = &doubled[w..w + dst.len() + 1];
    if b == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= s;
        }
    } else {
        for (i, d) in dst.iter_mut().enumerate() {
            *d |= (src[i] >> b) | (src[i + 1] << (64 - b));
        }
    }
    let tail = m % 64;
    if tail != 0 {
        *dst.last_mut().expect("row has words") &= (1u64 << tail) - 1;
    }
}

/// Adds the second copy of an `m`-bit row at bit `m`, in place: `doubled`
/// holds the row in its first `words` words and zeros after them. Walking
/// backwards reads every source word before anything is ORed into it.
#[inline]
fn write_doubled_tail(doubled: &mut [u64], words: usize, m: usize) {
    let (w, b) = (m / 64, m % 64);
    for i in (0..words).rev() {
        let v = doubled[i];
        doubled[w + i] |= v << b;
        if b != 0 {
            doubled[w + i + 1] |= v >> (64 - b);
        }
    }
}

/// Writes `row` (of `m` bits) twice into the zeroed buffer `doubled`.
#[inline]
fn write_doubled(doubled: &mut [u64], row: &[u64], m: usize) {
    doubled[..row.len()].copy_from_slice(row);
    let (w, b) = (m / 64, m % 64);
    for (i, &v) in row.iter().enumerate() {
        doubled[w + i] |= v << b;
        if b != 0 {
            doubled[w + i + 1] |= v >> (64 - b);
        }
    }
}

/// Number of elements at each distance `0, 1, …` from the identity.
///
/// The profile stops at the last nonempty sphere, so its length is
/// `diameter + 1` when `gens` generates.
///
/// Sparse levels push each frontier row through every generator. Dense
/// levels pull instead: each target row that is not yet fully visited ORs
/// in its preimage rows, which writes every row once and skips finished
/// rows entirely.
pub fn sphere_profile(spec: &GroupSpec, gens: &GeneratingSet, config: &BfsConfig) -> Result<Vec<u64>> {
    let m = *spec.radices().last().expect("at least one digit") as usize;
    let outer = (spec.order() / m as u64) as usize;
    let words = m.div_ceil(64);
    // doubled rows: 2m bits plus room for the one-word overread of `or_window`
    let dwords = (m + 64 * words) / 64 + 2;
    let actions = gens.symmetric();
    let bytes = (8 * outer * (2 * words + 2 * dwords + 2 * actions.len()) + 2 * outer) as u64;
    if bytes > config.memory_cap {
        return Err(Error::Resource(format!(
            "row-bitset BFS over {} elements needs about {bytes} bytes, cap is {}",
            spec.order(),
            config.memory_cap
        )));
    }
    if outer > u32::MAX as usize {
        return Err(Error::Resource("too many bitset rows".into()));
    }

    let mut forward: Vec<Vec<(u32, u32)>> = Vec::with_capacity(actions.len());
    let mut backward: Vec<Vec<(u32, u32)>> = Vec::with_capacity(actions.len());
    let mut g = vec![0u64; spec.digits()];
    let mut h = vec![0u64; spec.digits()];
    for &(s, _) in actions {
        let act = LeftMul::new(spec, s)?;
        let mut fwd = Vec::with_capacity(outer);
        let mut bwd = vec![(0u32, 0u32); outer];
        for o in 0..outer {
            spec.decode_into(ElementCode(o as u64 * m as u64), &mut g);
            act.apply(&g, &mut h);
            let code = spec.encode_unchecked(&h).0;
            let (to, shift) = ((code / m as u64) as u32, (code % m as u64) as u32);
            fwd.push((to, shift));
            bwd[to as usize] = (o as u32, shift);
        }
        forward.push(fwd);
        backward.push(bwd);
    }

    let tail_mask = if m.is_multiple_of(64) { u64::MAX } else { (1u64 << (m % 64)) - 1 };
    let row_full = |row: &[u64]| {
        let (last, rest) = row.split_last().expect("row has words");
        rest.iter().all(|&w| w == u64::MAX) && *last == tail_mask
    };
    let mut visited = vec![0u64; outer * words];
    let mut next = vec![0u64; outer * words];
    let mut frontier = vec![0u64; outer * dwords];
    let mut upcoming = vec![0u64; outer * dwords];
    let mut in_frontier = vec![false; outer];
    let mut full = vec![false; outer];
    let mut touched = vec![false; outer];
    let mut touched_rows: Vec<u32> = Vec::new();
    let mut acc = vec![0u64; words];

    visited[0] = 1;
    acc[0] = 1;
    write_doubled(&mut frontier[..dwords], &acc, m);
    in_frontier[0] = true;
    full[0] = row_full(&visited[..words]);
    let mut active: Vec<u32> = vec![0];
    let mut fresh_rows: Vec<u32> = Vec::new();
    let mut profile = vec![1u64];
    loop {
        let mut count = 0u64;
        fresh_rows.clear();
        let settle = |o: usize, row: &[u64], visited: &mut [u64], upcoming: &mut [u64], full: &mut [bool]| -> u64 {
            let seen = &mut visited[o * words..(o + 1) * words];
            let mut fresh_count = 0u64;
            let dst = &mut upcoming[o * dwords..(o + 1) * dwords];
            dst.fill(0);
            for ((d, &r), v) in dst.iter_mut().zip(row).zip(seen.iter_mut()) {
                let fresh = r & !*v;
                *d = fresh;
                *v |= fresh;
                fresh_count += fresh.count_ones() as u64;
            }
            if fresh_count > 0 {
                write_doubled_tail(dst, words, m);
                full[o] = row_full(seen);
            }
            fresh_count
        };
        if active.len() * 16 < outer {
            for &o in &active {
                let o = o as usize;
                let src = &frontier[o * dwords..(o + 1) * dwords];
                for table in &forward {
                    let (to, shift) = table[o];
                    let to = to as usize;
                    if full[to] {
                        continue;
                    }
                    if !touched[to] {
                        touched[to] = true;
                        touched_rows.push(to as u32);
                    }
                    or_window(&mut next[to * words..(to + 1) * words], src, m, shift as usize);
                }
            }
            touched_rows.sort_unstable();
            for &to in &touched_rows {
                let to = to as usize;
                touched[to] = false;
                let row = &mut next[to * words..(to + 1) * words];
                acc.copy_from_slice(row);
                row.fill(0);
                let c = settle(to, &acc, &mut visited, &mut upcoming, &mut full);
                if c > 0 {
                    fresh_rows.push(to as u32);
                    count += c;
                }
            }
            touched_rows.clear();
        } else {
            for to in 0..outer {
                if full[to] {
                    continue;
                }
                acc.fill(0);
                let mut any = false;
                for table in &backward {
                    let (o, shift) = table[to];
                    let o = o as usize;
                    if in_frontier[o] {
                        any = true;
                        or_window(&mut acc, &frontier[o * dwords..(o + 1) * dwords], m, shift as usize);
                    }
                }
                if any {
                    let c = settle(to, &acc, &mut visited, &mut upcoming, &mut full);
                    if c > 0 {
                        fresh_rows.push(to as u32);
                        count += c;
                    }
                }
            }
        }
        if count == 0 {
            break;
        }
        profile.push(count);
        for &o in &active {
            in_frontier[o as usize] = false;
        }
        for &o in &fresh_rows {
            in_frontier[o as usize] = true;
        }
        std::mem::swap(&mut frontier, &mut upcoming);
        std::mem::swap(&mut active, &mut fresh_rows);
    }
    Ok(profile)
}

/// Diameter of `Γ(G, S)` from [`sphere_profile`]; errors if `S` does not generate.
pub fn fast_diameter(spec: &GroupSpec, gens: &GeneratingSet, config: &BfsConfig) -> Result<u32> {
    let profile = sphere_profile(spec, gens, config)?;
    if profile.iter().sum::<u64>() != spec.order() {
        return Err(Error::NotGenerating);
    }
    Ok((profile.len() - 1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::bfs_distance_map;

    fn profile_from_map(spec: &GroupSpec, gens: &GeneratingSet) -> Vec<u64> {
        let dist = bfs_distance_map(spec, gens).unwrap().to_vec();
        let max = *dist.iter().filter(|&&d| d != u32::MAX).max().unwrap() as usize;
        let mut out = vec![0u64; max + 1];
        for d in dist.into_iter().filter(|&d| d != u32::MAX) {
            out[d as usize] += 1;
        }
        out
    }

    #[test]
    fn rotation_helper() {
        let m = 70;
        let mut src = vec![0u64; 2];
        for j in [0usize, 5, 63, 64, 69] {
            src[j / 64] |= 1 << (j % 64);
        }
        for shift in [0usize, 1, 6, 63, 64, 69] {
            let mut doubled = vec![0u64; (m + 128) / 64 + 2];
            write_doubled(&mut doubled, &src, m);
            let mut dst = vec![0u64; 2];
            or_window(&mut dst, &doubled, m, shift);
            for j in 0..m {
                let want = (src[j / 64] >> (j % 64)) & 1;
                let k = (j + shift) % m;
                assert_eq!((dst[k / 64] >> (k % 64)) & 1, want, "shift {shift} j {j}");
            }
            assert_eq!(dst[1] >> 6, 0, "padding stays clear");
        }
    }

    #[test]
    fn matches_distance_map_profiles() {
        let cases = [
            ("ut:7,3", "1,0,0;0,1,0;3,5,2"),
            ("ut:3,4", "1,0,0,0,0,0;0,1,0,0,0,0;0,0,1,1,2,0"),
            ("ut:70,3", "1,0,0;0,1,0;3,5,2"),
            ("abelian:5,13", "1,2;0,3"),
            ("abelian:130", "1;40"),
            ("ut:5,2", "2"),
        ];
        for (spec, gens) in cases {
            let spec: GroupSpec = spec.parse().unwrap();
            let gens = GeneratingSet::parse(&spec, gens).unwrap();
            let fast = sphere_profile(&spec, &gens, &BfsConfig::default()).unwrap();
            assert_eq!(fast, profile_from_map(&spec, &gens), "{spec}");
        }
    }

    #[test]
    fn non_generating_sets_are_detected() {
        let spec: GroupSpec = "abelian:6,4".parse().unwrap();
        let gens = GeneratingSet::parse(&spec, "2,0;0,1").unwrap();
        assert!(matches!(fast_diameter(&spec, &gens, &BfsConfig::default()), Err(Error::NotGenerating)));
    }
}
