//! Decomposition of an integer into a bounded number of `i`-th powers plus a
//! small remainder.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// `λ = Σ_h a_h^i + r`, produced by taking greedy integer `i`-th roots
/// `n_required(i)` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerDecomposition {
    pub i: u32,
    pub lambda: u64,
    pub parts: Vec<u64>,
    pub remainder: u64,
}

impl PowerDecomposition {
    pub fn n_parts(&self) -> usize {
        self.parts.len()
    }

    /// `Σ a_h^i + r`, computed without overflow.
    pub fn reconstruct(&self) -> u128 {
        self.parts.iter().map(|&a| (a as u128).pow(self.i)).sum::<u128>() + self.remainder as u128
    }
}

/// Smallest `j ≥ 1` with `((i-1)/i)^j < 1/i`, i.e. `(i-1)^j · i < i^j`.
pub fn n_required(i: u32) -> u32 {
    assert!(i >= 1, "power index starts at 1");
    let (i, lesser) = (BigUint::from(i), BigUint::from(i - 1));
    let mut j = 1u32;
    loop {
        if lesser.pow(j) * &i < i.pow(j) {
            return j;
        }
        j += 1;
    }
}

/// `⌊λ^{1/i}⌋`, exact.
pub fn integer_root(lambda: u64, i: u32) -> u64 {
    assert!(i >= 1);
    if i == 1 || lambda < 2 {
        return lambda;
    }
    let fits = |a: u64| (a as u128).checked_pow(i).is_some_and(|p| p <= lambda as u128);
    let (mut lo, mut hi) = (1u64, 1u64 << (64 / i + 1).min(63));
    while !fits(lo) {
        lo /= 2;
    }
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn power_decompose(lambda: u64, i: u32) -> PowerDecomposition {
    let mut rest = lambda;
    let parts = (0..n_required(i))
        .map(|_| {
            let a = integer_root(rest, i);
            rest -= a.pow(i);
            a
        })
        .collect();
    PowerDecomposition { i, lambda, parts, remainder: rest }
}

/// `D_i = 2^i - 2`: one greedy step leaves `r ≤ D_i λ^{(i-1)/i}`, since
/// `(a+1)^i - 1 - a^i ≤ (2^i - 2) a^{i-1}` for `a ≥ 1`.
pub fn step_constant(i: u32) -> u64 {
    (1u64 << i) - 2
}

/// Exponent `s = Σ_{h<n} ((i-1)/i)^h = (i^n - (i-1)^n) / i^{n-1}` as an
/// unreduced fraction, with `n = n_required(i)`.
pub fn iterated_exponent(i: u32) -> (BigUint, BigUint) {
    let n = n_required(i);
    let (bi, lesser) = (BigUint::from(i), BigUint::from(i - 1));
    (bi.pow(n) - lesser.pow(n), bi.pow(n - 1))
}

/// `C_i = ⌈D_i^s⌉`. After `n_required(i)` steps the remainder is at most
/// `D_i^s λ^{((i-1)/i)^n} ≤ C_i λ^{1/i}`.
///
/// Exact for `i ≤ 4` (checked as `C^den ≥ D^num` in big integers); larger
/// `i` round a float evaluation upward.
pub fn proof_constant(i: u32) -> u64 {
    let d = step_constant(i);
    if d == 0 {
        return 0;
    }
    let (num, den) = iterated_exponent(i);
    let approx = (d as f64).powf(ratio(&num, &den));
    if i > 4 {
        return (approx * (1.0 + 1e-9)).ceil() as u64;
    }
    let num = u32::try_from(&num).expect("small exponent");
    let den = u32::try_from(&den).expect("small exponent");
    let target = BigUint::from(d).pow(num);
    let mut c = (approx.floor() as u64).saturating_sub(1).max(1);
    while BigUint::from(c).pow(den) < target {
        c += 1;
    }
    c
}

fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    let bits = num.bits().max(den.bits()).saturating_sub(60);
    let n = (num >> bits).to_u64_digits().first().copied().unwrap_or(0) as f64;
    let d = (den >> bits).to_u64_digits().first().copied().unwrap_or(0) as f64;
    n / d
}

/// Whether `r ≤ c · λ^{1/i}`, decided exactly as `r^i ≤ c^i λ`.
pub fn remainder_within(r: u64, lambda: u64, i: u32, c: u64) -> bool {
    if r == 0 {
        return true;
    }
    let lhs = BigUint::from(r).pow(i);
    let rhs = BigUint::from(c).pow(i) * BigUint::from(lambda);
    lhs <= rhs
}

/// `max r / λ^{1/i}` over `1 ≤ λ ≤ max_lambda`.
pub fn empirical_constant(i: u32, max_lambda: u64) -> f64 {
    (1..=max_lambda)
        .map(|l| power_decompose(l, i).remainder as f64 / (l as f64).powf(1.0 / i as f64))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_counts() {
        assert_eq!(n_required(1), 1);
        assert_eq!(n_required(2), 2);
        assert_eq!(n_required(3), 3);
        assert_eq!(n_required(4), 5);
    }

    #[test]
    fn examples() {
        let d = power_decompose(10, 2);
        assert_eq!((d.parts.as_slice(), d.remainder), (&[3u64, 1][..], 0));
        let d = power_decompose(7, 3);
        assert_eq!((d.parts.as_slice(), d.remainder), (&[1u64, 1, 1][..], 4));
        let d = power_decompose(12345, 1);
        assert_eq!((d.parts.as_slice(), d.remainder), (&[12345u64][..], 0));
        assert_eq!(power_decompose(0, 3).reconstruct(), 0);
    }

    #[test]
    fn roots_are_exact() {
        for i in 1..=6u32 {
            for l in (0..5000u64).chain([u64::MAX, u64::MAX - 1, 1 << 62]) {
                let a = integer_root(l, i) as u128;
                assert!(a.pow(i) <= l as u128);
                assert!((a + 1).checked_pow(i).is_none_or(|p| p > l as u128), "i={i} l={l}");
            }
        }
    }

    #[test]
    fn constants() {
        assert_eq!(proof_constant(1), 0);
        // 2^{3/2} ≈ 2.83
        assert_eq!(proof_constant(2), 3);
        // 6^{19/9} ≈ 43.9
        assert_eq!(proof_constant(3), 44);
        for i in 2..=4 {
            let c = proof_constant(i);
            let (num, den) = iterated_exponent(i);
            let (num, den) = (u32::try_from(&num).unwrap(), u32::try_from(&den).unwrap());
            let d = BigUint::from(step_constant(i));
            assert!(BigUint::from(c).pow(den) >= d.pow(num));
            assert!(BigUint::from(c - 1).pow(den) < d.pow(num));
        }
    }

    #[test]
    fn remainders_respect_the_bound_small_range() {
        for i in 1..=4 {
            let c = proof_constant(i);
            for l in 1..20_000u64 {
                let d = power_decompose(l, i);
                assert_eq!(d.reconstruct(), l as u128);
                assert!(d.parts.windows(2).all(|w| w[0] >= w[1]));
                assert!(remainder_within(d.remainder, l, i, c), "i={i} l={l}");
            }
        }
    }
}
