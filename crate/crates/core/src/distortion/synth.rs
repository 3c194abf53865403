//! Short words for elements of the lower central series via commutator
//! distortion.
//!
//! A layer-`i` element is first written as `Σ_f λ_f [f]` over nested
//! commutators of positive generators. Coefficients sharing the first `i-1`
//! slots are collected into one abelianised element `y_g`, which is replaced
//! by the net letter counts of a geodesic for `y_g` in `Γ(G^ab, S)`. Each
//! count `μ` is then split as `Σ a_h^i + r` and emitted as nested commutators
//! with every slot repeated `a_h` times, plus `r` unit commutators.

use num_integer::Integer;

use super::power::{n_required, power_decompose, proof_constant};
use super::word::{word_eval, Word};
use crate::error::{Error, Result};
use crate::group::echelon::ModEchelon;
use crate::group::{ElementCode, GeneratingSet, GroupSpec, Letter};
use crate::metrics::{shortest_word, DistanceMap};

/// Length of a right-normed nested commutator of `c` single letters.
pub fn nested_length(c: u32) -> u64 {
    (1..c).fold(1, |l, _| 2 + 2 * l)
}

/// `K(k, c) = ℓ_c (n_c + C_c) k^{c-1} k^{1-1/c}`: a layer-`c` word from
/// [`synthesize_layer_word`] has length at most `K(k,c) · diam(G^ab, S)^{1/c}`.
///
/// Per pair `(g, x)` the blocks cost `ℓ_c (Σ a_h + r) ≤ ℓ_c (n_c + C_c) μ^{1/c}`;
/// summing `μ^{1/c}` over at most `k` letters with `Σ|μ| ≤ diam` gives the
/// factor `k^{1-1/c}` and there are `k^{c-1}` prefixes `g`.
pub fn layer_constant(k: usize, c: u32) -> f64 {
    let k = k as f64;
    let c_f = c as f64;
    nested_length(c) as f64
        * (n_required(c) as f64 + proof_constant(c) as f64)
        * k.powf(c_f - 1.0)
        * k.powf(1.0 - 1.0 / c_f)
}

/// Constant `K` with `len(full_synthesize) ≤ diam_ab + K √diam_ab` whenever
/// `diam_ab ≥ 1`: the sum of [`layer_constant`] over layers `2..=class`.
pub fn full_constant(k: usize, class: usize) -> f64 {
    (2..=class as u32).map(|i| layer_constant(k, i)).sum()
}

fn check_abmap(spec: &GroupSpec, gens: &GeneratingSet, abmap: &DistanceMap) -> Result<()> {
    let ab = spec.abelianisation();
    if abmap.spec() != &ab || abmap.gens().positives() != gens.abelianised(spec)?.positives() {
        return Err(Error::Precondition(
            "abelian distance map was built for a different group or generating set".into(),
        ));
    }
    if !abmap.is_complete() {
        return Err(Error::NotGenerating);
    }
    Ok(())
}

/// Word congruent to the canonical lift of layer value `value` modulo `G^(i+1)`.
fn layer_word(
    spec: &GroupSpec,
    gens: &GeneratingSet,
    i: usize,
    value: ElementCode,
    abmap: &DistanceMap,
) -> Result<Word> {
    let layer = spec.layer_spec(i);
    let k = gens.k();
    let ab = spec.abelianisation();
    let ab_gens = gens.abelianised(spec)?;
    let ab_digits = ab_gens.positives().iter().map(|&z| ab.decode(z)).collect::<Result<Vec<_>>>()?;
    let exponent = layer.radices().iter().fold(1u64, |l, &m| l.lcm(&m)) as i128;

    let tuples = k.pow(i as u32);
    let mut echelon = ModEchelon::tracking(layer.radices().to_vec(), tuples, Some(exponent));
    let mut slots = vec![ElementCode::IDENTITY; i];
    for f in 0..tuples {
        for (pos, slot) in slots.iter_mut().enumerate() {
            *slot = ab_gens.positives()[tuple_digit(f, k, i, pos)];
        }
        let v = spec.multilinear_layer_map(i, &slots)?;
        echelon.push(&layer.decode(v)?);
        if echelon.is_full() {
            break;
        }
    }
    let lambda = echelon.solve(&layer.decode(value)?).ok_or_else(|| {
        Error::Precondition(format!("layer {i} value is not spanned by nested commutators of the generators"))
    })?;

    let mut out = Word::empty();
    let mut y = vec![0u64; ab.digits()];
    for prefix in 0..tuples / k {
        y.fill(0);
        for (x, digits) in ab_digits.iter().enumerate().take(k) {
            let l = lambda.get(prefix * k + x).copied().unwrap_or(0);
            if l == 0 {
                continue;
            }
            for ((acc, &d), &m) in y.iter_mut().zip(digits).zip(ab.radices()) {
                *acc = ((*acc as i128 + l * d as i128).rem_euclid(m as i128)) as u64;
            }
        }
        let geodesic = shortest_word(abmap, ab.encode(&y)?)?;
        let mut mu = vec![0i64; k];
        for l in geodesic.letters() {
            mu[l.gen] += if l.inverse { -1 } else { 1 };
        }
        let g: Vec<usize> = (0..i - 1).map(|pos| tuple_digit(prefix * k, k, i, pos)).collect();
        for (x, &m) in mu.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let block = power_block(&g, x, m.unsigned_abs(), i as u32);
            out.append(&if m < 0 { block.inverse() } else { block });
        }
    }
    Ok(out)
}

/// Digit `pos` (most significant first) of `f` written in base `k` with `i` digits.
fn tuple_digit(f: usize, k: usize, i: usize, pos: usize) -> usize {
    f / k.pow((i - 1 - pos) as u32) % k
}

/// Word for `μ · [g_1, …, g_{c-1}, x]` in the top of a class-`c` quotient.
fn power_block(g: &[usize], x: usize, mu: u64, c: u32) -> Word {
    let letters: Vec<Letter> = g.iter().copied().chain([x]).map(Letter::pos).collect();
    let unit = |times: usize| -> Word {
        let slots: Vec<Word> = letters.iter().map(|&l| Word(vec![l; times])).collect();
        Word::nested_commutator(&slots)
    };
    let pd = power_decompose(mu, c);
    let mut out = Word::empty();
    for &a in pd.parts.iter().filter(|&&a| a > 0) {
        out.append(&unit(a as usize));
    }
    out.append(&unit(1).repeat(pd.remainder as usize));
    out
}

/// Word evaluating exactly to `target ∈ G^(c)`, `c` the class of `spec`.
///
/// `abmap` is the distance map of `Γ(G^ab, S)` for the abelianised
/// generators, in the same order.
pub fn synthesize_layer_word(
    spec: &GroupSpec,
    gens: &GeneratingSet,
    target: ElementCode,
    abmap: &DistanceMap,
) -> Result<Word> {
    let c = spec.class();
    if !gens.generates(spec)? {
        return Err(Error::NotGenerating);
    }
    check_abmap(spec, gens, abmap)?;
    if !spec.lcs_member(c, target)? {
        return Err(Error::Precondition(format!("target is not in the top layer G^({c})")));
    }
    if target == spec.identity() {
        return Ok(Word::empty());
    }
    layer_word(spec, gens, c, spec.layer_project(c, target)?, abmap)
}

/// Word evaluating exactly to `target`, for groups of class at most 3.
///
/// A geodesic for the abelianised target comes first; the remaining factor
/// in `G^(2)` is handled layer by layer, computing each residual by exact
/// evaluation. The result reads `w_top · w_2 · w_1`.
pub fn full_synthesize(
    spec: &GroupSpec,
    gens: &GeneratingSet,
    target: ElementCode,
    abmap: &DistanceMap,
) -> Result<Word> {
    let class = spec.class();
    if class > 3 {
        return Err(Error::Precondition(format!("synthesis supports class at most 3, got {class}")));
    }
    if !gens.generates(spec)? {
        return Err(Error::NotGenerating);
    }
    check_abmap(spec, gens, abmap)?;
    spec.check(target)?;
    let w1 = shortest_word(abmap, spec.abelianise(target)?)?;
    if class == 1 {
        return Ok(w1);
    }
    let mut residual = spec.mul(target, spec.inv(word_eval(spec, gens, &w1)?)?)?;
    let mut middle = Word::empty();
    for i in 2..class {
        let w = layer_word(spec, gens, i, spec.layer_project(i, residual)?, abmap)?;
        residual = spec.mul(residual, spec.inv(word_eval(spec, gens, &w)?)?)?;
        let mut joined = w;
        joined.append(&middle);
        middle = joined;
    }
    let mut out = if residual == spec.identity() {
        Word::empty()
    } else {
        layer_word(spec, gens, class, spec.layer_project(class, residual)?, abmap)?
    };
    out.append(&middle);
    out.append(&w1);
    Ok(out)
}
