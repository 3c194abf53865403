//! Group law, encoding and lower-central-series predicates.
//!
//! Nested commutators use the convention `[x, y] = x y x⁻¹ y⁻¹` and are
//! right-normed: `[g_1, [g_2, …, [g_{i-1}, g_i]…]]`. With this orientation
//! the elementary matrices satisfy `[E_12, [E_23, E_34]] = E_14`, so the
//! trilinear layer value of the standard basis of `H_{q,4}` is `+1`.

use serde::{Deserialize, Serialize};

use super::spec::{Family, GroupSpec};
use crate::error::{Error, Result};

/// Dense index of a group element.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementCode(pub u64);

impl ElementCode {
    pub const IDENTITY: ElementCode = ElementCode(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl GroupSpec {
    pub fn identity(&self) -> ElementCode {
        ElementCode::IDENTITY
    }

    pub fn check(&self, a: ElementCode) -> Result<()> {
        if a.0 < self.order() {
            Ok(())
        } else {
            Err(Error::InvalidElement { index: a.0, order: self.order() })
        }
    }

    pub fn encode(&self, entries: &[u64]) -> Result<ElementCode> {
        if entries.len() != self.digits() {
            return Err(Error::Precondition(format!("expected {} entries, got {}", self.digits(), entries.len())));
        }
        if let Some((e, m)) = entries.iter().zip(self.radices()).find(|(e, m)| e >= m) {
            return Err(Error::Precondition(format!("entry {e} is not reduced modulo {m}")));
        }
        Ok(self.encode_unchecked(entries))
    }

    /// Encodes reduced entries without validation.
    #[inline]
    pub fn encode_unchecked(&self, entries: &[u64]) -> ElementCode {
        ElementCode(entries.iter().zip(self.weights()).map(|(e, w)| e * w).sum())
    }

    pub fn decode(&self, a: ElementCode) -> Result<Vec<u64>> {
        self.check(a)?;
        let mut out = vec![0; self.digits()];
        self.decode_into(a, &mut out);
        Ok(out)
    }

    #[inline]
    pub fn decode_into(&self, a: ElementCode, out: &mut [u64]) {
        let mut rest = a.0;
        for (slot, &m) in out.iter_mut().zip(self.radices()).rev() {
            *slot = rest % m;
            rest /= m;
        }
    }

    /// Product of entry vectors: componentwise sum, resp. matrix product mod q.
    pub fn mul_entries(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        match self.family() {
            Family::Abelian { moduli } => {
                for t in 0..moduli.len() {
                    out[t] = (a[t] + b[t]) % moduli[t];
                }
            }
            Family::Unitriangular { q, .. } => {
                let q = *q;
                for (p, terms) in self.product_terms().iter().enumerate() {
                    let mut acc = (a[p] + b[p]) % q;
                    for &(left, right) in terms {
                        acc = (acc + a[left] * b[right] % q) % q;
                    }
                    out[p] = acc;
                }
            }
        }
    }

    pub fn inv_entries(&self, a: &[u64], out: &mut [u64]) {
        match self.family() {
            Family::Abelian { moduli } => {
                for t in 0..moduli.len() {
                    out[t] = (moduli[t] - a[t]) % moduli[t];
                }
            }
            Family::Unitriangular { q, .. } => {
                // (A X)_ij = 0 for i < j gives X_ij = -(A_ij + sum_l A_il X_lj);
                // X_lj sits on a lower superdiagonal, hence already computed.
                let q = *q;
                for (p, terms) in self.product_terms().iter().enumerate() {
                    let mut acc = a[p];
                    for &(left, right) in terms {
                        acc = (acc + a[left] * out[right] % q) % q;
                    }
                    out[p] = (q - acc) % q;
                }
            }
        }
    }

    pub fn mul(&self, a: ElementCode, b: ElementCode) -> Result<ElementCode> {
        let (x, y) = (self.decode(a)?, self.decode(b)?);
        let mut out = vec![0; self.digits()];
        self.mul_entries(&x, &y, &mut out);
        Ok(self.encode_unchecked(&out))
    }

    pub fn inv(&self, a: ElementCode) -> Result<ElementCode> {
        let x = self.decode(a)?;
        let mut out = vec![0; self.digits()];
        self.inv_entries(&x, &mut out);
        Ok(self.encode_unchecked(&out))
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, x: ElementCode, y: ElementCode) -> Result<ElementCode> {
        let xy = self.mul(x, y)?;
        let xi = self.inv(x)?;
        let yi = self.inv(y)?;
        self.mul(self.mul(xy, xi)?, yi)
    }

    /// Right-normed nested commutator `[g_1, [g_2, …, [g_{n-1}, g_n]…]]`.
    /// A single element is returned unchanged.
    pub fn nested_commutator(&self, elems: &[ElementCode]) -> Result<ElementCode> {
        let (&last, rest) = elems.split_last().ok_or_else(|| Error::Precondition("empty commutator".into()))?;
        rest.iter().rev().try_fold(last, |acc, &g| self.commutator(g, acc))
    }

    /// Image in `G^ab`: the first superdiagonal for `H_{q,d}`, the identity map otherwise.
    pub fn abelianise(&self, a: ElementCode) -> Result<ElementCode> {
        self.check(a)?;
        Ok(match self.family() {
            Family::Abelian { .. } => a,
            Family::Unitriangular { d, .. } => ElementCode(a.0 / self.weights()[d - 2]),
        })
    }

    /// Canonical lift of an abelianised element: higher superdiagonals zero.
    pub fn lift_abelian(&self, a: ElementCode) -> Result<ElementCode> {
        let ab = self.abelianisation();
        ab.check(a)?;
        Ok(match self.family() {
            Family::Abelian { .. } => a,
            Family::Unitriangular { d, .. } => ElementCode(a.0 * self.weights()[d - 2]),
        })
    }

    /// Membership in the `i`-th term of the lower central series.
    ///
    /// For `H_{q,d}` this is the pattern predicate: every entry on
    /// superdiagonals `1..i-1` vanishes, i.e. the leading digits are zero.
    pub fn lcs_member(&self, i: usize, a: ElementCode) -> Result<bool> {
        if i == 0 {
            return Err(Error::Precondition("lower central series is indexed from 1".into()));
        }
        self.check(a)?;
        Ok(a.0 < self.lcs_bound(i))
    }

    /// `|G^(i)|`; elements of `G^(i)` are exactly the codes below this bound.
    pub fn lcs_bound(&self, i: usize) -> u64 {
        if i <= 1 {
            return self.order();
        }
        if i > self.class() {
            return 1;
        }
        let start = self.layer_range(i).start;
        self.weights()[start] * self.radices()[start]
    }

    /// Coset key of `a` modulo `G^(i+1)`: digits of layers `> i` zeroed.
    pub fn coset_key(&self, i: usize, a: ElementCode) -> ElementCode {
        let modulus = self.lcs_bound(i + 1);
        ElementCode(a.0 - a.0 % modulus)
    }

    /// Coordinates of `a ∈ G^(i)` in the layer group `G^(i) / G^(i+1)`.
    pub fn layer_project(&self, i: usize, a: ElementCode) -> Result<ElementCode> {
        if !self.lcs_member(i, a)? {
            return Err(Error::Precondition(format!("element is not in G^({i})")));
        }
        Ok(ElementCode(a.0 / self.lcs_bound(i + 1)))
    }

    /// Canonical representative in `G` of a layer-`i` value.
    pub fn layer_lift(&self, i: usize, v: ElementCode) -> Result<ElementCode> {
        self.layer_spec(i).check(v)?;
        Ok(ElementCode(v.0 * self.lcs_bound(i + 1)))
    }

    /// Class of the nested commutator of canonical lifts of `tuple` in
    /// `G^(i) / G^(i+1)`, as a code of [`GroupSpec::layer_spec`]`(i)`.
    pub fn multilinear_layer_map(&self, i: usize, tuple: &[ElementCode]) -> Result<ElementCode> {
        if i == 0 || i > self.class() {
            return Err(Error::Precondition(format!("layer {i} outside 1..={}", self.class())));
        }
        if tuple.len() != i {
            return Err(Error::Precondition(format!("layer {i} needs a {i}-tuple, got {} entries", tuple.len())));
        }
        let lifts = tuple.iter().map(|&g| self.lift_abelian(g)).collect::<Result<Vec<_>>>()?;
        let nested = self.nested_commutator(&lifts)?;
        self.layer_project(i, ElementCode(nested.0 - nested.0 % self.lcs_bound(i + 1)))
    }

    /// Whether the symmetric closure of `gens` generates the group.
    ///
    /// A subset of a nilpotent group generates it iff its image generates the
    /// abelianisation, which is decided by an echelon form over `⊕ Z/m_t`.
    pub fn generates(&self, gens: &[ElementCode]) -> Result<bool> {
        if gens.is_empty() {
            return Err(Error::Precondition("empty generator list".into()));
        }
        let ab = self.abelianisation();
        let mut echelon = super::echelon::ModEchelon::new(ab.radices().to_vec());
        let mut digits = vec![0; ab.digits()];
        for &g in gens {
            ab.decode_into(self.abelianise(g)?, &mut digits);
            echelon.push(&digits);
        }
        Ok(echelon.is_full())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(q: u64, d: usize) -> GroupSpec {
        GroupSpec::unitriangular(q, d).unwrap()
    }

    fn code(spec: &GroupSpec, e: &[u64]) -> ElementCode {
        spec.encode(e).unwrap()
    }

    /// Plain 3x3 matrix product mod q, independent of the slot tables.
    fn matmul3(a: [u64; 3], b: [u64; 3], q: u64) -> [u64; 3] {
        let m = |v: [u64; 3]| [[1, v[0], v[2]], [0, 1, v[1]], [0, 0, 1]];
        let (x, y) = (m(a), m(b));
        let mut z = [[0u64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                z[i][j] = (0..3).map(|l| x[i][l] * y[l][j]).sum::<u64>() % q;
            }
        }
        [z[0][1], z[1][2], z[0][2]]
    }

    #[test]
    fn abelian_law() {
        let z5 = GroupSpec::abelian(vec![5]).unwrap();
        assert_eq!(z5.mul(ElementCode(2), ElementCode(4)).unwrap(), ElementCode(1));
        assert_eq!(z5.inv(ElementCode(2)).unwrap(), ElementCode(3));
        assert_eq!(z5.commutator(ElementCode(2), ElementCode(3)).unwrap(), ElementCode::IDENTITY);
        assert!(matches!(z5.mul(ElementCode(5), ElementCode(0)), Err(Error::InvalidElement { index: 5, order: 5 })));
    }

    #[test]
    fn heisenberg_products_match_matrices() {
        let g = h(5, 3);
        assert_eq!(g.decode(g.mul(code(&g, &[1, 0, 0]), code(&g, &[0, 1, 0])).unwrap()).unwrap(), vec![1, 1, 1]);
        for a in 0..g.order() {
            for b in (0..g.order()).step_by(7) {
                let (x, y) = (g.decode(ElementCode(a)).unwrap(), g.decode(ElementCode(b)).unwrap());
                let expect = matmul3([x[0], x[1], x[2]], [y[0], y[1], y[2]], 5);
                let got = g.decode(g.mul(ElementCode(a), ElementCode(b)).unwrap()).unwrap();
                assert_eq!(got, expect.to_vec());
            }
        }
    }

    #[test]
    fn heisenberg_inverse_and_commutator() {
        let g = h(5, 3);
        let x = code(&g, &[1, 1, 1]);
        assert_eq!(g.decode(g.inv(x).unwrap()).unwrap(), vec![4, 4, 0]);
        assert_eq!(matmul3([1, 1, 1], [4, 4, 0], 5), [0, 0, 0]);
        assert_eq!(g.inv(g.identity()).unwrap(), g.identity());
        for q in [2, 3, 7] {
            let g = h(q, 3);
            let c = g.commutator(code(&g, &[1, 0, 0]), code(&g, &[0, 1, 0])).unwrap();
            assert_eq!(g.decode(c).unwrap(), vec![0, 0, 1]);
        }
    }

    #[test]
    fn identity_law_and_inverses_everywhere() {
        for spec in [h(3, 4), h(4, 3), GroupSpec::abelian(vec![4, 6]).unwrap()] {
            for a in (0..spec.order()).map(ElementCode) {
                assert_eq!(spec.mul(spec.identity(), a).unwrap(), a);
                assert_eq!(spec.mul(a, spec.identity()).unwrap(), a);
                assert_eq!(spec.mul(a, spec.inv(a).unwrap()).unwrap(), spec.identity());
                assert_eq!(spec.commutator(a, a).unwrap(), spec.identity());
            }
        }
    }

    #[test]
    fn encode_rejects_bad_entries() {
        let g = h(5, 3);
        assert!(g.encode(&[5, 0, 0]).is_err());
        assert!(g.encode(&[0, 0]).is_err());
        assert_eq!(g.encode(&[0, 0, 0]).unwrap(), ElementCode::IDENTITY);
    }

    #[test]
    fn abelianise_reads_first_superdiagonal() {
        let g = h(5, 3);
        let ab = g.abelianisation();
        let img = g.abelianise(code(&g, &[2, 3, 4])).unwrap();
        assert_eq!(ab.decode(img).unwrap(), vec![2, 3]);
        let x = code(&g, &[1, 2, 3]);
        let y = code(&g, &[4, 4, 1]);
        assert_eq!(g.abelianise(g.commutator(x, y).unwrap()).unwrap(), ElementCode(0));
    }

    #[test]
    fn lcs_pattern_examples() {
        let g = h(3, 4);
        let corner = code(&g, &[0, 0, 0, 0, 0, 1]);
        assert!(g.lcs_member(3, corner).unwrap());
        assert!(!g.lcs_member(4, corner).unwrap());
        let second = code(&g, &[0, 0, 0, 1, 0, 0]);
        assert!(g.lcs_member(2, second).unwrap());
        assert!(!g.lcs_member(3, second).unwrap());
        assert!(!g.lcs_member(2, code(&g, &[0, 1, 0, 0, 0, 0])).unwrap());
        for i in 1..6 {
            assert!(g.lcs_member(i, g.identity()).unwrap());
        }
        assert!(g.lcs_member(0, corner).is_err());
        let a = GroupSpec::abelian(vec![6]).unwrap();
        assert!(!a.lcs_member(2, ElementCode(3)).unwrap());
        assert!(a.lcs_member(1, ElementCode(3)).unwrap());
    }

    #[test]
    fn coset_keys_and_layers() {
        let g = h(3, 4);
        let a = code(&g, &[0, 0, 0, 2, 1, 2]);
        assert_eq!(g.decode(g.coset_key(2, a)).unwrap(), vec![0, 0, 0, 2, 1, 0]);
        assert_eq!(g.layer_spec(2).decode(g.layer_project(2, a).unwrap()).unwrap(), vec![2, 1]);
        let v = g.layer_project(2, a).unwrap();
        assert_eq!(g.layer_lift(2, v).unwrap(), g.coset_key(2, a));
    }

    #[test]
    fn bilinear_layer_map_on_heisenberg() {
        let g = h(5, 3);
        let ab = g.abelianisation();
        for u in 0..ab.order() {
            for v in 0..ab.order() {
                let (uu, vv) = (ab.decode(ElementCode(u)).unwrap(), ab.decode(ElementCode(v)).unwrap());
                let expect = (uu[0] * vv[1] + 25 - uu[1] * vv[0] % 5) % 5;
                let got = g.multilinear_layer_map(2, &[ElementCode(u), ElementCode(v)]).unwrap();
                assert_eq!(got, ElementCode(expect));
            }
        }
        assert!(g.multilinear_layer_map(3, &[ElementCode(1); 3]).is_err());
        assert!(g.multilinear_layer_map(2, &[ElementCode(1)]).is_err());
    }

    #[test]
    fn trilinear_sign_convention() {
        let g = h(7, 4);
        let ab = g.abelianisation();
        let e = |i: usize| {
            let mut v = vec![0; 3];
            v[i] = 1;
            ab.encode(&v).unwrap()
        };
        let val = g.multilinear_layer_map(3, &[e(0), e(1), e(2)]).unwrap();
        assert_eq!(val, ElementCode(1));
        let flipped = g.multilinear_layer_map(3, &[e(1), e(0), e(2)]).unwrap();
        // [E23, [E12, E34]] = [E23, id] = id
        assert_eq!(flipped, ElementCode(0));
        assert_eq!(g.multilinear_layer_map(3, &[e(0), ElementCode(0), e(2)]).unwrap(), ElementCode(0));
    }

    #[test]
    fn generation_examples() {
        let z4 = GroupSpec::abelian(vec![4]).unwrap();
        assert!(!z4.generates(&[ElementCode(2)]).unwrap());
        assert!(z4.generates(&[ElementCode(3)]).unwrap());
        for q in 2..=7 {
            let g = h(q, 3);
            let (x, y) = (code(&g, &[1, 0, 0]), code(&g, &[0, 1, 0]));
            assert!(g.generates(&[x, y]).unwrap());
            assert!(!g.generates(&[x]).unwrap());
        }
        assert!(z4.generates(&[]).is_err());
    }
}
