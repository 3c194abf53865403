use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two supported families of finite nilpotent groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Z/m_1 × … × Z/m_r`.
    Abelian { moduli: Vec<u64> },
    /// `H_{q,d}`: `d × d` upper unitriangular matrices over `Z/q`.
    Unitriangular { q: u64, d: usize },
}

/// A concrete finite nilpotent group together with its mixed-radix layout.
///
/// Elements are addressed by a dense index in `[0, order)`. The index is the
/// big-endian mixed-radix value of the entry vector, so the first entry is the
/// most significant digit. For `H_{q,d}` the entries are the strictly upper
/// triangular matrix entries listed superdiagonal by superdiagonal, starting
/// from the one next to the main diagonal and reading left to right inside
/// each superdiagonal. The corner entry `(1,d)` is therefore the least
/// significant digit and the abelianisation is a prefix of the digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    family: Family,
    radices: Vec<u64>,
    weights: Vec<u64>,
    order: u64,
    /// `(row, col)` of each entry, unitriangular only.
    positions: Vec<(usize, usize)>,
    /// For each entry `(i,j)`, the slot pairs `((i,l), (l,j))` with `i < l < j`.
    terms: Vec<Vec<(usize, usize)>>,
}

impl GroupSpec {
    pub fn abelian(moduli: Vec<u64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::Precondition("abelian spec needs at least one modulus".into()));
        }
        if let Some(m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::Precondition(format!("modulus {m} is below 2")));
        }
        let radices = moduli.clone();
        Self::build(Family::Abelian { moduli }, radices, Vec::new())
    }

    pub fn unitriangular(q: u64, d: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Precondition(format!("modulus q = {q} is below 2")));
        }
        if d < 2 {
            return Err(Error::Precondition(format!("dimension d = {d} is below 2")));
        }
        let mut positions = Vec::with_capacity(d * (d - 1) / 2);
        for offset in 1..d {
            for row in 0..d - offset {
                positions.push((row, row + offset));
            }
        }
        let radices = vec![q; positions.len()];
        let mut spec = Self::build(Family::Unitriangular { q, d }, radices, positions)?;
        spec.terms = spec
            .positions
            .iter()
            .map(|&(i, j)| (i + 1..j).map(|l| (spec.position_index(i, l), spec.position_index(l, j))).collect())
            .collect();
        Ok(spec)
    }

    fn build(family: Family, radices: Vec<u64>, positions: Vec<(usize, usize)>) -> Result<Self> {
        let mut weights = vec![0u64; radices.len()];
        let mut acc: u64 = 1;
        for (w, &m) in weights.iter_mut().zip(&radices).rev() {
            *w = acc;
            acc = acc.checked_mul(m).ok_or_else(|| Error::Resource("group order overflows 64 bits".into()))?;
        }
        Ok(GroupSpec { family, radices, weights, order: acc, positions, terms: Vec::new() })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.family, Family::Abelian { .. })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of generators of the abelianisation: `r`, resp. `d - 1`.
    pub fn rank(&self) -> usize {
        match &self.family {
            Family::Abelian { moduli } => moduli.len(),
            Family::Unitriangular { d, .. } => d - 1,
        }
    }

    /// Nilpotency class: 1, resp. `d - 1`.
    pub fn class(&self) -> usize {
        match &self.family {
            Family::Abelian { .. } => 1,
            Family::Unitriangular { d, .. } => d - 1,
        }
    }

    pub fn abelianisation(&self) -> GroupSpec {
        match &self.family {
            Family::Abelian { .. } => self.clone(),
            Family::Unitriangular { q, d } => GroupSpec::abelian(vec![*q; d - 1]).expect("q >= 2 and d >= 2"),
        }
    }

    /// Number of entries (mixed-radix digits) of an element.
    pub fn digits(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// Place value of each digit.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// `(row, col)` of every entry, 0-based. Empty for abelian specs.
    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    /// Bilinear terms of the matrix product feeding each entry.
    pub(crate) fn product_terms(&self) -> &[Vec<(usize, usize)>] {
        &self.terms
    }

    /// Digit slot of entry `(row, col)` of a unitriangular spec.
    pub fn position_index(&self, row: usize, col: usize) -> usize {
        let Family::Unitriangular { d, .. } = self.family else {
            panic!("position_index on an abelian spec");
        };
        debug_assert!(row < col && col < d);
        let offset = col - row;
        // entries on superdiagonals 1..offset-1 come first
        (1..offset).map(|t| d - t).sum::<usize>() + row
    }

    /// Digit range occupied by layer `i` of the lower central series
    /// (`G^(i) / G^(i+1)`), for `1 <= i <= class`.
    pub fn layer_range(&self, i: usize) -> std::ops::Range<usize> {
        assert!(i >= 1 && i <= self.class(), "layer {i} out of range");
        match &self.family {
            Family::Abelian { moduli } => 0..moduli.len(),
            Family::Unitriangular { d, .. } => {
                let start: usize = (1..i).map(|t| d - t).sum();
                start..start + (d - i)
            }
        }
    }

    /// Group of the abelian layer `G^(i) / G^(i+1)`.
    pub fn layer_spec(&self, i: usize) -> GroupSpec {
        let range = self.layer_range(i);
        GroupSpec::abelian(self.radices[range].to_vec()).expect("radices are >= 2")
    }

    /// Plain-text descriptor, `abelian:m1,m2,...` or `ut:q,d`.
    pub fn descriptor(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Abelian { moduli } => {
                let parts: Vec<String> = moduli.iter().map(u64::to_string).collect();
                write!(f, "abelian:{}", parts.join(","))
            }
            Family::Unitriangular { q, d } => write!(f, "ut:{q},{d}"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) =
            s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("group descriptor `{s}` lacks a `:`")))?;
        let numbers = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad number `{t}` in `{s}`"))))
            .collect::<Result<Vec<u64>>>()?;
        match kind.trim() {
            "abelian" => GroupSpec::abelian(numbers),
            "ut" => match numbers[..] {
                [q, d] => GroupSpec::unitriangular(q, d as usize),
                _ => Err(Error::Parse(format!("`{s}`: expected ut:q,d"))),
            },
            other => Err(Error::Parse(format!("unknown group family `{other}`"))),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let h = GroupSpec::unitriangular(5, 4).unwrap();
        assert_eq!(h.order(), 5u64.pow(6));
        assert_eq!(h.rank(), 3);
        assert_eq!(h.class(), 3);
        assert_eq!(h.abelianisation().order(), 125);

        let a = GroupSpec::abelian(vec![4, 6]).unwrap();
        assert_eq!(a.order(), 24);
        assert_eq!(a.class(), 1);
        assert_eq!(a.abelianisation(), a);
    }

    #[test]
    fn entry_layout() {
        let h = GroupSpec::unitriangular(3, 4).unwrap();
        assert_eq!(h.positions(), &[(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)]);
        for (slot, &(r, c)) in h.positions().iter().enumerate() {
            assert_eq!(h.position_index(r, c), slot);
        }
        assert_eq!(h.layer_range(1), 0..3);
        assert_eq!(h.layer_range(2), 3..5);
        assert_eq!(h.layer_range(3), 5..6);
        assert_eq!(*h.weights().last().unwrap(), 1);
    }

    #[test]
    fn descriptors_parse_and_print() {
        for text in ["abelian:5", "abelian:199,199", "ut:5,3", "ut:16,4"] {
            let spec: GroupSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("ut:1,3".parse::<GroupSpec>().is_err());
        assert!("ut:5".parse::<GroupSpec>().is_err());
        assert!("abelian:".parse::<GroupSpec>().is_err());
        assert!("free:2".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn order_overflow_is_reported() {
        assert!(matches!(GroupSpec::unitriangular(1 << 20, 6), Err(Error::Resource(_))));
    }
}
