use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::echelon::ModEchelon;
use crate::group::{ElementCode, GeneratingSet, GroupSpec};
use crate::metrics::{fast_diameter, BfsConfig};

/// `L = {x ∈ Z^k : Σ_j x_j g_{·j} = 0 in ⊕ Z/m_t}` for a generating tuple
/// of columns `g_{·j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    k: usize,
    moduli: Vec<u64>,
    /// `r × k` residues, row `t` reduced modulo `m_t`.
    g: Vec<Vec<u64>>,
    covolume: u64,
}

impl IntegerLattice {
    pub fn from_generators(moduli: Vec<u64>, g: Vec<Vec<u64>>) -> Result<Self> {
        let spec = GroupSpec::abelian(moduli.clone())?;
        if g.len() != moduli.len() {
            return Err(Error::Precondition(format!(
                "generator matrix has {} rows for {} moduli",
                g.len(),
                moduli.len()
            )));
        }
        let k = g[0].len();
        if k == 0 || g.iter().any(|row| row.len() != k) {
            return Err(Error::Precondition("generator matrix rows must share a positive length".into()));
        }
        let g: Vec<Vec<u64>> =
            g.into_iter().zip(&moduli).map(|(row, &m)| row.into_iter().map(|v| v % m).collect()).collect();
        let lattice = IntegerLattice { k, covolume: spec.order(), moduli, g };
        if !spec.generates(&lattice.columns(&spec)?)? {
            return Err(Error::NotGenerating);
        }
        Ok(lattice)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn generator_matrix(&self) -> &[Vec<u64>] {
        &self.g
    }

    /// `[Z^k : L] = Π m_t`.
    pub fn covolume(&self) -> u64 {
        self.covolume
    }

    /// The abelian group `⊕ Z/m_t`.
    pub fn group(&self) -> GroupSpec {
        GroupSpec::abelian(self.moduli.clone()).expect("validated moduli")
    }

    fn columns(&self, spec: &GroupSpec) -> Result<Vec<ElementCode>> {
        (0..self.k).map(|j| spec.encode(&self.g.iter().map(|row| row[j]).collect::<Vec<_>>())).collect()
    }

    /// The columns of `g` as a generating set of [`IntegerLattice::group`].
    pub fn generating_set(&self) -> Result<GeneratingSet> {
        let spec = self.group();
        GeneratingSet::new(&spec, self.columns(&spec)?)
    }

    /// Whether `x ∈ L`.
    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.k
            && self.g.iter().zip(&self.moduli).all(|(row, &m)| {
                let m = m as i128;
                row.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>().rem_euclid(m) == 0
            })
    }

    /// Upper-triangular basis (rows) with positive diagonal, determinant
    /// equal to the covolume.
    ///
    /// `L` contains `N Z^k` for the exponent `N = lcm(m_t)`; its image in
    /// `(Z/N)^k` is the kernel of `x ↦ Σ x_j g_{·j}`, read off an echelon
    /// form that tracks coefficients. An echelon form of that kernel over
    /// `(Z/N)^k` then lifts to a triangular basis of `L`.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        let n = self.moduli.iter().fold(1u64, |l, &m| l.lcm(&m));
        let mut relations = ModEchelon::tracking(self.moduli.clone(), self.k, Some(n as i128));
        for j in 0..self.k {
            relations.push(&self.g.iter().map(|row| row[j]).collect::<Vec<_>>());
        }
        let mut kernel = ModEchelon::new(vec![n; self.k]);
        for coefs in relations.echelon().kernel {
            kernel.push_with(coefs, Vec::new());
        }
        kernel.echelon().pivots.into_iter().map(|p| p.values.into_iter().map(|v| v as i64).collect()).collect()
    }

    /// Largest, over cosets of `L` in `Z^k`, of the least `ℓ¹` norm of a
    /// representative: the diameter of `Γ(⊕ Z/m_t, ±columns)`.
    pub fn coset_diameter_exact(&self, cap: u64) -> Result<u32> {
        if self.covolume > cap {
            return Err(Error::Resource(format!("covolume {} exceeds the cap {cap}", self.covolume)));
        }
        let spec = self.group();
        fast_diameter(&spec, &self.generating_set()?, &BfsConfig::default())
    }

    pub fn descriptor(&self) -> String {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let g: Vec<u64> = self.g.iter().flatten().copied().collect();
        format!("lat:k={};mod={};g={}", self.k, join(&self.moduli), join(&g))
    }
}

impl fmt::Display for IntegerLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl FromStr for IntegerLattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("lattice descriptor `{s}` is not of the form lat:k=K;mod=..;g=.."));
        let body = s.trim().strip_prefix("lat:").ok_or_else(bad)?;
        let (mut k, mut moduli, mut g) = (None, None, None);
        for part in body.split(';') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let nums =
                || value.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<u64>>>();
            match key.trim() {
                "k" => k = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "mod" => moduli = Some(nums()?),
                "g" => g = Some(nums()?),
                _ => return Err(bad()),
            }
        }
        let (k, moduli, g) = (k.ok_or_else(bad)?, moduli.ok_or_else(bad)?, g.ok_or_else(bad)?);
        if k == 0 || g.len() != k * moduli.len() {
            return Err(Error::Parse(format!("g needs {}×{k} entries, got {}", moduli.len(), g.len())));
        }
        IntegerLattice::from_generators(moduli, g.chunks(k).map(<[u64]>::to_vec).collect())
    }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    sign * a[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{bfs_distance_map, diameter};

    #[test]
    fn small_examples() {
        let l = IntegerLattice::from_generators(vec![5], vec![vec![1, 2]]).unwrap();
        assert_eq!(l.covolume(), 5);
        assert!(l.contains(&[3, 1]) && l.contains(&[5, 0]) && !l.contains(&[1, 0]));
        assert_eq!(l.coset_diameter_exact(1 << 20).unwrap(), 1);
        for b in l.basis() {
            assert!(l.contains(&b));
        }
        assert_eq!(determinant(&l.basis()), 5);

        let q = 17;
        let l = IntegerLattice::from_generators(vec![q], vec![vec![1, 0, 0]]).unwrap();
        assert_eq!(l.basis(), vec![vec![17, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let l = IntegerLattice::from_generators(vec![q], vec![vec![1]]).unwrap();
        assert_eq!(l.coset_diameter_exact(1 << 20).unwrap(), 8);
    }

    #[test]
    fn non_generating_tuple_is_rejected() {
        assert!(matches!(IntegerLattice::from_generators(vec![6], vec![vec![2, 4]]), Err(Error::NotGenerating)));
        assert!(IntegerLattice::from_generators(vec![6], vec![vec![2, 3]]).is_ok());
    }

    #[test]
    fn descriptor_round_trip() {
        let l = IntegerLattice::from_generators(vec![4, 6], vec![vec![1, 0, 3], vec![0, 1, 5]]).unwrap();
        let d = l.descriptor();
        assert_eq!(d, "lat:k=3;mod=4,6;g=1,0,3,0,1,5");
        assert_eq!(d.parse::<IntegerLattice>().unwrap(), l);
        assert!("lat:k=2;mod=5;g=1".parse::<IntegerLattice>().is_err());
        assert!("k=2;mod=5;g=1,2".parse::<IntegerLattice>().is_err());
    }

    #[test]
    fn determinant_oracle() {
        assert_eq!(determinant(&[vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
    }

    #[test]
    fn mixed_moduli_bases() {
        for (moduli, g) in [
            (vec![4u64, 6], vec![vec![1u64, 0, 3], vec![0, 1, 5]]),
            (vec![12], vec![vec![4, 3]]),
            (vec![2, 2, 3], vec![vec![1, 0, 0, 1], vec![0, 1, 0, 1], vec![0, 0, 1, 2]]),
        ] {
            let l = IntegerLattice::from_generators(moduli, g).unwrap();
            let basis = l.basis();
            assert_eq!(determinant(&basis).unsigned_abs(), l.covolume() as u128);
            assert!(basis.iter().all(|b| l.contains(b)));
            let spec = l.group();
            let dm = bfs_distance_map(&spec, &l.generating_set().unwrap()).unwrap();
            assert_eq!(l.coset_diameter_exact(u64::MAX).unwrap(), diameter(&dm).unwrap());
        }
    }
}
