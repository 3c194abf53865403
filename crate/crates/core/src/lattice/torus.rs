use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::integer::{determinant, IntegerLattice};
use super::reduce::lll;
use crate::error::{Error, Result};

/// Largest supported dimension for [`torus_diameter_l1`].
pub const MAX_TORUS_DIM: usize = 6;

/// Default cell budget for [`torus_diameter_l1`].
pub const DEFAULT_CELL_BUDGET: u64 = 4_000_000;

/// `covolume^{-1/k} · L` for an integral lattice `L`, kept as the integer
/// basis and the integer covolume so the determinant stays exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RescaledLattice {
    basis: Vec<Vec<i64>>,
    covolume: u64,
}

impl RescaledLattice {
    /// Rows of `basis` span the lattice; the covolume is `|det|`.
    pub fn from_integer_basis(basis: Vec<Vec<i64>>) -> Result<Self> {
        let k = basis.len();
        if k == 0 || basis.iter().any(|b| b.len() != k) {
            return Err(Error::Precondition("basis must be a nonempty square matrix".into()));
        }
        let det = determinant(&basis).unsigned_abs();
        if det == 0 {
            return Err(Error::Precondition("basis is singular".into()));
        }
        let covolume = u64::try_from(det).map_err(|_| Error::Resource("covolume exceeds u64".into()))?;
        Ok(RescaledLattice { basis, covolume })
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn integer_basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn covolume(&self) -> u64 {
        self.covolume
    }

    /// `covolume^{-1/k}`.
    pub fn scale(&self) -> f64 {
        (self.covolume as f64).powf(-1.0 / self.k() as f64)
    }

    /// The determinant-one basis in floating point.
    pub fn float_basis(&self) -> Vec<Vec<f64>> {
        let s = self.scale();
        self.basis.iter().map(|b| b.iter().map(|&v| v as f64 * s).collect()).collect()
    }

    /// Exact check that the integer basis has determinant `±covolume`.
    pub fn is_unimodular(&self) -> bool {
        determinant(&self.basis).unsigned_abs() == self.covolume as u128
    }
}

pub fn rescale(lattice: &IntegerLattice) -> RescaledLattice {
    RescaledLattice { basis: lattice.basis(), covolume: lattice.covolume() }
}

/// Certified interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lo, self.hi)
    }
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).expect("rows left");
        a.swap(p, c);
        let pivot = a[c][c];
        for v in a[c].iter_mut() {
            *v /= pivot;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                if f != 0.0 {
                    let pivot_row = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

struct Cell {
    center: Vec<f64>,
    half: Vec<f64>,
    upper: f64,
    candidates: Vec<u32>,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper.total_cmp(&other.upper) == Ordering::Equal
    }
}

impl Eq for Cell {}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper)
    }
}

struct Torus {
    basis: Vec<Vec<f64>>,
    norms: Vec<f64>,
    points: Vec<Vec<f64>>,
}

impl Torus {
    fn point(&self, t: &[f64]) -> Vec<f64> {
        let k = self.basis.len();
        (0..k).map(|i| t.iter().zip(&self.basis).map(|(tj, b)| tj * b[i]).sum()).collect()
    }

    /// Evaluates a cell: `(f(center), upper bound, surviving candidates)`.
    ///
    /// Each `‖x - v‖₁` is convex, so its maximum over the cell is taken at a
    /// vertex; the least such maximum over the candidates bounds `f` on the
    /// cell and never exceeds the Lipschitz bound `f(center) + w`.
    fn evaluate(&self, center: &[f64], half: &[f64], parent: &[u32]) -> (f64, f64, Vec<u32>) {
        let k = center.len();
        let x = self.point(center);
        let dists: Vec<f64> =
            parent.iter().map(|&c| self.points[c as usize].iter().zip(&x).map(|(v, y)| (v - y).abs()).sum()).collect();
        let f = dists.iter().copied().fold(f64::INFINITY, f64::min);
        let w: f64 = half.iter().zip(&self.norms).map(|(h, n)| h * n).sum();
        let keep: Vec<u32> =
            parent.iter().zip(&dists).filter(|&(_, &d)| d <= f + 2.0 * w + 1e-9 * (1.0 + d)).map(|(&c, _)| c).collect();
        // vertex s is x + Σ_j ±h_j b_j, built flat from vertex 0
        let mut vertices = vec![0.0; k << k];
        for i in 0..k {
            vertices[i] = x[i] - (0..k).map(|j| half[j] * self.basis[j][i]).sum::<f64>();
        }
        for s in 1..1usize << k {
            let j = s.trailing_zeros() as usize;
            let base = (s & (s - 1)) * k;
            for i in 0..k {
                vertices[s * k + i] = vertices[base + i] + 2.0 * half[j] * self.basis[j][i];
            }
        }
        let upper = keep
            .iter()
            .map(|&c| {
                let v = &self.points[c as usize];
                vertices
                    .chunks_exact(k)
                    .map(|y| v.iter().zip(y).map(|(a, b)| (a - b).abs()).sum::<f64>())
                    .fold(0.0, f64::max)
            })
            .fold(f + w, f64::min);
        (f, upper, keep)
    }
}

/// Certified enclosure of the `ℓ¹` covering radius `max_x min_{v∈L} ‖x-v‖₁`,
/// i.e. the diameter of `R^k / L` under the quotient `ℓ¹` metric.
pub fn torus_diameter_l1(lattice: &RescaledLattice, eps: f64) -> Result<Enclosure> {
    torus_diameter_l1_with(lattice, eps, DEFAULT_CELL_BUDGET)
}

/// Branch and bound over the fundamental parallelepiped of an LLL-reduced
/// basis. Distance to `L` is 1-Lipschitz in `ℓ¹`, so a cell with centre `c`
/// and half-widths `h_j` (in basis coordinates) satisfies
/// `f ≤ f(c) + Σ h_j ‖b_j‖₁`, tightened per cell by the vertex bound of
/// `Torus::evaluate`. Nearest points are searched among lattice
/// vectors whose coefficients lie within `max_i |B⁻¹_{ij}| · R` of the cell,
/// `R = ½ Σ ‖b_j‖₁` bounding `f`; each cell keeps only the candidates that
/// can still be nearest somewhere inside it.
pub fn torus_diameter_l1_with(lattice: &RescaledLattice, eps: f64, max_cells: u64) -> Result<Enclosure> {
    let k = lattice.k();
    if k > MAX_TORUS_DIM {
        return Err(Error::Precondition(format!("torus diameter supports k <= {MAX_TORUS_DIM}, got {k}")));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    let scale = lattice.scale();
    let reduced = lll(lattice.integer_basis().to_vec());
    let basis: Vec<Vec<f64>> = reduced.iter().map(|b| b.iter().map(|&v| v as f64).collect()).collect();
    let norms: Vec<f64> = basis.iter().map(|b| b.iter().map(|v| v.abs()).sum()).collect();
    let inverse = invert(&basis);
    let radius = 0.5 * norms.iter().sum::<f64>();
    let ranges: Vec<(i64, i64)> = (0..k)
        .map(|j| {
            let m = (0..k).map(|i| inverse[i][j].abs()).fold(0.0, f64::max) * (1.0 + 1e-9);
            ((-m * radius).floor() as i64 - 1, (1.0 + m * radius).ceil() as i64 + 1)
        })
        .collect();
    let total: f64 = ranges.iter().map(|&(a, b)| (b - a + 1) as f64).product();
    if total > 2e6 {
        return Err(Error::Resource(format!("{total} candidate lattice vectors; basis too skewed")));
    }
    let mut points = Vec::with_capacity(total as usize);
    let mut u: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'outer: loop {
        points.push((0..k).map(|i| u.iter().zip(&basis).map(|(&c, b)| c as f64 * b[i]).sum()).collect());
        for j in 0..k {
            if u[j] < ranges[j].1 {
                u[j] += 1;
                continue 'outer;
            }
            u[j] = ranges[j].0;
        }
        break;
    }
    let torus = Torus { basis, norms, points };

    // Floating error in f is far below this margin for the coordinates used here.
    let slack = 1e-9 * (1.0 + radius);
    let eps_u = eps / scale - 2.0 * slack;
    if eps_u <= 0.0 {
        return Err(Error::Precondition(format!("eps {eps} is below the floating-point resolution")));
    }
    let all: Vec<u32> = (0..torus.points.len() as u32).collect();
    let center = vec![0.5; k];
    let half = vec![0.5; k];
    let (f0, u0, keep) = torus.evaluate(&center, &half, &all);
    let mut lo = f0;
    let mut heap = BinaryHeap::new();
    heap.push(Cell { center, half, upper: u0, candidates: keep });
    let mut cells = 1u64;
    let finish = |lo: f64, hi: f64| Enclosure {
        lo: ((lo - slack) * scale).max(0.0) * (1.0 - 1e-12),
        hi: (hi + slack) * scale * (1.0 + 1e-12),
    };
    loop {
        let Some(top) = heap.pop() else {
            return Ok(finish(lo, lo));
        };
        if top.upper - lo <= eps_u {
            return Ok(finish(lo, top.upper.max(lo)));
        }
        if cells >= max_cells {
            return Err(Error::EnclosureBudget { lo: finish(lo, lo).lo, hi: finish(lo, top.upper).hi });
        }
        let j = (0..k)
            .max_by(|&a, &b| (top.half[a] * torus.norms[a]).total_cmp(&(top.half[b] * torus.norms[b])))
            .expect("k >= 1");
        for side in [-1.0, 1.0] {
            let mut center = top.center.clone();
            let mut half = top.half.clone();
            half[j] *= 0.5;
            center[j] += side * half[j];
            let (f, upper, keep) = torus.evaluate(&center, &half, &top.candidates);
            cells += 1;
            lo = lo.max(f);
            if upper > lo + eps_u {
                heap.push(Cell { center, half, upper, candidates: keep });
            } else if upper > lo {
                // cannot improve beyond eps; keep its bound for the final hi
                heap.push(Cell { center, half, upper, candidates: Vec::new() });
            }
        }
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Random congruence lattice `{x : Σ g_j x_j ≡ 0 mod q}` with a uniform
/// nonzero row `g`, rescaled to covolume one. A proxy for a Haar-random
/// unimodular lattice as `q → ∞`.
pub fn sample_haar_proxy<R: Rng + ?Sized>(k: usize, q: u64, rng: &mut R) -> Result<RescaledLattice> {
    if k < 2 {
        return Err(Error::Precondition("Haar proxy needs k >= 2".into()));
    }
    if !is_prime(q) {
        return Err(Error::Precondition(format!("Haar proxy modulus {q} is not prime")));
    }
    loop {
        let g: Vec<u64> = (0..k).map(|_| rng.gen_range(0..q)).collect();
        if g.iter().any(|&v| v != 0) {
            return Ok(rescale(&IntegerLattice::from_generators(vec![q], vec![g])?));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn identity(k: usize) -> RescaledLattice {
        let basis = (0..k).map(|i| (0..k).map(|j| (i == j) as i64).collect()).collect();
        RescaledLattice::from_integer_basis(basis).unwrap()
    }

    /// Grid maximum of the distance to `L`, by brute force over nearby
    /// lattice vectors. A lower bound for the covering radius.
    fn grid_lower_bound(l: &RescaledLattice, steps: usize, span: i64) -> f64 {
        let b = l.float_basis();
        let k = l.k();
        assert_eq!(k, 2);
        let mut best: f64 = 0.0;
        for a in 0..=steps {
            for c in 0..=steps {
                let t = [a as f64 / steps as f64, c as f64 / steps as f64];
                let x: Vec<f64> = (0..2).map(|i| t[0] * b[0][i] + t[1] * b[1][i]).collect();
                let mut f = f64::INFINITY;
                for u0 in -span..=span {
                    for u1 in -span..=span {
                        let d: f64 = (0..2).map(|i| (x[i] - u0 as f64 * b[0][i] - u1 as f64 * b[1][i]).abs()).sum();
                        f = f.min(d);
                    }
                }
                best = best.max(f);
            }
        }
        best
    }

    #[test]
    fn cubic_lattices() {
        for k in 1..=4 {
            let e = torus_diameter_l1(&identity(k), 1e-2).unwrap();
            assert!(e.contains(k as f64 / 2.0), "k={k} {e}");
            assert!(e.width() <= 1e-2);
        }
    }

    #[test]
    fn diagonal_lattice() {
        let l = RescaledLattice::from_integer_basis(vec![vec![4, 0], vec![0, 1]]).unwrap();
        assert!((l.scale() - 0.5).abs() < 1e-15);
        let e = torus_diameter_l1(&l, 1e-3).unwrap();
        assert!(e.contains(1.25), "{e}");
    }

    #[test]
    fn rescaling() {
        let q = 9;
        let l = rescale(&IntegerLattice::from_generators(vec![q], vec![vec![1, 0]]).unwrap());
        assert!(l.is_unimodular());
        let b = l.float_basis();
        assert!((b[0][0] - 3.0).abs() < 1e-12 && (b[1][1] - 1.0 / 3.0).abs() < 1e-12);
        let z = identity(3);
        assert_eq!(z.scale(), 1.0);
    }

    #[test]
    fn agrees_with_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let l = sample_haar_proxy(2, 101, &mut rng).unwrap();
            let e = torus_diameter_l1(&l, 1e-3).unwrap();
            let grid = grid_lower_bound(&rescale_reduced(&l), 200, 16);
            assert!(grid <= e.hi, "{grid} vs {e}");
            assert!(e.lo - grid <= 0.05, "{grid} vs {e}");
        }
    }

    fn rescale_reduced(l: &RescaledLattice) -> RescaledLattice {
        RescaledLattice::from_integer_basis(lll(l.integer_basis().to_vec())).unwrap()
    }

    #[test]
    fn permutation_invariance() {
        let l = IntegerLattice::from_generators(vec![31], vec![vec![1, 5, 12]]).unwrap();
        let r = rescale(&l);
        let e = torus_diameter_l1(&r, 1e-2).unwrap();
        let permuted: Vec<Vec<i64>> = r.integer_basis().iter().map(|b| vec![b[2], b[0], b[1]]).collect();
        let p = torus_diameter_l1(&RescaledLattice::from_integer_basis(permuted).unwrap(), 1e-2).unwrap();
        assert!(e.overlaps(&p), "{e} vs {p}");
    }

    #[test]
    fn budget_exhaustion_reports_the_best_enclosure() {
        match torus_diameter_l1_with(&identity(3), 1e-6, 10) {
            Err(Error::EnclosureBudget { lo, hi }) => assert!(lo <= 1.5 && 1.5 <= hi),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn haar_proxy_is_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let l = sample_haar_proxy(3, 1_000_003, &mut rng).unwrap();
            assert!(l.is_unimodular());
            assert_eq!(l.covolume(), 1_000_003);
        }
        assert!(sample_haar_proxy(3, 100, &mut rng).is_err());
    }

    #[test]
    fn near_tied_maxima_converge_within_the_default_budget() {
        // these needed more than 4e6 cells with the plain Lipschitz bound
        for (basis, lo) in [
            (
                vec![
                    vec![1, 634629, 23129, 0],
                    vec![0, 1, 376464, 144042],
                    vec![0, 0, 1, 797567],
                    vec![0, 0, 0, 1000003],
                ],
                1.80,
            ),
            (
                vec![
                    vec![1, 917001, 371993, 1],
                    vec![0, 1, 151269, 259308],
                    vec![0, 0, 1, 501355],
                    vec![0, 0, 0, 1000003],
                ],
                2.28,
            ),
        ] {
            let l = RescaledLattice::from_integer_basis(basis).unwrap();
            let e = torus_diameter_l1(&l, 1e-2).unwrap();
            assert!(e.width() <= 1e-2 + 1e-9 && e.lo > lo && e.hi < lo + 0.02, "{e}");
        }
    }
}
