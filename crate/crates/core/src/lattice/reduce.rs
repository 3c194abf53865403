//! LLL reduction of small integer bases.
//!
//! Basis vectors stay integral and every step is unimodular, so the lattice
//! is unchanged whatever the floating-point Gram–Schmidt data does; only the
//! quality of the reduction depends on it.

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(basis: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = basis.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let b: Vec<f64> = basis[i].iter().map(|&v| v as f64).collect();
        let mut v = b.clone();
        for j in 0..i {
            mu[i][j] = dot(&b, &star[j]) / dot(&star[j], &star[j]);
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        star.push(v);
    }
    (star, mu)
}

/// LLL with `δ = 0.99`, rows as basis vectors.
pub fn lll(mut basis: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let n = basis.len();
    let delta = 0.99;
    let mut i = 1;
    let mut guard = 0usize;
    while i < n && guard < 100_000 {
        guard += 1;
        for j in (0..i).rev() {
            let (_, mu) = gram_schmidt(&basis);
            let r = mu[i][j].round() as i64;
            if r != 0 {
                let bj = basis[j].clone();
                for (x, y) in basis[i].iter_mut().zip(&bj) {
                    *x -= r * y;
                }
            }
        }
        let (star, mu) = gram_schmidt(&basis);
        let lhs = dot(&star[i], &star[i]);
        let rhs = (delta - mu[i][i - 1] * mu[i][i - 1]) * dot(&star[i - 1], &star[i - 1]);
        if lhs >= rhs {
            i += 1;
        } else {
            basis.swap(i, i - 1);
            i = (i - 1).max(1);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::integer::determinant;

    #[test]
    fn reduces_a_skewed_basis() {
        let basis = vec![vec![1, 0], vec![1000, 1]];
        let reduced = lll(basis);
        assert_eq!(determinant(&reduced).abs(), 1);
        assert!(reduced.iter().all(|b| b.iter().all(|v| v.abs() <= 1)));
    }

    #[test]
    fn preserves_determinant() {
        let basis = vec![vec![101, 0, 0], vec![37, 1, 0], vec![58, 0, 1]];
        let reduced = lll(basis.clone());
        assert_eq!(determinant(&reduced).abs(), determinant(&basis).abs());
        let norm = |b: &Vec<i64>| b.iter().map(|v| v * v).sum::<i64>();
        assert!(reduced.iter().map(norm).max() < basis.iter().map(norm).max());
    }
}
