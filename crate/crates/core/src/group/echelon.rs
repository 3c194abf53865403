//! Echelon forms for subgroups of `⊕ Z/m_t`.
//!
//! Rows are elements of `A = ⊕ Z/m_t`, optionally tagged with an integer
//! coefficient vector recording how they were formed from the pushed rows.
//! The relation rows `m_t e_t` are kept implicit, which lets every entry stay
//! reduced modulo its column modulus. All row operations are unimodular on the
//! augmented system, so the rows left at zero span the full relation lattice.

use num_integer::Integer;

#[derive(Clone, Debug)]
pub struct Row {
    pub values: Vec<i128>,
    pub coefs: Vec<i128>,
}

/// Result of echelonising: one pivot per column and the zero rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Pivot `t` is zero in columns `< t` and holds `h_t | m_t` in column `t`.
    pub pivots: Vec<Row>,
    /// Coefficient vectors of the rows that reduced to zero.
    pub kernel: Vec<Vec<i128>>,
}

impl Echelon {
    /// `Π h_t`, the index of the generated subgroup.
    pub fn index(&self) -> i128 {
        self.pivots.iter().enumerate().map(|(t, p)| p.values[t]).product()
    }
}

#[derive(Clone, Debug)]
pub struct ModEchelon {
    moduli: Vec<i128>,
    coef_len: usize,
    coef_modulus: Option<i128>,
    rows: Vec<Row>,
}

impl ModEchelon {
    pub fn new(moduli: Vec<u64>) -> Self {
        Self::tracking(moduli, 0, None)
    }

    /// Tracks `coef_len` coefficients per row, reduced modulo `coef_modulus`
    /// when given (valid whenever that modulus annihilates the relevant group).
    pub fn tracking(moduli: Vec<u64>, coef_len: usize, coef_modulus: Option<i128>) -> Self {
        ModEchelon { moduli: moduli.into_iter().map(i128::from).collect(), coef_len, coef_modulus, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Pushes a row whose coefficient vector is the next unit vector.
    pub fn push(&mut self, values: &[u64]) {
        let mut coefs = vec![0; self.coef_len];
        if let Some(slot) = coefs.get_mut(self.rows.len()) {
            *slot = 1;
        }
        self.push_with(values.iter().map(|&v| v as i128).collect(), coefs);
    }

    pub fn push_with(&mut self, values: Vec<i128>, coefs: Vec<i128>) {
        assert_eq!(values.len(), self.moduli.len());
        assert_eq!(coefs.len(), self.coef_len);
        let mut row = Row { values, coefs };
        self.normalise(&mut row, 0);
        self.rows.push(row);
    }

    fn normalise(&self, row: &mut Row, from: usize) {
        for (v, &m) in row.values.iter_mut().zip(&self.moduli).skip(from) {
            *v = v.rem_euclid(m);
        }
        if let Some(n) = self.coef_modulus {
            for c in &mut row.coefs {
                *c = c.rem_euclid(n);
            }
        }
    }

    fn lin(&self, s: i128, x: &Row, u: i128, y: &Row, col: usize) -> Row {
        let mut row = Row {
            values: x.values.iter().zip(&y.values).map(|(a, b)| s * a + u * b).collect(),
            coefs: x.coefs.iter().zip(&y.coefs).map(|(a, b)| s * a + u * b).collect(),
        };
        self.normalise(&mut row, col + 1);
        row
    }

    pub fn echelon(&self) -> Echelon {
        let mut active = self.rows.clone();
        let mut pivots = Vec::with_capacity(self.moduli.len());
        for (t, &m) in self.moduli.iter().enumerate() {
            let mut pivot: Option<Row> = None;
            let mut rest = Vec::with_capacity(active.len() + 1);
            for row in active.drain(..) {
                if row.values[t] == 0 {
                    rest.push(row);
                    continue;
                }
                pivot = Some(match pivot.take() {
                    None => row,
                    Some(p) => {
                        let (a, b) = (p.values[t], row.values[t]);
                        let eg = a.extended_gcd(&b);
                        let g = eg.gcd;
                        let merged = self.lin(eg.x, &p, eg.y, &row, t);
                        let mut other = self.lin(a / g, &row, -(b / g), &p, t);
                        other.values[t] = 0;
                        rest.push(other);
                        merged
                    }
                });
            }
            let pivot = match pivot {
                None => {
                    let mut values = vec![0; self.moduli.len()];
                    values[t] = m;
                    Row { values, coefs: vec![0; self.coef_len] }
                }
                Some(p) => {
                    // fold in the implicit relation row m e_t
                    let g0 = p.values[t];
                    let eg = g0.extended_gcd(&m);
                    let g = eg.gcd;
                    let mut merged = self.lin(eg.x, &p, 0, &p, t);
                    merged.values[t] = g;
                    let mut torsion = self.lin(m / g, &p, 0, &p, t);
                    torsion.values[t] = 0;
                    rest.push(torsion);
                    merged
                }
            };
            pivots.push(pivot);
            active = rest;
        }
        Echelon { pivots, kernel: active.into_iter().map(|r| r.coefs).collect() }
    }

    /// Whether the pushed rows generate all of `⊕ Z/m_t`.
    pub fn is_full(&self) -> bool {
        self.echelon().index() == 1
    }

    /// Coefficients `λ` with `Σ λ_j row_j = target`, if the target lies in
    /// the generated subgroup.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<i128>> {
        solve_with(&self.echelon(), &self.moduli, target, self.coef_modulus)
    }
}

pub(crate) fn solve_with(
    ech: &Echelon,
    moduli: &[i128],
    target: &[u64],
    coef_modulus: Option<i128>,
) -> Option<Vec<i128>> {
    let mut rest: Vec<i128> = target.iter().zip(moduli).map(|(&v, &m)| (v as i128).rem_euclid(m)).collect();
    let coef_len = ech.pivots.first().map_or(0, |p| p.coefs.len());
    let mut coefs = vec![0i128; coef_len];
    for (t, pivot) in ech.pivots.iter().enumerate() {
        let h = pivot.values[t];
        if rest[t] % h != 0 {
            return None;
        }
        let times = rest[t] / h;
        if times == 0 {
            continue;
        }
        for (col, v) in rest.iter_mut().enumerate() {
            *v = (*v - times * pivot.values[col]).rem_euclid(moduli[col]);
        }
        for (c, p) in coefs.iter_mut().zip(&pivot.coefs) {
            *c += times * p;
            if let Some(n) = coef_modulus {
                *c = c.rem_euclid(n);
            }
        }
    }
    rest.iter().all(|&v| v == 0).then_some(coefs)
}
