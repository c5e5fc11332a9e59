//! Arithmetic, matrices and subspaces over a prime field `F_p`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported characteristic; keeps products of residues inside `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) || (2..).take_while(|k| k * k <= p).any(|k| p.is_multiple_of(k)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (!a.is_multiple_of(self.p)).then(|| self.pow(a, self.p - 2))
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Dense row-major matrix with entries in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, 1);
        }
        m
    }

    /// Row-major entries, already reduced mod `p`.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    pub fn scalar(value: u64) -> Self {
        Self::from_entries(1, 1, vec![value])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, field: &PrimeField, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = FpMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = field.add(out.get(r, c), field.mul(a, rhs.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &PrimeField, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| field.add(acc, field.mul(self.get(r, c), v[c])))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, field: &PrimeField) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for c in 0..m.cols {
                m.data.swap(row * m.cols + c, p * m.cols + c);
            }
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = field.mul(m.get(row, c), inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        self.rref(field).1.len()
    }

    pub fn inverse(&self, field: &PrimeField) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut augmented = FpMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                augmented.set(r, c, self.get(r, c));
            }
            augmented.set(r, n + r, 1);
        }
        let (reduced, pivots) = augmented.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = FpMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, reduced.get(r, n + c));
            }
        }
        Some(inv)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// A subspace of `F_p^n`, stored by its reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    pivots: Vec<usize>,
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            pivots: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            pivots: (0..ambient).collect(),
            basis: (0..ambient)
                .map(|k| (0..ambient).map(|c| u64::from(c == k)).collect())
                .collect(),
        }
    }

    /// The span of `vectors` in `F_p^ambient`.
    pub fn span(field: &PrimeField, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let data: Vec<u64> = vectors.iter().flatten().copied().collect();
        let (reduced, pivots) = FpMatrix::from_entries(vectors.len(), ambient, data).rref(field);
        let basis = (0..pivots.len())
            .map(|r| (0..ambient).map(|c| reduced.get(r, c)).collect())
            .collect();
        Self {
            ambient,
            pivots,
            basis,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, field: &PrimeField, v: &[u64]) -> bool {
        let mut rest = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let coefficient = rest[p];
            if coefficient == 0 {
                continue;
            }
            for (x, &b) in rest.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(coefficient, b));
            }
        }
        rest.iter().all(|&x| x == 0)
    }

    pub fn sum(&self, field: &PrimeField, other: &Subspace) -> Subspace {
        let vectors: Vec<Vec<u64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(field, self.ambient, &vectors)
    }
}

/// All subspaces of `F_p^n`: by dimension, then pivot positions in
/// lexicographic order, then free entries in lexicographic order.
pub fn enumerate_subspaces(field: &PrimeField, n: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // free slots: (row, column) right of the row's pivot, not a pivot column
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &p)| {
                    ((p + 1)..n)
                        .filter(|c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let mut values = vec![0u64; free.len()];
            loop {
                let mut basis: Vec<Vec<u64>> = vec![vec![0; n]; k];
                for (r, &p) in pivots.iter().enumerate() {
                    basis[r][p] = 1;
                }
                for (&(r, c), &v) in free.iter().zip(&values) {
                    basis[r][c] = v;
                }
                out.push(Subspace {
                    ambient: n,
                    pivots: pivots.clone(),
                    basis,
                });
                if !advance(&mut values, field.order()) {
                    break;
                }
            }
        }
    }
    out
}

/// Odometer increment in base `radix`, last position fastest; false on wraparound.
pub(crate) fn advance(values: &mut [u64], radix: u64) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < radix {
            return true;
        }
        *v = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for c in start..n {
            current.push(c);
            go(c + 1, n, k, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// The Gaussian binomial `[n choose k]_q`, or `None` on overflow.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(q.checked_pow(n - i)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow(i + 1)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

/// Total number of subspaces of `F_q^n`, or `None` on overflow.
pub fn subspace_count(n: u32, q: u64) -> Option<u128> {
    (0..=n).try_fold(0u128, |acc, k| acc.checked_add(gaussian_binomial(n, k, q)?))
}
