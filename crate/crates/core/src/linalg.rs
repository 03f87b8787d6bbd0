//! Exact linear algebra over the prime field F_p.
//!
//! Everything downstream (structure-constant audits, Hom and Ext solves,
//! commutant computations) reduces to row reduction of dense matrices over
//! F_p. Entries are stored as raw residues in `[0, p)`; all arithmetic is
//! exact, so there is no pivoting subtlety beyond finding a nonzero entry.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is even; the coefficient field must be F_p for an odd prime")]
    EvenModulus(u64),
    #[error("p must be an odd prime >= 5 (got {0}); p = 3 needs the explicit override")]
    BelowRange(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p. All scalar arithmetic routes through this context so
/// that the modulus is validated exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Field for an odd prime p >= 5.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p % 2 == 0 {
            return Err(FieldError::EvenModulus(p));
        }
        if p < 5 {
            return Err(FieldError::BelowRange(p));
        }
        Ok(PrimeField { p })
    }

    /// Same as [`PrimeField::new`] but additionally admits p = 3. Results for
    /// p = 3 are exploratory; the dimension tables assume p >= 5.
    pub fn new_allowing_p3(p: u64) -> Result<Self, FieldError> {
        if p == 3 {
            return Ok(PrimeField { p });
        }
        Self::new(p)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
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

    /// Multiplicative inverse; panics on zero (a contract violation).
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "attempted to invert 0 in F_{}", self.p);
        // Fermat: a^(p-2) since p is prime.
        self.pow(a, self.p - 2)
    }

    /// The units 1, 2, ..., p-1 in ascending order.
    pub fn units(&self) -> impl Iterator<Item = u64> {
        1..self.p
    }
}

/// Outcome of solving A x = b over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// No vector satisfies the system.
    Inconsistent,
    /// The affine solution set: one particular solution plus an echelonized
    /// basis of ker(A).
    Solvable {
        particular: Vec<u64>,
        nullspace: Vec<Vec<u64>>,
    },
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Solvable { .. })
    }
}

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: &PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p: field.p(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from rows of raw residues; every entry is reduced mod p.
    pub fn from_rows(field: &PrimeField, rows: &[Vec<u64>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in matrix construction"
        );
        FpMatrix {
            p: field.p(),
            rows: rows.len(),
            cols: ncols,
            data: rows.iter().flatten().map(|&v| v % field.p()).collect(),
        }
    }

    pub fn from_fn(
        field: &PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j) % field.p());
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(v < self.p);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let f = self.field();
        FpMatrix::from_fn(&f, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        self.check_same_shape(other);
        let f = self.field();
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = f.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        self.check_same_shape(other);
        let f = self.field();
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = f.sub(*a, b);
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let f = self.field();
        let c = c % self.p;
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = f.mul(*a, c);
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch in matrix product");
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in matrix product: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let f = self.field();
        let mut out = FpMatrix::zeros(&f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(
            self.cols,
            v.len(),
            "shape mismatch in matrix-vector product"
        );
        let f = self.field();
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(i, j), v[j] % self.p));
                }
                acc
            })
            .collect()
    }

    fn check_same_shape(&self, other: &FpMatrix) {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
    }

    /// Reduced row echelon form together with the pivot column indices.
    /// Gaussian elimination with first-nonzero pivoting: scan down the
    /// current column, take the first nonzero entry.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let f = self.field();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    let a = m.get(r, j);
                    let b = m.get(pr, j);
                    m.set(r, j, b);
                    m.set(pr, j, a);
                }
            }
            // Rows at or below the front have zeros in every earlier
            // column, so elimination only touches columns from c on.
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                m.set(r, j, f.mul(m.get(r, j), inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullspace_dim(&self) -> usize {
        self.cols - self.rank()
    }

    /// Echelonized basis of ker(A): one vector per free column, with a 1 in
    /// the free position. Deterministic given the entries.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let f = self.field();
        let (r, pivots) = self.rref();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut vec = vec![0u64; self.cols];
            vec[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                vec[pc] = f.neg(r.get(row, free));
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves A x = b. The length of `b` must equal the row count; anything
    /// else is a caller bug and panics.
    pub fn solve(&self, b: &[u64]) -> Solution {
        assert_eq!(
            b.len(),
            self.rows,
            "right-hand side length {} does not match {} rows",
            b.len(),
            self.rows
        );
        let f = self.field();
        let mut aug = FpMatrix::zeros(&f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i] % self.p);
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Solution::Inconsistent;
        }
        let mut particular = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = r.get(row, self.cols);
        }
        Solution::Solvable {
            particular,
            nullspace: self.nullspace(),
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn from_row_vectors(field: &PrimeField, cols: usize, rows: &[Vec<u64>]) -> Self {
        if rows.is_empty() {
            return Self::zeros(field, 0, cols);
        }
        Self::from_rows(field, rows)
    }
}

/// Rank of the span of a list of vectors (rows).
pub fn span_rank(field: &PrimeField, cols: usize, vectors: &[Vec<u64>]) -> usize {
    FpMatrix::from_row_vectors(field, cols, vectors).rank()
}

/// Extends `base` (assumed independent) by vectors from `candidates`,
/// greedily and in order, keeping only those that enlarge the span. Returns
/// the indices of the kept candidates.
pub fn extend_basis(
    field: &PrimeField,
    cols: usize,
    base: &[Vec<u64>],
    candidates: &[Vec<u64>],
) -> Vec<usize> {
    let mut kept = Vec::new();
    let mut current: Vec<Vec<u64>> = base.to_vec();
    let mut rank = span_rank(field, cols, &current);
    for (idx, cand) in candidates.iter().enumerate() {
        current.push(cand.clone());
        let new_rank = span_rank(field, cols, &current);
        if new_rank > rank {
            rank = new_rank;
            kept.push(idx);
        } else {
            current.pop();
        }
    }
    kept
}
