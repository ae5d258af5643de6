//! Exact arithmetic and linear algebra over a prime field `F_p`.
//!
//! Every value carries its modulus; mixing moduli is a hard error, never a
//! silent coercion. All solvers use exact Gaussian elimination, and nullspace
//! bases are the canonical ones read off the reduced row-echelon form so that
//! downstream reports are reproducible byte for byte.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest supported modulus: keeps `a * b` for reduced `a`, `b` inside `u64`.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("enumeration of {required} candidates exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

/// Returns true when `p` is an odd prime in the supported range.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p > MAX_MODULUS || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_modulus(p: u64) {
    debug_assert!(p >= 3 && p % 2 == 1, "modulus must be an odd prime, got {p}");
    assert!(p <= MAX_MODULUS, "modulus {p} too large");
}

#[inline]
fn reduce_i64(value: i64, p: u64) -> u64 {
    let m = p as i64;
    (((value % m) + m) % m) as u64
}

/// An element of `F_p`, tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    p: u64,
}

impl FpScalar {
    pub fn new(value: i64, p: u64) -> Self {
        check_modulus(p);
        FpScalar { value: reduce_i64(value, p), p }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(0, p)
    }

    pub fn one(p: u64) -> Self {
        Self::new(1, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_modulus(&self, other: &FpScalar) {
        assert_eq!(
            self.p, other.p,
            "modulus mismatch: {} vs {}",
            self.p, other.p
        );
    }

    pub fn pow(&self, mut e: u64) -> FpScalar {
        let mut base = *self;
        let mut acc = FpScalar::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat: `a^(p-2)`.
    pub fn inv(&self) -> Result<FpScalar, FpError> {
        if self.value == 0 {
            return Err(FpError::ZeroInverse);
        }
        Ok(self.pow(self.p - 2))
    }
}

/// Spec-level name for scalar inversion.
pub fn fp_inv(a: FpScalar) -> Result<FpScalar, FpError> {
    a.inv()
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        self.same_modulus(&rhs);
        FpScalar { value: (self.value + rhs.value) % self.p, p: self.p }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        self.same_modulus(&rhs);
        FpScalar { value: (self.value + self.p - rhs.value) % self.p, p: self.p }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        self.same_modulus(&rhs);
        FpScalar { value: (self.value * rhs.value) % self.p, p: self.p }
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        FpScalar { value: (self.p - self.value) % self.p, p: self.p }
    }
}

/// A coordinate vector over `F_p`. Entries are kept reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpVector {
    p: u64,
    entries: Vec<u64>,
}

impl FpVector {
    pub fn zeros(len: usize, p: u64) -> Self {
        check_modulus(p);
        FpVector { p, entries: vec![0; len] }
    }

    pub fn from_i64(entries: &[i64], p: u64) -> Self {
        check_modulus(p);
        FpVector { p, entries: entries.iter().map(|&v| reduce_i64(v, p)).collect() }
    }

    /// Standard basis vector `e_i` (0-indexed).
    pub fn unit(len: usize, i: usize, p: u64) -> Self {
        let mut v = Self::zeros(len, p);
        v.entries[i] = 1;
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize) -> u64 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: i64) {
        self.entries[i] = reduce_i64(value, self.p);
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    fn compatible(&self, other: &FpVector) {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!(self.entries.len(), other.entries.len(), "length mismatch");
    }

    pub fn add(&self, other: &FpVector) -> FpVector {
        self.compatible(other);
        FpVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
        }
    }

    pub fn sub(&self, other: &FpVector) -> FpVector {
        self.compatible(other);
        FpVector {
            p: self.p,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + self.p - b) % self.p)
                .collect(),
        }
    }

    pub fn neg(&self) -> FpVector {
        FpVector {
            p: self.p,
            entries: self.entries.iter().map(|&a| (self.p - a) % self.p).collect(),
        }
    }

    pub fn scale(&self, c: u64) -> FpVector {
        let c = c % self.p;
        FpVector {
            p: self.p,
            entries: self.entries.iter().map(|&a| (a * c) % self.p).collect(),
        }
    }

    /// Row-vector action `v * m`; this is the `v^alpha` convention used
    /// throughout, with maps composed left to right.
    pub fn apply(&self, m: &FpMatrix) -> FpVector {
        assert_eq!(self.p, m.p, "modulus mismatch");
        assert_eq!(self.entries.len(), m.rows, "vector/matrix shape mismatch");
        let mut out = vec![0u64; m.cols];
        for (i, &vi) in self.entries.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for j in 0..m.cols {
                out[j] = (out[j] + vi * m.entries[i * m.cols + j]) % self.p;
            }
        }
        FpVector { p: self.p, entries: out }
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A dense row-major matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Self {
        check_modulus(p);
        FpMatrix { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>], p: u64) -> Self {
        check_modulus(p);
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| reduce_i64(v, p)));
        }
        FpMatrix { p, rows: r, cols: c, entries }
    }

    pub fn scalar(n: usize, c: i64, p: u64) -> Self {
        let mut m = Self::zeros(n, n, p);
        let c = reduce_i64(c, p);
        for i in 0..n {
            m.entries[i * n + i] = c;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries[i * self.cols + j] = reduce_i64(value, self.p);
    }

    pub fn row(&self, i: usize) -> FpVector {
        assert!(i < self.rows);
        FpVector { p: self.p, entries: self.entries[i * self.cols..(i + 1) * self.cols].to_vec() }
    }

    pub fn set_row(&mut self, i: usize, v: &FpVector) {
        assert_eq!(v.p, self.p, "modulus mismatch");
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.entries[i * self.cols..(i + 1) * self.cols].copy_from_slice(&v.entries);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows, self.p)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Checked product, with the spec's error contract.
    pub fn checked_mul(&self, other: &FpMatrix) -> Result<FpMatrix, FpError> {
        if self.p != other.p {
            return Err(FpError::ModulusMismatch { left: self.p, right: other.p });
        }
        if self.cols != other.rows {
            return Err(FpError::DimMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = FpMatrix::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] =
                        (out.entries[idx] + a * other.entries[k * other.cols + j]) % self.p;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        self.checked_mul(other).expect("matrix product")
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + self.p - b) % self.p)
            .collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: i64) -> FpMatrix {
        let c = reduce_i64(c, self.p);
        let entries = self.entries.iter().map(|&a| (a * c) % self.p).collect();
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        out
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> FpScalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let p = self.p;
        let mut m = self.entries.clone();
        let mut det = FpScalar::one(p);
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0);
            let Some(pivot) = pivot else {
                return FpScalar::zero(p);
            };
            if pivot != col {
                for j in 0..n {
                    m.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let pv = FpScalar { value: m[col * n + col], p };
            det = det * pv;
            let inv = pv.inv().expect("pivot nonzero").value;
            for r in (col + 1)..n {
                let factor = (m[r * n + col] * inv) % p;
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = (factor * m[col * n + j]) % p;
                    m[r * n + j] = (m[r * n + j] + p - sub) % p;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.det().is_zero()
    }

    /// Inverse via Gauss-Jordan on `[m | I]`.
    pub fn inverse(&self) -> Result<FpMatrix, FpError> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let p = self.p;
        let mut aug = FpMatrix::zeros(n, 2 * n, p);
        for i in 0..n {
            for j in 0..n {
                aug.entries[i * 2 * n + j] = self.entries[i * n + j];
            }
            aug.entries[i * 2 * n + n + i] = 1;
        }
        let red = aug.rref();
        // Left block must reduce to the identity.
        for i in 0..n {
            for j in 0..n {
                let expect = u64::from(i == j);
                if red.matrix.entries[i * 2 * n + j] != expect {
                    return Err(FpError::Singular);
                }
            }
        }
        let mut out = FpMatrix::zeros(n, n, p);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = red.matrix.entries[i * 2 * n + n + j];
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> FpMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.rows, self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row-echelon form (unit pivots, cleared above and below).
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.entries.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for j in 0..cols {
                    m.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let inv = FpScalar { value: m[rank * cols + col], p }.inv().unwrap().value;
            for j in 0..cols {
                m[rank * cols + j] = (m[rank * cols + j] * inv) % p;
            }
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let factor = m[r * cols + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..cols {
                    let sub = (factor * m[rank * cols + j]) % p;
                    m[r * cols + j] = (m[r * cols + j] + p - sub) % p;
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows {
                break;
            }
        }
        Rref { matrix: FpMatrix { p, rows, cols, entries: m }, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of `{x : m x = 0}`, one vector per free column of the
    /// RREF, in increasing free-column order.
    pub fn nullspace(&self) -> Vec<FpVector> {
        let red = self.rref();
        let p = self.p;
        let cols = self.cols;
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; cols];
        for (row, col) in red.pivots.iter().copied().enumerate() {
            pivot_of_col[col] = Some(row);
        }
        for free in 0..cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = FpVector::zeros(cols, p);
            v.entries[free] = 1;
            for (row, col) in red.pivots.iter().copied().enumerate() {
                let coef = red.matrix.entries[row * cols + free];
                v.entries[col] = (p - coef) % p;
            }
            basis.push(v);
        }
        basis
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entries[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Result of reduced row-echelon elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Cell-level constraint pattern for [`enumerate_matrices`]: `Some(v)` pins a
/// cell to `v`, `None` leaves it free.
#[derive(Debug, Clone)]
pub struct ShapeMask {
    rows: usize,
    cols: usize,
    fixed: Vec<Option<u64>>,
}

impl ShapeMask {
    pub fn free(rows: usize, cols: usize) -> Self {
        ShapeMask { rows, cols, fixed: vec![None; rows * cols] }
    }

    pub fn pin(&mut self, i: usize, j: usize, value: u64) {
        self.fixed[i * self.cols + j] = Some(value);
    }

    pub fn free_cells(&self) -> usize {
        self.fixed.iter().filter(|c| c.is_none()).count()
    }
}

/// Streams every matrix whose free cells range over `F_p`, with pinned cells
/// fixed, in lexicographic order over the free cells (row-major, last cell
/// varies fastest).
#[derive(Debug)]
pub struct MatrixEnumerator {
    p: u64,
    mask: ShapeMask,
    free_positions: Vec<usize>,
    counter: Vec<u64>,
    done: bool,
}

pub fn enumerate_matrices(
    p: u64,
    mask: &ShapeMask,
    budget: u128,
) -> Result<MatrixEnumerator, FpError> {
    check_modulus(p);
    let free = mask.free_cells() as u32;
    let required = (p as u128)
        .checked_pow(free)
        .ok_or(FpError::BudgetExceeded { required: u128::MAX, budget })?;
    if required > budget {
        return Err(FpError::BudgetExceeded { required, budget });
    }
    let free_positions = mask
        .fixed
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.is_none().then_some(i))
        .collect::<Vec<_>>();
    Ok(MatrixEnumerator {
        p,
        mask: mask.clone(),
        counter: vec![0; free_positions.len()],
        free_positions,
        done: false,
    })
}

impl Iterator for MatrixEnumerator {
    type Item = FpMatrix;

    fn next(&mut self) -> Option<FpMatrix> {
        if self.done {
            return None;
        }
        let mut m = FpMatrix::zeros(self.mask.rows, self.mask.cols, self.p);
        for (idx, cell) in self.mask.fixed.iter().enumerate() {
            if let Some(v) = cell {
                m.entries[idx] = v % self.p;
            }
        }
        for (slot, &pos) in self.free_positions.iter().enumerate() {
            m.entries[pos] = self.counter[slot];
        }
        // Odometer increment, last free cell fastest.
        let mut carry = true;
        for slot in (0..self.counter.len()).rev() {
            self.counter[slot] += 1;
            if self.counter[slot] < self.p {
                carry = false;
                break;
            }
            self.counter[slot] = 0;
        }
        if carry {
            self.done = true;
        }
        Some(m)
    }
}
