//! Exterior-square machinery: the wedge basis of `Λ²V`, wedge products, the
//! induced map `alpha -> alpha_hat` on `Λ²V`, and decomposition of 2-vectors
//! into wedge pairs.
//!
//! Everything here follows the row-vector convention: `v^alpha = v * A`, maps
//! composed left to right, so `hat` is multiplicative with the ordinary matrix
//! product.

use crate::fp::{FpMatrix, FpVector};

/// Ordered basis `v_j ∧ v_k`, `j < k`, of `Λ²V` in lexicographic pair order:
/// for n=4 this is (1,2), (1,3), (1,4), (2,3), (2,4), (3,4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeBasis {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl WedgeBasis {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need dim >= 2 for a nonzero exterior square");
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for j in 0..n {
            for k in (j + 1)..n {
                pairs.push((j, k));
            }
        }
        WedgeBasis { n, pairs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `C(n, 2)`, the dimension of `Λ²V`.
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    /// 0-indexed pair at basis position `m`.
    pub fn pair(&self, m: usize) -> (usize, usize) {
        self.pairs[m]
    }

    /// Basis position of `v_j ∧ v_k`, `j < k` (0-indexed).
    pub fn index(&self, j: usize, k: usize) -> usize {
        assert!(j < k && k < self.n, "invalid wedge pair ({j},{k})");
        // Offset of row j plus distance into it.
        j * self.n - j * (j + 1) / 2 + (k - j - 1)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// An element of `Λ²V` in wedge-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Wedge2Element {
    pub coeffs: FpVector,
}

impl Wedge2Element {
    pub fn zero(n: usize, p: u64) -> Self {
        Wedge2Element { coeffs: FpVector::zeros(WedgeBasis::new(n).dim(), p) }
    }

    pub fn from_coeffs(coeffs: FpVector) -> Self {
        Wedge2Element { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &Wedge2Element) -> Wedge2Element {
        Wedge2Element { coeffs: self.coeffs.add(&other.coeffs) }
    }

    pub fn sub(&self, other: &Wedge2Element) -> Wedge2Element {
        Wedge2Element { coeffs: self.coeffs.sub(&other.coeffs) }
    }

    pub fn neg(&self) -> Wedge2Element {
        Wedge2Element { coeffs: self.coeffs.neg() }
    }

    pub fn scale(&self, c: u64) -> Wedge2Element {
        Wedge2Element { coeffs: self.coeffs.scale(c) }
    }
}

/// Wedge product `u ∧ v`: coefficient `u_j v_k - u_k v_j` on `v_j ∧ v_k`.
pub fn wedge(u: &FpVector, v: &FpVector) -> Wedge2Element {
    assert_eq!(u.len(), v.len(), "wedge of vectors of different lengths");
    assert_eq!(u.modulus(), v.modulus(), "modulus mismatch");
    let p = u.modulus();
    let basis = WedgeBasis::new(u.len());
    let mut coeffs = FpVector::zeros(basis.dim(), p);
    for (m, &(j, k)) in basis.pairs().iter().enumerate() {
        let pos = (u.get(j) * v.get(k)) % p;
        let neg = (u.get(k) * v.get(j)) % p;
        coeffs.set(m, ((pos + p - neg) % p) as i64);
    }
    Wedge2Element::from_coeffs(coeffs)
}

/// Matrix of the induced map on `Λ²V`: row `(j,k)` is `row_j(alpha) ∧
/// row_k(alpha)`. Multiplicative: `hat(a b) = hat(a) hat(b)`.
pub fn induced_hat(alpha: &FpMatrix) -> FpMatrix {
    assert!(alpha.is_square(), "hat of a non-square matrix");
    let n = alpha.rows();
    let p = alpha.modulus();
    let basis = WedgeBasis::new(n);
    let mut out = FpMatrix::zeros(basis.dim(), basis.dim(), p);
    for (m, &(j, k)) in basis.pairs().iter().enumerate() {
        let w = wedge(&alpha.row(j), &alpha.row(k));
        out.set_row(m, &w.coeffs);
    }
    out
}

/// The n x n anti-symmetric matrix associated to a 2-vector.
fn gram_matrix(w: &Wedge2Element, n: usize) -> FpMatrix {
    let p = w.coeffs.modulus();
    let basis = WedgeBasis::new(n);
    assert_eq!(w.coeffs.len(), basis.dim(), "coefficient length mismatch");
    let mut m = FpMatrix::zeros(n, n, p);
    for (idx, &(j, k)) in basis.pairs().iter().enumerate() {
        let c = w.coeffs.get(idx);
        m.set(j, k, c as i64);
        m.set(k, j, -(c as i64));
    }
    m
}

/// Writes `w` as a sum of at most `n/2` decomposable 2-vectors by skew
/// pivoting on the associated anti-symmetric matrix; the number of returned
/// pairs is half its rank.
pub fn decompose_two_vector(w: &Wedge2Element, n: usize) -> Vec<(FpVector, FpVector)> {
    let p = w.coeffs.modulus();
    let mut omega = gram_matrix(w, n);
    let mut pairs = Vec::new();
    loop {
        let mut pivot = None;
        'scan: for j in 0..n {
            for k in 0..n {
                if omega.get(j, k) != 0 {
                    pivot = Some((j, k));
                    break 'scan;
                }
            }
        }
        let Some((j, k)) = pivot else { break };
        let c = crate::fp::FpScalar::new(omega.get(j, k) as i64, p);
        let cinv = c.inv().expect("pivot nonzero").value();
        let a = omega.row(j).scale(cinv);
        let b = omega.row(k);
        // Subtract the rank-2 update a^T b - b^T a, which zeroes row/col j,k.
        for l in 0..n {
            for m in 0..n {
                let update =
                    (a.get(l) * b.get(m) + (p - 1) * ((b.get(l) * a.get(m)) % p)) % p;
                let cur = omega.get(l, m);
                omega.set(l, m, ((cur + p - update % p) % p) as i64);
            }
        }
        pairs.push((a, b));
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::FpScalar;

    #[test]
    fn wedge_basis_ordering() {
        let b = WedgeBasis::new(4);
        assert_eq!(b.dim(), 6);
        assert_eq!(b.pairs(), &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for m in 0..b.dim() {
            let (j, k) = b.pair(m);
            assert_eq!(b.index(j, k), m);
        }
    }

    #[test]
    fn wedge_examples() {
        let p = 3;
        let e1 = FpVector::unit(3, 0, p);
        let e2 = FpVector::unit(3, 1, p);
        let w = wedge(&e1, &e2);
        assert_eq!(w.coeffs.entries(), &[1, 0, 0]);

        let v = FpVector::from_i64(&[1, 2, 1], p);
        assert!(wedge(&v, &v).is_zero());
    }

    /// Oracle: expand (e1+e2) ∧ (e2+e3) by brute-force bilinearity over the
    /// basis terms, then compare with the implementation.
    #[test]
    fn wedge_bilinear_expansion() {
        let p = 3;
        let u = FpVector::from_i64(&[1, 1, 0], p);
        let v = FpVector::from_i64(&[0, 1, 1], p);
        let mut expected = Wedge2Element::zero(3, p);
        for j in 0..3 {
            for k in 0..3 {
                let c = (u.get(j) * v.get(k)) % p;
                if c == 0 {
                    continue;
                }
                let term = wedge(&FpVector::unit(3, j, p), &FpVector::unit(3, k, p));
                expected = expected.add(&term.scale(c));
            }
        }
        let got = wedge(&u, &v);
        assert_eq!(got, expected);
        assert_eq!(got.coeffs.entries(), &[1, 1, 1]);
    }

    #[test]
    fn wedge_alternating_exhaustive_f3() {
        for n in [3usize, 4] {
            let p = 3u64;
            let count = p.pow(n as u32);
            for a in 0..count {
                for b in 0..count {
                    let u = index_vector(a, n, p);
                    let v = index_vector(b, n, p);
                    assert_eq!(wedge(&u, &v), wedge(&v, &u).neg());
                }
            }
        }
    }

    fn index_vector(mut idx: u64, n: usize, p: u64) -> FpVector {
        let mut v = FpVector::zeros(n, p);
        for i in 0..n {
            v.set(i, (idx % p) as i64);
            idx /= p;
        }
        v
    }

    #[test]
    fn hat_identity_and_diag() {
        assert!(induced_hat(&FpMatrix::identity(3, 5)).is_identity());
        // diag(s,1,t) acts on (v1∧v2, v1∧v3, v2∧v3) as diag(s, st, t).
        let s = 2i64;
        let t = 3i64;
        let alpha = FpMatrix::from_rows_i64(
            &[vec![s, 0, 0], vec![0, 1, 0], vec![0, 0, t]],
            5,
        );
        let expected = FpMatrix::from_rows_i64(
            &[vec![s, 0, 0], vec![0, s * t, 0], vec![0, 0, t]],
            5,
        );
        assert_eq!(induced_hat(&alpha), expected);
    }

    #[test]
    fn hat_of_2x2_is_determinant() {
        let p = 7;
        let m = FpMatrix::from_rows_i64(&[vec![2, 5], vec![1, 4]], p);
        let hat = induced_hat(&m);
        assert_eq!((hat.rows(), hat.cols()), (1, 1));
        assert_eq!(hat.get(0, 0), m.det().value());
    }

    #[test]
    fn hat_multiplicative_exhaustive_gl2_f3() {
        let p = 3;
        let mut gl2 = Vec::new();
        let mask = crate::fp::ShapeMask::free(2, 2);
        for m in crate::fp::enumerate_matrices(p, &mask, 1 << 20).unwrap() {
            if m.is_invertible() {
                gl2.push(m);
            }
        }
        assert_eq!(gl2.len(), 48);
        for a in &gl2 {
            for b in &gl2 {
                assert_eq!(induced_hat(&a.mul(b)), induced_hat(a).mul(&induced_hat(b)));
            }
        }
    }

    #[test]
    fn hat_multiplicative_random_gl3_f5() {
        let p = 5;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut found = 0;
        while found < 100 {
            let a = random_invertible(3, p, &mut next);
            let b = random_invertible(3, p, &mut next);
            assert_eq!(induced_hat(&a.mul(&b)), induced_hat(&a).mul(&induced_hat(&b)));
            found += 1;
        }
    }

    fn random_invertible(n: usize, p: u64, next: &mut impl FnMut() -> u64) -> FpMatrix {
        loop {
            let mut m = FpMatrix::zeros(n, n, p);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, (next() % p) as i64);
                }
            }
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let p = 5;
        assert!(decompose_two_vector(&Wedge2Element::zero(4, p), 4).is_empty());

        let basis = WedgeBasis::new(3);
        let mut w = Wedge2Element::zero(3, p);
        w.coeffs.set(basis.index(0, 1), 1);
        let pairs = decompose_two_vector(&w, 3);
        assert_eq!(pairs.len(), 1);
        assert_eq!(wedge(&pairs[0].0, &pairs[0].1), w);
    }

    #[test]
    fn decompose_rank_four() {
        let p = 5;
        let basis = WedgeBasis::new(4);
        let mut w = Wedge2Element::zero(4, p);
        w.coeffs.set(basis.index(0, 1), 1);
        w.coeffs.set(basis.index(2, 3), 1);
        let pairs = decompose_two_vector(&w, 4);
        assert_eq!(pairs.len(), 2);
        let mut total = Wedge2Element::zero(4, p);
        for (u, v) in &pairs {
            total = total.add(&wedge(u, v));
        }
        assert_eq!(total, w);
        assert_eq!(gram_matrix(&w, 4).rank(), 4);
    }

    /// Every element of Λ²F_3^4 re-wedges to itself after decomposition, and
    /// the pair count is half the rank of the associated matrix.
    #[test]
    fn decompose_exhaustive_f3_dim4() {
        let p = 3u64;
        let dim = 6;
        for idx in 0..p.pow(dim as u32) {
            let mut w = Wedge2Element::zero(4, p);
            let mut rest = idx;
            for m in 0..dim {
                w.coeffs.set(m, (rest % p) as i64);
                rest /= p;
            }
            let pairs = decompose_two_vector(&w, 4);
            assert_eq!(pairs.len(), gram_matrix(&w, 4).rank() / 2);
            let mut total = Wedge2Element::zero(4, p);
            for (u, v) in &pairs {
                total = total.add(&wedge(u, v));
            }
            assert_eq!(total, w);
        }
    }

    #[test]
    fn scalar_sanity() {
        let a = FpScalar::new(-1, 5);
        assert_eq!(a.value(), 4);
    }
}
