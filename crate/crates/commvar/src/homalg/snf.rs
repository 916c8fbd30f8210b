//! Smith normal form over ℤ with arbitrary-precision entries.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Rows of equal length; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged integer matrix");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn diagonal(orders: &[u64]) -> Self {
        let mut m = IntMatrix::zeros(orders.len(), orders.len());
        for (i, &o) in orders.iter().enumerate() {
            m.set(i, i, BigInt::from(o));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// [self | o].
    pub fn hcat(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                out.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_i += k·row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(i, c) + k * self.get(j, c);
            self.set(i, c, v);
        }
    }

    /// col_i += k·col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, i) + k * self.get(r, j);
            self.set(r, i, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c);
            self.set(i, c, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }

    /// Determinant by cofactor-free fraction-free elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        write!(f, "{}x{} {:?}", self.rows, self.cols, rows)
    }
}

/// U·A·V = D with U, V unimodular; `u_inv` is U⁻¹, kept for lattice bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_row(i, j, k);
        self.u.add_row(i, j, k);
        self.u_inv.add_col(j, i, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_col(i, j, k);
        self.v.add_col(i, j, k);
    }
}

fn smallest_in(d: &IntMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in cells {
        let x = d.get(i, j);
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some(((i, j), a));
        }
    }
    best.map(|(c, _)| c)
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut w = Work { d: a.clone(), u: IntMatrix::identity(m), u_inv: IntMatrix::identity(m), v: IntMatrix::identity(n) };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = smallest_in(&w.d, (t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let cross = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
            let (pi, pj) = smallest_in(&w.d, cross).expect("pivot stays nonzero");
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let p = w.d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = w.d.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                clean &= w.d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = w.d.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                clean &= w.d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    SnfResult { d: w.d, u: w.u, u_inv: w.u_inv, v: w.v, rank: t }
}

/// Invariant factors of ℤ^rows / ⟨columns of `rels`⟩, 0 standing for ℤ,
/// in divisibility order with the free summands last.
pub fn quotient_invariants(rels: &IntMatrix) -> Vec<u64> {
    let snf = smith_normal_form(rels);
    let mut out: Vec<u64> = snf
        .diagonal()
        .into_iter()
        .take(snf.rank)
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().expect("torsion order fits in u64"))
        .collect();
    out.extend(std::iter::repeat_n(0, rels.rows - snf.rank));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfResult {
        let r = smith_normal_form(a);
        assert_eq!(r.u.mul(a).mul(&r.v), r.d);
        assert!(r.u.mul(&r.u_inv) == IntMatrix::identity(a.rows()));
        r
    }

    #[test]
    fn diag_two_three() {
        let r = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(r.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_and_identity() {
        let r = check(&IntMatrix::zeros(3, 2));
        assert_eq!(r.rank, 0);
        assert!(r.d.is_zero());
        let r = check(&IntMatrix::identity(4));
        assert_eq!(r.d, IntMatrix::identity(4));
    }

    #[test]
    fn quotients() {
        assert_eq!(quotient_invariants(&IntMatrix::diagonal(&[2, 4, 0])), vec![2, 4, 0]);
        assert_eq!(quotient_invariants(&IntMatrix::diagonal(&[3, 2])), vec![6]);
        assert_eq!(quotient_invariants(&IntMatrix::zeros(2, 0)), vec![0, 0]);
        assert_eq!(quotient_invariants(&IntMatrix::from_rows(&[vec![2, 2]], 2)), vec![2]);
    }

    #[test]
    fn bareiss_det() {
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]], 3);
        assert_eq!(m.det(), BigInt::from(-3));
        assert_eq!(IntMatrix::zeros(0, 0).det(), BigInt::one());
    }
}
