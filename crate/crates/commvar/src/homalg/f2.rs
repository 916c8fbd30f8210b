//! Linear algebra over F₂ on spaces with named bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense F₂ matrix, rows × cols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<bool>>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![vec![false; cols]; rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: bool) {
        self.data[i][j] = x;
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i][j] ^= true;
    }

    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.rows).map(|i| self.data[i][j]).collect()
    }

    pub fn hcat(&self, o: &F2Matrix) -> F2Matrix {
        assert_eq!(self.rows, o.rows, "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
        F2Matrix { rows: self.rows, cols: self.cols + o.cols, data }
    }

    pub fn mul(&self, o: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = F2Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in (0..self.cols).filter(|&k| self.data[i][k]) {
                for j in 0..o.cols {
                    out.data[i][j] ^= o.data[k][j];
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|&x| !x))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| m.data[i][c]) else { continue };
            m.data.swap(r, p);
            for i in 0..m.rows {
                if i != r && m.data[i][c] {
                    let pivot_row = m.data[r].clone();
                    for (x, y) in m.data[i].iter_mut().zip(pivot_row) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null-space basis, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<bool>> {
        let (m, pivots) = self.rref();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![false; self.cols];
                v[free] = true;
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = m.data[r][free];
                }
                v
            })
            .collect()
    }
}

/// Incrementally maintained span in echelon form.
#[derive(Debug, Clone, Default)]
pub struct Span {
    rows: Vec<(usize, Vec<bool>)>,
}

impl Span {
    pub fn reduce(&self, v: &[bool]) -> Vec<bool> {
        let mut v = v.to_vec();
        for (lead, row) in &self.rows {
            if v[*lead] {
                for (x, y) in v.iter_mut().zip(row) {
                    *x ^= y;
                }
            }
        }
        v
    }

    /// Adds `v`; false when it was already in the span.
    pub fn insert(&mut self, v: &[bool]) -> bool {
        let r = self.reduce(v);
        let Some(lead) = r.iter().position(|&x| x) else { return false };
        for (_, row) in self.rows.iter_mut() {
            if row[lead] {
                for (x, y) in row.iter_mut().zip(&r) {
                    *x ^= y;
                }
            }
        }
        self.rows.push((lead, r));
        true
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Indices of standard basis vectors completing the column space of `m` to
/// the whole target, chosen greedily in listed order.
pub fn cokernel_complement(m: &F2Matrix) -> Vec<usize> {
    let mut span = Span::default();
    for j in 0..m.cols {
        span.insert(&m.column(j));
    }
    (0..m.rows)
        .filter(|&i| {
            let mut e = vec![false; m.rows];
            e[i] = true;
            span.insert(&e)
        })
        .collect()
}

/// A graded F₂ space given by its named basis in each degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedF2Space {
    pub degrees: BTreeMap<usize, Vec<String>>,
}

impl GradedF2Space {
    pub fn new(degrees: BTreeMap<usize, Vec<String>>) -> Result<Self> {
        let sp = GradedF2Space { degrees };
        sp.validate()?;
        Ok(sp)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeMap::new();
        for (q, labels) in &self.degrees {
            for l in labels {
                if seen.insert(l.clone(), *q).is_some() {
                    return Err(Error::Malformed(format!("label {l:?} appears twice")));
                }
            }
        }
        Ok(())
    }

    pub fn basis(&self, q: usize) -> &[String] {
        self.degrees.get(&q).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, q: usize) -> usize {
        self.basis(q).len()
    }

    pub fn top(&self) -> usize {
        self.degrees.iter().rev().find(|(_, v)| !v.is_empty()).map_or(0, |(q, _)| *q)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.top()).map(|q| self.dim(q)).collect()
    }

    pub fn locate(&self, label: &str) -> Option<(usize, usize)> {
        self.degrees
            .iter()
            .find_map(|(q, ls)| ls.iter().position(|l| l == label).map(|i| (*q, i)))
    }

    /// Coordinates of a formal sum of labels, all of which must sit in degree q.
    pub fn vector(&self, q: usize, sum: &[String]) -> Result<Vec<bool>> {
        let mut v = vec![false; self.dim(q)];
        for l in sum {
            match self.locate(l) {
                Some((d, i)) if d == q => v[i] ^= true,
                Some((d, _)) => {
                    return Err(Error::InconsistentScenario(format!("{l:?} has degree {d}, expected {q}")))
                }
                None => return Err(Error::InconsistentScenario(format!("unknown label {l:?}"))),
            }
        }
        Ok(v)
    }

    /// "c+c'" for the vector with ones at c and c'; "0" for the zero vector.
    pub fn name(&self, q: usize, v: &[bool]) -> String {
        let parts: Vec<&str> = self.basis(q).iter().zip(v).filter(|(_, &x)| x).map(|(l, _)| l.as_str()).collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

/// A linear map given on basis labels, raising degree by `shift`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMap {
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub shift: usize,
    pub images: BTreeMap<String, Vec<String>>,
}

impl NamedMap {
    /// Matrix from degree q of `src` to degree q + shift of `dst`; unlisted labels map to 0.
    pub fn matrix(&self, src: &GradedF2Space, dst: &GradedF2Space, q: usize) -> Result<F2Matrix> {
        let mut m = F2Matrix::zeros(dst.dim(q + self.shift), src.dim(q));
        for (j, label) in src.basis(q).iter().enumerate() {
            if let Some(img) = self.images.get(label) {
                let v = dst.vector(q + self.shift, img)?;
                for (i, x) in v.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
        }
        Ok(m)
    }

    pub fn validate(&self, src: &GradedF2Space) -> Result<()> {
        for l in self.images.keys() {
            if src.locate(l).is_none() {
                return Err(Error::InconsistentScenario(format!(
                    "map {}→{} names {l:?}, which is not a basis label of {}",
                    self.from, self.to, self.from
                )));
            }
        }
        Ok(())
    }
}

/// β as a degree-one map of a space to itself.
pub fn bockstein_map(images: &BTreeMap<String, Vec<String>>) -> NamedMap {
    NamedMap { from: "self".into(), to: "self".into(), shift: 1, images: images.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> F2Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut out = F2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                out.set(i, j, x == 1);
            }
        }
        out
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k, vec![vec![true, true, true]]);
        assert!(a.mul(&m(&[&[1], &[1], &[1]])).is_zero());
    }

    #[test]
    fn complement_is_greedy() {
        let a = m(&[&[1], &[1], &[0]]);
        assert_eq!(cokernel_complement(&a), vec![0, 2]);
        assert_eq!(cokernel_complement(&F2Matrix::zeros(2, 0)), vec![0, 1]);
    }

    #[test]
    fn named_vectors() {
        let mut d = BTreeMap::new();
        d.insert(4, vec!["c".to_string(), "c'".to_string()]);
        let sp = GradedF2Space::new(d).unwrap();
        let v = sp.vector(4, &["c".into(), "c'".into()]).unwrap();
        assert_eq!(sp.name(4, &v), "c+c'");
        assert!(sp.vector(3, &["c".into()]).is_err());
    }
}
