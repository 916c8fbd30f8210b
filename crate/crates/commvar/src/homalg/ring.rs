//! Consistency of a stated cohomology ring table: degrees, graded
//! commutativity, vanishing odd squares and a unimodular Poincaré pairing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::snf::IntMatrix;
use crate::error::{Error, Result};

/// An additive basis of a torsion-free ring with some products spelled out.
/// Products not listed are derived from the reversed pair, from the unit,
/// or taken to be zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingTable {
    pub basis: Vec<(String, usize)>,
    pub unit: String,
    pub fundamental: String,
    pub products: Vec<Product>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Product {
    pub left: String,
    pub right: String,
    /// Integer combination of basis elements.
    pub result: Vec<(i64, String)>,
}

impl Product {
    pub fn new(left: &str, right: &str, result: &[(i64, &str)]) -> Self {
        Product {
            left: left.into(),
            right: right.into(),
            result: result.iter().map(|(c, l)| (*c, l.to_string())).collect(),
        }
    }
}

impl RingTable {
    fn degree(&self, label: &str) -> Result<usize> {
        self.basis
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, d)| *d)
            .ok_or_else(|| Error::Malformed(format!("{label:?} is not a basis element")))
    }

    fn listed(&self, a: &str, b: &str) -> Option<&Product> {
        self.products.iter().find(|p| p.left == a && p.right == b)
    }

    /// Coefficient of `target` in a·b.
    pub fn coefficient(&self, a: &str, b: &str, target: &str) -> Result<i64> {
        let of = |p: &Product| p.result.iter().filter(|(_, l)| l == target).map(|(c, _)| c).sum::<i64>();
        if let Some(p) = self.listed(a, b) {
            return Ok(of(p));
        }
        if let Some(p) = self.listed(b, a) {
            let sign = if self.degree(a)? * self.degree(b)? % 2 == 1 { -1 } else { 1 };
            return Ok(sign * of(p));
        }
        if a == self.unit {
            return Ok(i64::from(b == target));
        }
        if b == self.unit {
            return Ok(i64::from(a == target));
        }
        Ok(0)
    }

    pub fn top_degree(&self) -> Result<usize> {
        self.degree(&self.fundamental)
    }
}

fn sign_consistent(t: &RingTable, p: &Product) -> Result<bool> {
    let Some(rev) = t.listed(&p.right, &p.left) else { return Ok(true) };
    let sign = if t.degree(&p.left)? * t.degree(&p.right)? % 2 == 1 { -1 } else { 1 };
    let mut lhs: BTreeMap<&str, i64> = BTreeMap::new();
    for (c, l) in &p.result {
        *lhs.entry(l).or_default() += c;
    }
    for (c, l) in &rev.result {
        *lhs.entry(l).or_default() -= sign * c;
    }
    Ok(lhs.values().all(|&c| c == 0))
}

/// Ok(true) when the table is consistent; graded-commutativity or degree
/// violations give Ok(false); a degenerate pairing gives `DualityFailure`.
pub fn ring_table_check(t: &RingTable) -> Result<bool> {
    let n = t.top_degree()?;
    for p in &t.products {
        let d = t.degree(&p.left)? + t.degree(&p.right)?;
        for (c, l) in &p.result {
            if *c != 0 && t.degree(l)? != d {
                return Ok(false);
            }
        }
        if !sign_consistent(t, p)? {
            return Ok(false);
        }
        let odd_square = p.left == p.right && t.degree(&p.left)? % 2 == 1;
        if odd_square && p.result.iter().any(|(c, _)| *c != 0) {
            return Ok(false);
        }
    }
    let in_degree = |q: usize| -> Vec<&str> {
        t.basis.iter().filter(|(_, d)| *d == q).map(|(l, _)| l.as_str()).collect()
    };
    for q in 0..=n / 2 {
        let (left, right) = (in_degree(q), in_degree(n - q));
        if left.len() != right.len() {
            return Err(Error::DualityFailure { degree: q });
        }
        if left.is_empty() {
            continue;
        }
        let mut m = IntMatrix::zeros(left.len(), right.len());
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                m.set(i, j, BigInt::from(t.coefficient(a, b, &t.fundamental)?));
            }
        }
        if m.det().abs() != BigInt::from(1) {
            return Err(Error::DualityFailure { degree: q });
        }
    }
    Ok(true)
}

/// The ring of the Atiyah space: s₁s₂ = s₃s₄ = xy = z, x² = λy.
pub fn atiyah_ring(lambda: i64) -> RingTable {
    let basis = [("1", 0), ("x", 2), ("s1", 3), ("s2", 3), ("s3", 3), ("s4", 3), ("y", 4), ("z", 6)];
    RingTable {
        basis: basis.iter().map(|(l, d)| (l.to_string(), *d)).collect(),
        unit: "1".into(),
        fundamental: "z".into(),
        products: vec![
            Product::new("s1", "s2", &[(1, "z")]),
            Product::new("s3", "s4", &[(1, "z")]),
            Product::new("x", "y", &[(1, "z")]),
            Product::new("x", "x", &[(lambda, "y")]),
        ],
    }
}
