//! Graded abelian groups as per-degree invariant-factor lists (0 = ℤ).

use std::fmt;

use serde::{Deserialize, Serialize};

use super::snf::{quotient_invariants, IntMatrix};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<u64>>", into = "Vec<Vec<u64>>")]
pub struct GradedGroup {
    degrees: Vec<Vec<u64>>,
}

/// Invariant factors of ⊕ ℤ/o (o = 0 for ℤ, o = 1 dropped).
pub fn normalize_factors(orders: &[u64]) -> Vec<u64> {
    let torsion: Vec<u64> = orders.iter().copied().filter(|&o| o > 1).collect();
    let free = orders.iter().filter(|&&o| o == 0).count();
    let mut out = if torsion.is_empty() { Vec::new() } else { quotient_invariants(&IntMatrix::diagonal(&torsion)) };
    out.extend(std::iter::repeat_n(0, free));
    out
}

impl From<Vec<Vec<u64>>> for GradedGroup {
    fn from(d: Vec<Vec<u64>>) -> Self {
        GradedGroup::new(d)
    }
}

impl From<GradedGroup> for Vec<Vec<u64>> {
    fn from(g: GradedGroup) -> Self {
        g.degrees
    }
}

impl GradedGroup {
    pub fn new(degrees: Vec<Vec<u64>>) -> Self {
        GradedGroup { degrees: degrees.iter().map(|d| normalize_factors(d)).collect() }
    }

    pub fn trivial() -> Self {
        GradedGroup::default()
    }

    /// ℤ in degree n only.
    pub fn sphere_reduced(n: usize) -> Self {
        let mut d = vec![Vec::new(); n + 1];
        d[n] = vec![0];
        GradedGroup { degrees: d }
    }

    pub fn degree(&self, q: usize) -> &[u64] {
        self.degrees.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn set_degree(&mut self, q: usize, orders: &[u64]) {
        if self.degrees.len() <= q {
            self.degrees.resize(q + 1, Vec::new());
        }
        self.degrees[q] = normalize_factors(orders);
    }

    /// Number of stored degrees (trailing zeros included).
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.iter().all(Vec::is_empty)
    }

    pub fn degrees(&self) -> &[Vec<u64>] {
        &self.degrees
    }

    pub fn trimmed(&self) -> GradedGroup {
        let keep = self.degrees.iter().rposition(|d| !d.is_empty()).map_or(0, |i| i + 1);
        GradedGroup { degrees: self.degrees[..keep].to_vec() }
    }

    pub fn rank(&self, q: usize) -> usize {
        self.degree(q).iter().filter(|&&o| o == 0).count()
    }

    pub fn torsion(&self, q: usize) -> Vec<u64> {
        self.degree(q).iter().copied().filter(|&o| o > 1).collect()
    }

    pub fn torsion_order(&self, q: usize) -> u64 {
        self.torsion(q).iter().product()
    }

    pub fn is_free(&self, q: usize) -> bool {
        self.degree(q).iter().all(|&o| o == 0)
    }

    /// Cyclic summands of even order, i.e. dim (H^q ⊗ F₂) minus the free rank.
    pub fn even_summands(&self, q: usize) -> usize {
        self.degree(q).iter().filter(|&&o| o > 1 && o % 2 == 0).count()
    }

    /// Summands that are exactly ℤ/2.
    pub fn z2_summands(&self, q: usize) -> usize {
        self.degree(q).iter().filter(|&&o| o == 2).count()
    }

    /// F₂ Betti numbers by universal coefficients.
    pub fn f2_dims(&self) -> Vec<usize> {
        (0..self.degrees.len())
            .map(|q| self.rank(q) + self.even_summands(q) + self.even_summands(q + 1))
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.degrees.len()).map(|q| if q % 2 == 0 { 1 } else { -1 } * self.rank(q) as i64).sum()
    }

    pub fn direct_sum(&self, o: &GradedGroup) -> GradedGroup {
        let n = self.len().max(o.len());
        GradedGroup::new(
            (0..n)
                .map(|q| self.degree(q).iter().chain(o.degree(q)).copied().collect())
                .collect(),
        )
    }

    pub fn scaled(&self, copies: usize) -> GradedGroup {
        GradedGroup::new(
            self.degrees.iter().map(|d| d.iter().copied().cycle().take(d.len() * copies).collect()).collect(),
        )
    }

    pub fn label(&self, q: usize) -> String {
        factor_label(self.degree(q))
    }
}

pub fn factor_label(orders: &[u64]) -> String {
    if orders.is_empty() {
        return "0".into();
    }
    let free = orders.iter().filter(|&&o| o == 0).count();
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        k => parts.push(format!("Z^{k}")),
    }
    let mut torsion: Vec<u64> = orders.iter().copied().filter(|&o| o > 1).collect();
    torsion.dedup();
    for o in torsion {
        let k = orders.iter().filter(|&&x| x == o).count();
        parts.push(if k == 1 { format!("Z/{o}") } else { format!("(Z/{o})^{k}") });
    }
    parts.join("+")
}

impl PartialEq for GradedGroup {
    fn eq(&self, o: &Self) -> bool {
        self.trimmed().degrees == o.trimmed().degrees
    }
}

impl Eq for GradedGroup {}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.degrees.len()).map(|q| self.label(q)).collect();
        write!(f, "({})", labels.join(", "))
    }
}

/// Reduced cohomology of Σ^k X from H*(X): drop one ℤ in degree 0, shift by k.
pub fn suspension_shift(g: &GradedGroup, k: usize) -> GradedGroup {
    let mut reduced = g.degrees.clone();
    if let Some(d0) = reduced.first_mut() {
        if let Some(pos) = d0.iter().position(|&o| o == 0) {
            d0.remove(pos);
        }
    }
    let mut out = vec![Vec::new(); k];
    out.extend(reduced);
    GradedGroup::new(out)
}

/// Reduced cohomology of a wedge from reduced cohomologies of the summands.
pub fn wedge_sum(summands: &[GradedGroup]) -> GradedGroup {
    summands.iter().fold(GradedGroup::trivial(), |acc, g| acc.direct_sum(g))
}

/// The core in the end degrees, core ⊕ summands strictly inside (lo, hi).
pub fn assemble_decomposition(core: &GradedGroup, summands: &[GradedGroup], range: (usize, usize)) -> GradedGroup {
    let extra = wedge_sum(summands);
    let n = core.len().max(extra.len());
    GradedGroup::new(
        (0..n)
            .map(|q| {
                let mut d = core.degree(q).to_vec();
                if q > range.0 && q < range.1 {
                    d.extend_from_slice(extra.degree(q));
                }
                d
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_labels() {
        let g = GradedGroup::new(vec![vec![0], vec![], vec![3, 2], vec![0, 4, 0, 2]]);
        assert_eq!(g.degree(2), &[6]);
        assert_eq!(g.degree(3), &[2, 4, 0, 0]);
        assert_eq!(g.label(3), "Z^2+Z/2+Z/4");
        assert_eq!(g.label(1), "0");
        assert_eq!(g, GradedGroup::new(vec![vec![0], vec![], vec![6], vec![0, 0, 2, 4], vec![], vec![]]));
    }

    #[test]
    fn uct_dims() {
        let rp3 = GradedGroup::new(vec![vec![0], vec![], vec![2], vec![0]]);
        assert_eq!(rp3.f2_dims(), vec![1, 1, 1, 1]);
        assert_eq!(rp3.euler_characteristic(), 0);
    }

    #[test]
    fn suspensions() {
        let rp3 = GradedGroup::new(vec![vec![0], vec![], vec![2], vec![0]]);
        let s = suspension_shift(&rp3, 3);
        assert_eq!(s, GradedGroup::new(vec![vec![], vec![], vec![], vec![], vec![], vec![2], vec![0]]));
        let s1 = GradedGroup::new(vec![vec![0], vec![0]]);
        assert_eq!(suspension_shift(&s1, 3), GradedGroup::sphere_reduced(4));
        assert!(wedge_sum(&[]).is_empty());
    }

    #[test]
    fn decomposition_with_no_summands() {
        let core = GradedGroup::new(vec![vec![0], vec![], vec![4]]);
        assert_eq!(assemble_decomposition(&core, &[], (0, 2)), core);
    }
}
