//! Solving Mayer–Vietoris sequences
//! … → H^q(U∪V) → H^q(U) ⊕ H^q(V) → H^q(U∩V) → H^{q+1}(U∪V) → …
//! for one unknown term, over F₂ and over ℤ.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::f2::{cokernel_complement, F2Matrix, GradedF2Space, NamedMap};
use super::graded::{normalize_factors, GradedGroup};
use super::snf::IntMatrix;
use super::zmod::PresentedMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Solution {
    pub dims: Vec<usize>,
    pub generators: BTreeMap<usize, Vec<String>>,
    pub kernels: BTreeMap<usize, Vec<String>>,
    pub cokernels: BTreeMap<usize, Vec<String>>,
    /// Dimensions along the long exact sequence, three terms per degree.
    pub sequence: Vec<usize>,
}

impl F2Solution {
    pub fn space(&self) -> GradedF2Space {
        GradedF2Space { degrees: self.generators.clone() }
    }
}

/// Σ (−1)^i dim E_i over a finite exact sequence; zero when exact.
pub fn alternating_sum(dims: &[usize]) -> i64 {
    dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn alpha(u: &GradedF2Space, v: &GradedF2Space, b: &GradedF2Space, j: &NamedMap, jp: &NamedMap, q: usize) -> Result<F2Matrix> {
    Ok(j.matrix(u, b, q)?.hcat(&jp.matrix(v, b, q)?))
}

/// The union unknown: H^q(U∪V) ≅ coker α_{q−1} ⊕ ker α_q.
pub fn solve_union_f2(
    u: &GradedF2Space,
    v: &GradedF2Space,
    b: &GradedF2Space,
    j: &NamedMap,
    jp: &NamedMap,
) -> Result<F2Solution> {
    j.validate(u)?;
    jp.validate(v)?;
    let top = b.top().max(u.top()).max(v.top()) + 1;
    let mut sol = F2Solution {
        dims: Vec::new(),
        generators: BTreeMap::new(),
        kernels: BTreeMap::new(),
        cokernels: BTreeMap::new(),
        sequence: Vec::new(),
    };
    let mut prev: Option<F2Matrix> = None;
    for q in 0..=top {
        let a = alpha(u, v, b, j, jp, q)?;
        let coker: Vec<String> = match &prev {
            Some(p) => cokernel_complement(p).into_iter().map(|i| format!("δ({})", b.basis(q - 1)[i])).collect(),
            None => Vec::new(),
        };
        let split = u.dim(q);
        let ker: Vec<String> = a
            .kernel_basis()
            .iter()
            .map(|x| {
                let parts: Vec<String> = [u.name(q, &x[..split]), v.name(q, &x[split..])]
                    .into_iter()
                    .filter(|s| s != "0")
                    .collect();
                parts.join("+")
            })
            .collect();
        let dim = coker.len() + ker.len();
        sol.dims.push(dim);
        sol.sequence.extend([dim, u.dim(q) + v.dim(q), b.dim(q)]);
        sol.generators.insert(q, coker.iter().chain(&ker).cloned().collect());
        sol.cokernels.insert(q, coker);
        sol.kernels.insert(q, ker);
        prev = Some(a);
    }
    trim_solution(&mut sol);
    Ok(sol)
}

fn trim_solution(sol: &mut F2Solution) {
    while sol.dims.len() > 1 && sol.dims.last() == Some(&0) {
        let q = sol.dims.len() - 1;
        sol.dims.pop();
        sol.generators.remove(&q);
        sol.kernels.remove(&q);
        sol.cokernels.remove(&q);
    }
}

/// One open piece unknown, the other piece V, the union X and the
/// intersection B known, with the connecting map δ: H^q(B) → H^{q+1}(X):
/// dim H^q(U) = (dim X^q − rank δ_{q−1}) + (dim B^q − rank δ_q) − dim V^q.
pub fn solve_piece_f2(
    x: &GradedF2Space,
    v: &GradedF2Space,
    b: &GradedF2Space,
    delta: &NamedMap,
    labels: Option<&GradedF2Space>,
) -> Result<F2Solution> {
    if delta.shift != 1 {
        return Err(Error::InconsistentScenario("connecting map must raise degree by one".into()));
    }
    delta.validate(b)?;
    let top = x.top().max(v.top()).max(b.top());
    let rank = |q: usize| -> Result<usize> { Ok(delta.matrix(b, x, q)?.rank()) };
    let mut sol = F2Solution {
        dims: Vec::new(),
        generators: BTreeMap::new(),
        kernels: BTreeMap::new(),
        cokernels: BTreeMap::new(),
        sequence: Vec::new(),
    };
    for q in 0..=top {
        let before = if q == 0 { 0 } else { rank(q - 1)? };
        let total = (x.dim(q) - before) + (b.dim(q) - rank(q)?);
        let dim = total.checked_sub(v.dim(q)).ok_or_else(|| {
            Error::InconsistentScenario(format!("degree {q}: exactness leaves {total} < dim V = {}", v.dim(q)))
        })?;
        let gens = match labels {
            Some(l) if l.dim(q) != dim => {
                return Err(Error::InconsistentScenario(format!(
                    "degree {q}: {} labels supplied for a space of dimension {dim}",
                    l.dim(q)
                )))
            }
            Some(l) => l.basis(q).to_vec(),
            None => (0..dim).map(|k| format!("u{q}.{k}")).collect(),
        };
        sol.dims.push(dim);
        sol.sequence.extend([x.dim(q), dim + v.dim(q), b.dim(q)]);
        sol.generators.insert(q, gens);
    }
    if let Some(l) = labels {
        if l.top() > top && l.dim(l.top()) > 0 {
            return Err(Error::InconsistentScenario(format!("labels supplied in degree {} beyond the sequence", l.top())));
        }
    }
    trim_solution(&mut sol);
    Ok(sol)
}

/// Integral version of the known terms: generator orders per degree
/// (0 = ℤ) and per-degree matrices of the two restrictions.
#[derive(Debug, Clone)]
pub struct IntegralUnion<'a> {
    pub u: &'a [Vec<u64>],
    pub v: &'a [Vec<u64>],
    pub b: &'a [Vec<u64>],
    pub j: &'a BTreeMap<usize, Vec<Vec<i64>>>,
    pub jp: &'a BTreeMap<usize, Vec<Vec<i64>>>,
}

fn orders(g: &[Vec<u64>], q: usize) -> Vec<u64> {
    g.get(q).cloned().unwrap_or_default()
}

fn int_matrix(m: &BTreeMap<usize, Vec<Vec<i64>>>, q: usize, rows: usize, cols: usize) -> Result<IntMatrix> {
    match m.get(&q) {
        None => Ok(IntMatrix::zeros(rows, cols)),
        Some(r) => {
            if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                return Err(Error::InconsistentScenario(format!(
                    "degree {q}: matrix shape does not match {rows}x{cols}"
                )));
            }
            Ok(IntMatrix::from_rows(r, cols))
        }
    }
}

/// How one degree of the unknown was pinned down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionStep {
    pub degree: usize,
    pub cokernel: Vec<u64>,
    pub kernel: Vec<u64>,
    pub rule: String,
    pub result: Vec<u64>,
}

/// The abelian 2-group of the given order with exactly `f2_rank` cyclic summands.
pub fn resolve_extension(order: u64, f2_rank: usize) -> Result<Vec<u64>> {
    let unresolved = |detail: String| Error::UnresolvedExtension { degree: 0, detail };
    if order == 0 || !order.is_power_of_two() {
        return Err(unresolved(format!("order {order} is not a power of 2")));
    }
    let n = order.trailing_zeros() as usize;
    let mut found = Vec::new();
    partitions(n, n, f2_rank, &mut Vec::new(), &mut found);
    match found.len() {
        1 => Ok(normalize_factors(&found[0].iter().map(|&k| 1u64 << k).collect::<Vec<_>>())),
        0 => Err(unresolved(format!("no group of order {order} has {f2_rank} cyclic summands"))),
        k => Err(unresolved(format!("{k} groups of order {order} have {f2_rank} cyclic summands"))),
    }
}

fn partitions(rest: usize, max: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 0 {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for k in (1..=max.min(rest)).rev() {
        cur.push(k);
        partitions(rest - k, k, parts - 1, cur, out);
        cur.pop();
    }
}

fn is_two_group(g: &[u64]) -> bool {
    g.iter().all(|&o| o > 1 && o.is_power_of_two())
}

/// 0 → C → H → K → 0 with C = coker α_{q−1}, K = ker α_q. `e` is the number
/// of even-order summands of H read off from the F₂ answer.
fn extend(degree: usize, c: &[u64], k: &[u64], e: Option<i64>) -> Result<(Vec<u64>, &'static str)> {
    let sum = || normalize_factors(&[c, k].concat());
    if k.iter().all(|&o| o == 0) {
        return Ok((sum(), "kernel free, splits"));
    }
    if c.is_empty() {
        return Ok((k.to_vec(), "cokernel trivial"));
    }
    let need = |rule: &str| {
        e.ok_or_else(|| Error::UnresolvedExtension {
            degree,
            detail: format!("{rule} needs the F₂ dimension, which is not available"),
        })
    };
    let c_free = c.iter().all(|&o| o == 0);
    let k_torsion: Vec<u64> = k.iter().copied().filter(|&o| o > 0).collect();
    if c_free && k_torsion.iter().all(|&o| o == 2) {
        let e = need("free-by-elementary extension")?;
        if e < 0 || e as usize > k_torsion.len() {
            return Err(Error::InconsistentScenario(format!(
                "degree {degree}: F₂ count asks for {e} summands of order 2 out of {}",
                k_torsion.len()
            )));
        }
        let free = c.len() + k.len() - k_torsion.len();
        let mut h = vec![2; e as usize];
        h.extend(std::iter::repeat_n(0, free));
        return Ok((h, "free-by-elementary, F₂ count"));
    }
    if is_two_group(c) && is_two_group(k) {
        let order: u64 = c.iter().chain(k).product();
        let e = need("order and F₂ rank")?;
        if e < 1 {
            return Err(Error::InconsistentScenario(format!("degree {degree}: torsion with F₂ rank {e}")));
        }
        let h = resolve_extension(order, e as usize).map_err(|err| match err {
            Error::UnresolvedExtension { detail, .. } => Error::UnresolvedExtension { degree, detail },
            other => other,
        })?;
        return Ok((h, "order and F₂ rank"));
    }
    Err(Error::UnresolvedExtension {
        degree,
        detail: format!("0 → {c:?} → H → {k:?} → 0 is not pinned by order and rank"),
    })
}

pub fn solve_union_z(data: &IntegralUnion<'_>, f2_dims: Option<&[usize]>) -> Result<(GradedGroup, Vec<ExtensionStep>)> {
    let top = data.b.len().max(data.u.len()).max(data.v.len());
    let mut coker = Vec::with_capacity(top + 1);
    let mut ker = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let (uq, vq, bq) = (orders(data.u, q), orders(data.v, q), orders(data.b, q));
        let mj = int_matrix(data.j, q, bq.len(), uq.len())?;
        let mjp = int_matrix(data.jp, q, bq.len(), vq.len())?;
        let joint = PresentedMap::new([uq, vq].concat(), bq, mj.hcat(&mjp.neg()))?;
        coker.push(joint.cokernel());
        ker.push(normalize_factors(&joint.kernel()));
    }
    let mut h: Vec<Vec<u64>> = vec![Vec::new(); top + 1];
    let mut steps = Vec::new();
    for q in (0..=top).rev() {
        let c = if q == 0 { Vec::new() } else { coker[q - 1].clone() };
        let k = ker[q].clone();
        let e = f2_dims.map(|d| {
            let dq = d.get(q).copied().unwrap_or(0) as i64;
            let rank = (c.iter().chain(&k).filter(|&&o| o == 0).count()) as i64;
            let above = h.get(q + 1).map_or(0, |g| g.iter().filter(|&&o| o > 1 && o % 2 == 0).count()) as i64;
            dq - rank - above
        });
        let (hq, rule) = extend(q, &c, &k, e)?;
        steps.push(ExtensionStep { degree: q, cokernel: c, kernel: k, rule: rule.into(), result: hq.clone() });
        h[q] = hq;
    }
    steps.reverse();
    Ok((GradedGroup::new(h), steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extensions_of_order_four_and_eight() {
        assert_eq!(resolve_extension(4, 1).unwrap(), vec![4]);
        assert_eq!(resolve_extension(4, 2).unwrap(), vec![2, 2]);
        assert_eq!(resolve_extension(2, 1).unwrap(), vec![2]);
        assert_eq!(resolve_extension(8, 2).unwrap(), vec![2, 4]);
        assert!(resolve_extension(16, 2).is_err());
        assert!(resolve_extension(6, 1).is_err());
        assert!(resolve_extension(4, 3).is_err());
    }

    #[test]
    fn alternating_sums() {
        assert_eq!(alternating_sum(&[1, 2, 1]), 0);
        assert_eq!(alternating_sum(&[1, 1, 1]), 1);
    }

    #[test]
    fn split_and_unresolved_extensions() {
        assert_eq!(extend(3, &[0], &[0], None).unwrap().0, vec![0, 0]);
        assert_eq!(extend(3, &[], &[2], None).unwrap().0, vec![2]);
        assert_eq!(extend(4, &[0], &[2], Some(0)).unwrap().0, vec![0]);
        assert_eq!(extend(4, &[0], &[2], Some(1)).unwrap().0, vec![2, 0]);
        assert!(matches!(extend(4, &[2], &[2], None), Err(Error::UnresolvedExtension { degree: 4, .. })));
        assert!(matches!(extend(4, &[3], &[5], Some(1)), Err(Error::UnresolvedExtension { .. })));
    }
}
