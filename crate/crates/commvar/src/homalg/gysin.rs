//! Gysin sequence of a circle bundle E → B with Euler class e ∈ H²(B):
//! 0 → coker(∪e: H^{q−2}B → H^qB) → H^qE → ker(∪e: H^{q−1}B → H^{q+1}B) → 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graded::{normalize_factors, GradedGroup};
use super::snf::IntMatrix;
use super::zmod::PresentedMap;
use crate::error::{Error, Result};

/// Base cohomology on explicit generators and cup product with e,
/// `cup[q]` mapping H^q → H^{q+2} (rows index generators of H^{q+2}).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerAction {
    pub base: Vec<Vec<u64>>,
    pub cup: BTreeMap<usize, Vec<Vec<i64>>>,
}

/// ⟨1, x, y, z⟩ in degrees 0, 2, 4, 6 with e = x, x·x = λy, x·y = z.
pub fn atiyah_quotient_base(lambda: i64) -> EulerAction {
    let mut cup = BTreeMap::new();
    cup.insert(0, vec![vec![1]]);
    cup.insert(2, vec![vec![lambda]]);
    cup.insert(4, vec![vec![1]]);
    EulerAction { base: vec![vec![0], vec![], vec![0], vec![], vec![0], vec![], vec![0]], cup }
}

impl EulerAction {
    fn gens(&self, q: isize) -> Vec<u64> {
        if q < 0 {
            return Vec::new();
        }
        self.base.get(q as usize).cloned().unwrap_or_default()
    }

    fn cup_map(&self, q: isize) -> Result<PresentedMap> {
        let (src, dst) = (self.gens(q), self.gens(q + 2));
        let m = match (q >= 0).then(|| self.cup.get(&(q as usize))).flatten() {
            Some(rows) => {
                if rows.len() != dst.len() || rows.iter().any(|r| r.len() != src.len()) {
                    return Err(Error::Malformed(format!("cup matrix in degree {q} has the wrong shape")));
                }
                IntMatrix::from_rows(rows, src.len())
            }
            None => IntMatrix::zeros(dst.len(), src.len()),
        };
        PresentedMap::new(src, dst, m)
    }
}

pub fn gysin_solve(act: &EulerAction) -> Result<GradedGroup> {
    let top = act.base.len();
    let mut out = Vec::with_capacity(top + 1);
    for q in 0..=top as isize {
        let c = act.cup_map(q - 2)?.cokernel();
        let k = normalize_factors(&act.cup_map(q - 1)?.kernel());
        let h = if k.iter().all(|&o| o == 0) || c.is_empty() {
            [c, k].concat()
        } else {
            return Err(Error::UnresolvedExtension {
                degree: q as usize,
                detail: format!("0 → {c:?} → H → {k:?} → 0 in the Gysin sequence"),
            });
        };
        out.push(h);
    }
    Ok(GradedGroup::new(out))
}

/// Smallest λ in 1..=max for which the bundle over ⟨1, x, y, z⟩ has the given H⁴.
pub fn solve_lambda(h4: &[u64], max: i64) -> Result<Option<i64>> {
    let want = normalize_factors(h4);
    for lambda in 1..=max {
        if gysin_solve(&atiyah_quotient_base(lambda))?.degree(4) == want.as_slice() {
            return Ok(Some(lambda));
        }
    }
    Ok(None)
}
