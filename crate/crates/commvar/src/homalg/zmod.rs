//! Kernels and cokernels of homomorphisms between finitely generated
//! abelian groups presented as ⊕ ℤ/o_i (o_i = 0 for ℤ).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::snf::{quotient_invariants, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// A homomorphism given on generators; column j is the image of generator j.
#[derive(Debug, Clone)]
pub struct PresentedMap {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
    pub matrix: IntMatrix,
}

impl PresentedMap {
    pub fn new(source: Vec<u64>, target: Vec<u64>, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(Error::InconsistentScenario(format!(
                "matrix is {}x{}, groups have {} and {} generators",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        let m = PresentedMap { source, target, matrix };
        m.check_well_defined()?;
        Ok(m)
    }

    /// o_j · M e_j must vanish in the target.
    fn check_well_defined(&self) -> Result<()> {
        for (j, &o) in self.source.iter().enumerate() {
            if o == 0 {
                continue;
            }
            for (i, &t) in self.target.iter().enumerate() {
                let x = self.matrix.get(i, j) * BigInt::from(o);
                let ok = if t == 0 { x.is_zero() } else { x.is_multiple_of(&BigInt::from(t)) };
                if !ok {
                    return Err(Error::InconsistentScenario(format!(
                        "generator {j} of order {o} cannot map to {} in a summand of order {t}",
                        self.matrix.get(i, j)
                    )));
                }
            }
        }
        Ok(())
    }

    fn target_relations(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.target)
    }

    pub fn cokernel(&self) -> Vec<u64> {
        quotient_invariants(&self.matrix.hcat(&self.target_relations()))
    }

    /// {x : Mx ∈ im R₂} / im R₁.
    pub fn kernel(&self) -> Vec<u64> {
        let n = self.source.len();
        if n == 0 {
            return Vec::new();
        }
        let joint = self.matrix.hcat(&self.target_relations().neg());
        let snf = smith_normal_form(&joint);
        let gens: Vec<Vec<BigInt>> = (snf.rank..joint.cols())
            .map(|j| snf.v.column(j).into_iter().take(n).collect())
            .collect();
        let g = IntMatrix::from_columns(n, &gens);
        let gs = smith_normal_form(&g);
        let r = gs.rank;
        if r == 0 {
            return Vec::new();
        }
        let d = gs.diagonal();
        let mut rel_cols = Vec::new();
        for (i, &o) in self.source.iter().enumerate() {
            if o == 0 {
                continue;
            }
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(o);
            let c = gs.u.mul_vec(&e);
            let coords: Vec<BigInt> = (0..r)
                .map(|k| {
                    debug_assert!(c[k].is_multiple_of(&d[k]));
                    &c[k] / &d[k]
                })
                .collect();
            debug_assert!(c[r..].iter().all(Zero::is_zero));
            rel_cols.push(coords);
        }
        quotient_invariants(&IntMatrix::from_columns(r, &rel_cols))
    }
}
