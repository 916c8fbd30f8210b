//! The mod-2 Bockstein β on a named F₂ space and what it says about
//! 2-torsion in integral cohomology.

use std::collections::BTreeMap;

use super::f2::{bockstein_map, F2Matrix, GradedF2Space};
use super::graded::GradedGroup;
use crate::error::Result;

pub type BocksteinData = BTreeMap<String, Vec<String>>;

fn matrices(sp: &GradedF2Space, beta: &BocksteinData) -> Result<Vec<F2Matrix>> {
    let map = bockstein_map(beta);
    map.validate(sp)?;
    (0..=sp.top() + 1).map(|q| map.matrix(sp, sp, q)).collect()
}

pub fn beta_squared_zero(sp: &GradedF2Space, beta: &BocksteinData) -> Result<bool> {
    let m = matrices(sp, beta)?;
    Ok(m.windows(2).all(|w| w[1].mul(&w[0]).is_zero()))
}

/// Number of ℤ/2 summands forced in each degree: rank of β into that degree.
pub fn implied_z2(sp: &GradedF2Space, beta: &BocksteinData) -> Result<Vec<usize>> {
    let m = matrices(sp, beta)?;
    Ok((0..=sp.top()).map(|q| if q == 0 { 0 } else { m[q - 1].rank() }).collect())
}

/// dim ker β_q − rank β_{q−1}: the rational Betti numbers when all
/// torsion has order 2.
pub fn beta_homology(sp: &GradedF2Space, beta: &BocksteinData) -> Result<Vec<usize>> {
    let m = matrices(sp, beta)?;
    Ok((0..=sp.top())
        .map(|q| {
            let kernel = sp.dim(q) - m[q].rank();
            let image = if q == 0 { 0 } else { m[q - 1].rank() };
            kernel - image
        })
        .collect())
}

/// β² = 0 and the β-pairs account for exactly the ℤ/2 summands of `integral`.
pub fn bockstein_check(sp: &GradedF2Space, beta: &BocksteinData, integral: &GradedGroup) -> Result<bool> {
    if !beta_squared_zero(sp, beta)? {
        return Ok(false);
    }
    let z2 = implied_z2(sp, beta)?;
    let top = sp.top().max(integral.len());
    Ok((0..=top).all(|q| z2.get(q).copied().unwrap_or(0) == integral.z2_summands(q)))
}

/// Integral groups assuming every torsion class has order 2.
pub fn integral_from_bockstein(sp: &GradedF2Space, beta: &BocksteinData) -> Result<GradedGroup> {
    let free = beta_homology(sp, beta)?;
    let z2 = implied_z2(sp, beta)?;
    Ok(GradedGroup::new(
        free.iter()
            .zip(&z2)
            .map(|(&f, &t)| std::iter::repeat_n(0, f).chain(std::iter::repeat_n(2, t)).collect())
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(entries: &[(usize, &[&str])]) -> GradedF2Space {
        GradedF2Space::new(
            entries.iter().map(|(q, ls)| (*q, ls.iter().map(|s| s.to_string()).collect())).collect(),
        )
        .unwrap()
    }

    fn beta(pairs: &[(&str, &[&str])]) -> BocksteinData {
        pairs.iter().map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect())).collect()
    }

    #[test]
    fn commuting_pairs_torsion() {
        let sp = space(&[(0, &["1"]), (2, &["a"]), (3, &["b", "s1", "s2"]), (4, &["c"])]);
        let b = beta(&[("b", &["c"])]);
        let expect = GradedGroup::new(vec![vec![0], vec![], vec![0], vec![0, 0], vec![2], vec![]]);
        assert!(bockstein_check(&sp, &b, &expect).unwrap());
        assert_eq!(integral_from_bockstein(&sp, &b).unwrap(), expect);
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let sp = space(&[(1, &["x"]), (2, &["y"]), (3, &["z"])]);
        let b = beta(&[("x", &["y"]), ("y", &["z"])]);
        assert!(!beta_squared_zero(&sp, &b).unwrap());
        assert!(!bockstein_check(&sp, &b, &GradedGroup::trivial()).unwrap());
    }
}
