//! Level sets X_θ = ν⁻¹(e^{iθ}) of the commutator map and their coordinates
//! g = P e^{iθ/2} + R a j, h = Q e^{−iθ/2} + S b j.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{commutator, GroupElement, TorusElement};
use crate::tol::{EPS_ALG, EPS_REL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaCoords {
    pub theta: f64,
    pub p: f64,
    pub q: f64,
    pub a: TorusElement,
    pub b: TorusElement,
    pub a_determined: bool,
    pub b_determined: bool,
}

impl ThetaCoords {
    pub fn new(theta: f64, p: f64, a: TorusElement, q: f64, b: TorusElement) -> Self {
        let r = unit_complement(p);
        let s = unit_complement(q);
        ThetaCoords {
            theta,
            p,
            q,
            a,
            b,
            a_determined: r >= EPS_ALG,
            b_determined: s >= EPS_ALG,
        }
    }

    pub fn r(&self) -> f64 {
        unit_complement(self.p)
    }

    pub fn s(&self) -> f64 {
        unit_complement(self.q)
    }

    /// v = a b̄.
    pub fn v(&self) -> Complex64 {
        self.a.complex() * self.b.complex().conj()
    }

    pub fn phi(&self) -> f64 {
        crate::quat::wrap_angle(self.a.angle() - self.b.angle())
    }

    pub fn to_pair(&self) -> (GroupElement, GroupElement) {
        pair_from(self.theta, self.p, self.a.complex(), self.q, self.b.complex())
    }
}

pub fn unit_complement(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

/// (P e^{iθ/2} + R a j, Q e^{−iθ/2} + S b j).
pub fn pair_from(theta: f64, p: f64, a: Complex64, q: f64, b: Complex64) -> (GroupElement, GroupElement) {
    let half = Complex64::from_polar(1.0, theta / 2.0);
    let g = GroupElement::from_complex(half * p, a * unit_complement(p));
    let h = GroupElement::from_complex(half.conj() * q, b * unit_complement(q));
    (g, h)
}

/// |[g,h] − e^{iθ}|.
pub fn level_residual(theta: f64, g: GroupElement, h: GroupElement) -> f64 {
    commutator(g, h).dist(&GroupElement::torus(theta))
}

/// Tagged P: a nonzero real, or one of the formal limits 0⁺, 0⁻.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedP {
    NonZero(f64),
    ZeroPlus,
    ZeroMinus,
}

impl ExtendedP {
    pub fn nonzero(p: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&p) || p.abs() <= EPS_ALG {
            return Err(Error::InvalidWave(format!("P = {p} is not a nonzero value in [-1, 1]")));
        }
        Ok(ExtendedP::NonZero(p))
    }

    /// Values within ε_alg of zero become 0⁺.
    pub fn from_value(p: f64) -> Self {
        if p.abs() <= EPS_ALG {
            ExtendedP::ZeroPlus
        } else {
            ExtendedP::NonZero(p.clamp(-1.0, 1.0))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            ExtendedP::NonZero(p) => *p,
            _ => 0.0,
        }
    }

    pub fn sign(&self) -> f64 {
        match self {
            ExtendedP::NonZero(p) => p.signum(),
            ExtendedP::ZeroPlus => 1.0,
            ExtendedP::ZeroMinus => -1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        !matches!(self, ExtendedP::NonZero(_))
    }
}

impl std::fmt::Display for ExtendedP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedP::NonZero(p) => write!(f, "{p}"),
            ExtendedP::ZeroPlus => write!(f, "0+"),
            ExtendedP::ZeroMinus => write!(f, "0-"),
        }
    }
}

impl std::str::FromStr for ExtendedP {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0+" => Ok(ExtendedP::ZeroPlus),
            "0-" => Ok(ExtendedP::ZeroMinus),
            t => {
                let v: f64 = t.parse().map_err(|_| Error::Malformed(format!("bad P value {t:?}")))?;
                ExtendedP::nonzero(v)
            }
        }
    }
}

pub fn to_coords(theta: f64, g: GroupElement, h: GroupElement) -> Result<ThetaCoords> {
    let residual = level_residual(theta, g, h);
    if residual > EPS_REL || !(theta > 0.0 && theta <= std::f64::consts::PI + EPS_ALG) {
        return Err(Error::NotOnLevelSet { residual });
    }
    let half = Complex64::from_polar(1.0, theta / 2.0);
    let p = (g.z() * half.conj()).re.clamp(-1.0, 1.0);
    let q = (h.z() * half).re.clamp(-1.0, 1.0);
    let (r, s) = (g.w().norm(), h.w().norm());
    let a = if r >= EPS_ALG { TorusElement::from_complex(g.w()) } else { TorusElement::new(0.0) };
    let b = if s >= EPS_ALG { TorusElement::from_complex(h.w()) } else { TorusElement::new(0.0) };
    Ok(ThetaCoords { theta, p, q, a, b, a_determined: r >= EPS_ALG, b_determined: s >= EPS_ALG })
}

/// (PQ − vRS) − e^{iθ}(PQ − v̄RS).
pub fn canonical_residual(c: &ThetaCoords) -> Complex64 {
    let v = c.v();
    let pq = Complex64::new(c.p * c.q, 0.0);
    let rs = c.r() * c.s();
    (pq - v * rs) - Complex64::from_polar(1.0, c.theta) * (pq - v.conj() * rs)
}

/// cos φ − cot(θ/2) sin φ.
pub fn k_factor(phi: f64, theta: f64) -> f64 {
    phi.cos() - phi.sin() / (theta / 2.0).tan()
}

/// sin(θ/2 − φ)/sin(θ/2).
pub fn k_factor_ratio(phi: f64, theta: f64) -> f64 {
    (theta / 2.0 - phi).sin() / (theta / 2.0).sin()
}

/// Q as a function of (P, φ) on X_θ: sgn(P)·K·R/√(P² + K²R²).
pub fn q_of(p: f64, phi: f64, theta: f64) -> Result<f64> {
    if p.abs() <= EPS_ALG {
        return Err(Error::AmbiguousAtPZero);
    }
    if p.abs() >= 1.0 {
        return Ok(0.0);
    }
    let r = unit_complement(p);
    let k = k_factor_ratio(phi, theta);
    let kr = k * r;
    let denom = (p * p + kr * kr).sqrt();
    Ok(p.signum() * kr / denom)
}

/// g = P e^{iθ/2} + R e^{iα} j ↦ (R cos α, R sin α, P).
pub fn y_sphere_chart(theta: f64, g: GroupElement) -> Result<[f64; 3]> {
    let rotated = g.z() * Complex64::from_polar(1.0, -theta / 2.0);
    if rotated.im.abs() > EPS_REL {
        return Err(Error::NotInYTheta { residual: rotated.im.abs() });
    }
    let w = g.w();
    Ok([w.re, w.im, rotated.re])
}

/// Whether (a j, h) lies on X_θ.
pub fn p_zero_fiber_check(a: TorusElement, h: GroupElement, theta: f64) -> bool {
    let g = GroupElement::from_complex(Complex64::new(0.0, 0.0), a.complex());
    level_residual(theta, g, h) <= EPS_REL
}

/// The disjunction S = 0 or a² = b² e^{iθ}, read off from h.
pub fn p_zero_fiber_condition(a: TorusElement, h: GroupElement, theta: f64) -> bool {
    let q = h.z() * Complex64::from_polar(1.0, theta / 2.0);
    if q.im.abs() > EPS_REL {
        return false;
    }
    let s = h.w().norm();
    if s <= EPS_REL {
        return true;
    }
    let b = h.w() / s;
    let lhs = a.complex() * a.complex();
    let rhs = b * b * Complex64::from_polar(1.0, theta);
    (lhs - rhs).norm() <= EPS_REL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn coords_of_i_j() {
        let c = to_coords(PI, GroupElement::i(), GroupElement::j()).unwrap();
        assert!((c.p - 1.0).abs() < 1e-15);
        assert!(c.r() < 1e-7 && !c.a_determined);
        assert!(c.q.abs() < 1e-15);
        assert!((c.s() - 1.0).abs() < 1e-15);
        assert!(c.b.circular_dist(&TorusElement::new(0.0)) < 1e-15);
        let (g, h) = c.to_pair();
        assert!(g.dist(&GroupElement::i()) < 1e-15 && h.dist(&GroupElement::j()) < 1e-15);
    }

    #[test]
    fn off_level_is_rejected() {
        let g = GroupElement::torus(0.4);
        let err = to_coords(0.8, g, crate::quat::haar_sample(1)).unwrap_err();
        assert!(matches!(err, Error::NotOnLevelSet { .. }));
    }

    #[test]
    fn residual_examples() {
        let c = ThetaCoords::new(1.1, 1.0, TorusElement::new(0.3), 0.0, TorusElement::new(2.0));
        assert!(canonical_residual(&c).norm() < 1e-15);
        let c = ThetaCoords::new(PI, FRAC_1_SQRT_2, TorusElement::new(0.0), FRAC_1_SQRT_2, TorusElement::new(0.0));
        assert!(canonical_residual(&c).norm() < 1e-15);
        let (g, h) = c.to_pair();
        assert!(level_residual(PI, g, h) < 1e-14);
    }

    #[test]
    fn k_and_q_examples() {
        for theta in [0.3, 1.0, PI] {
            assert!((k_factor(0.0, theta) - 1.0).abs() < 1e-15);
            assert!(k_factor(theta / 2.0, theta).abs() < 1e-15);
            assert!((q_of(FRAC_1_SQRT_2, 0.0, theta).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
            assert_eq!(q_of(1.0, 0.7, theta).unwrap(), 0.0);
            assert!(q_of(0.4, theta / 2.0, theta).unwrap().abs() < 1e-15);
        }
        assert!(k_factor(PI / 2.0, PI).abs() < 1e-15);
        assert_eq!(q_of(0.0, 0.2, 1.0), Err(Error::AmbiguousAtPZero));
    }

    #[test]
    fn sphere_chart() {
        let theta = 0.9;
        let north = y_sphere_chart(theta, GroupElement::torus(theta / 2.0)).unwrap();
        assert_eq!(north, [0.0, 0.0, 1.0]);
        let south = y_sphere_chart(theta, GroupElement::torus(theta / 2.0).neg()).unwrap();
        assert!((south[2] + 1.0).abs() < 1e-15);
        assert_eq!(y_sphere_chart(theta, GroupElement::j()).unwrap(), [1.0, 0.0, 0.0]);
        let bad = GroupElement::new(Quaternion::new(1.0, 0.0, 1.0, 0.0));
        assert!(matches!(y_sphere_chart(theta, bad), Err(Error::NotInYTheta { .. })));
    }

    #[test]
    fn fiber_over_p_zero() {
        let theta = PI / 2.0;
        let a = TorusElement::new(0.7);
        let h = GroupElement::torus(-theta / 2.0);
        assert!(p_zero_fiber_check(a, h, theta) && p_zero_fiber_condition(a, h, theta));
        // b² = a² e^{−iθ}
        let b = TorusElement::new(a.angle() - theta / 2.0);
        let h = GroupElement::from_complex(Complex64::new(0.0, 0.0), b.complex());
        assert!(p_zero_fiber_check(a, h, theta) && p_zero_fiber_condition(a, h, theta));
        let h = GroupElement::j();
        let a = TorusElement::new(0.0);
        assert!(!p_zero_fiber_check(a, h, theta) && !p_zero_fiber_condition(a, h, theta));
    }
}
