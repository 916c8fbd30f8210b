//! The T-equivariant homeomorphism Φ_θ: X_θ → RP³ and its inverse.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{level_residual, pair_from, to_coords, ExtendedP};
use crate::quat::{
    arg, conjugate, projectivize, torus_translate, wrap_angle, GroupElement, ProjectivePoint,
    TorusElement,
};
use crate::tol::{EPS_ALG, EPS_REL};
use crate::waves::{arc_param, arc_table, eval_arc, CylinderPoint, WaveId};

/// z = Z e^{iζ}, w = W e^{iω}; angles are `None` where the modulus vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarRP3 {
    pub big_z: f64,
    pub big_w: f64,
    pub zeta: Option<f64>,
    pub omega: Option<f64>,
}

impl PolarRP3 {
    pub fn of(p: &ProjectivePoint) -> Self {
        let g = p.rep();
        let (z, w) = (g.z(), g.w());
        let (big_z, big_w) = (z.norm(), w.norm());
        PolarRP3 {
            big_z,
            big_w,
            zeta: (big_z >= EPS_ALG).then(|| arg(z)),
            omega: (big_w >= EPS_ALG).then(|| arg(w)),
        }
    }

    pub fn delta(&self) -> Option<f64> {
        Some(self.zeta? - self.omega?)
    }
}

fn wave_for(theta: f64, p: f64) -> Result<WaveId> {
    WaveId::new(theta, ExtendedP::from_value(p))
}

/// Φ_θ⁻¹. Only |z|², |w|², zw and z/w enter, so the result does not depend
/// on the representative of the class.
pub fn phi_inv(theta: f64, p: &ProjectivePoint) -> Result<(GroupElement, GroupElement)> {
    if !(theta > 0.0 && theta <= PI + EPS_ALG) {
        return Err(Error::InvalidWave(format!("theta = {theta} outside (0, pi]")));
    }
    let g = p.rep();
    let (z, w) = (g.z(), g.w());
    let big_p = (z.norm_sqr() - w.norm_sqr()).clamp(-1.0, 1.0);
    let zw = z * w;
    if zw.norm() <= EPS_ALG {
        let beta = if z.norm() <= w.norm() { 2.0 * arg(w) + PI } else { 2.0 * arg(z) + PI };
        let b = Complex64::from_polar(1.0, wrap_angle(beta));
        let p1 = big_p.signum();
        return Ok(pair_from(theta, p1, Complex64::new(1.0, 0.0), 0.0, b));
    }
    let half = Complex64::from_polar(1.0, theta / 2.0);
    let ra = -2.0 * half * zw;
    let a = ra / ra.norm();
    let s = wrap_angle(arg(z / w));
    let table = arc_table(wave_for(theta, big_p)?)?;
    let c = eval_arc(&table, s);
    let b = a * Complex64::from_polar(1.0, -c.phi);
    Ok(pair_from(theta, big_p, a, c.q, b))
}

/// Φ_θ, reconstructed from P, Arg(zw) and the arc parameter s = ζ − ω.
pub fn phi_fwd(theta: f64, g: GroupElement, h: GroupElement) -> Result<ProjectivePoint> {
    let c = to_coords(theta, g, h)?;
    let big_z = ((1.0 + c.p) / 2.0).max(0.0).sqrt();
    let big_w = ((1.0 - c.p) / 2.0).max(0.0).sqrt();
    if !c.a_determined {
        // Case II: β = 2ω + π (z = 0) or β = 2ζ + π (w = 0).
        let half_angle = (c.b.angle() - PI) / 2.0;
        let rep = if c.p > 0.0 {
            GroupElement::from_complex(Complex64::from_polar(1.0, half_angle), Complex64::new(0.0, 0.0))
        } else {
            GroupElement::from_complex(Complex64::new(0.0, 0.0), Complex64::from_polar(1.0, half_angle))
        };
        return Ok(projectivize(rep));
    }
    let half = Complex64::from_polar(1.0, theta / 2.0);
    let sum = arg(-c.a.complex() * half.conj());
    let phi = if c.b_determined { c.phi() } else { theta / 2.0 };
    let table = arc_table(wave_for(theta, c.p)?)?;
    let s = arc_param(&table, CylinderPoint::new(phi, c.q))?;
    let zeta = (sum + s) / 2.0;
    let omega = (sum - s) / 2.0;
    let rep = GroupElement::from_complex(
        Complex64::from_polar(big_z, zeta),
        Complex64::from_polar(big_w, omega),
    );
    Ok(projectivize(rep))
}

/// Distance between Φ⁻¹(t·p) and t Φ⁻¹(p) t⁻¹.
pub fn t_equivariance_defect(theta: f64, t: TorusElement, p: &ProjectivePoint) -> Result<f64> {
    let (g1, h1) = phi_inv(theta, &torus_translate(t, *p))?;
    let (g0, h0) = phi_inv(theta, p)?;
    let te = t.element();
    let (g2, h2) = (conjugate(te, g0), conjugate(te, h0));
    Ok(g1.dist(&g2).max(h1.dist(&h2)))
}

/// g ↦ g ∗ g⁻¹ for a basepoint ∗ ∈ X_π.
pub fn phi_pi_orbit(
    base: (GroupElement, GroupElement),
    g: GroupElement,
) -> Result<(GroupElement, GroupElement)> {
    let residual = level_residual(PI, base.0, base.1);
    if residual > EPS_REL {
        return Err(Error::NotOnLevelSet { residual });
    }
    Ok((conjugate(g, base.0), conjugate(g, base.1)))
}
