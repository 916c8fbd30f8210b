//! Deformation retractions r, r′ between levels, their conjugation-equivariant
//! extensions, the deformations ρ of A = μ⁻¹(−1)/SU(2), the centralizer
//! homotopy J₁ and the bundle transition function τ.

use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{pair_from, to_coords, ExtendedP};
use crate::homeo::{phi_fwd, phi_inv};
use crate::quat::{
    commutator, conjugate, exp, haar_sample_with, projectivize, GroupElement, LieVector, ProjectivePoint,
    Quaternion,
};
use crate::tol::{EPS_ALG, EPS_REL};
use crate::waves::{psi_map, CylinderPoint, WaveId};

/// Representative (x, y, x′, y′) of a point of A or M.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct APoint {
    pub reps: [GroupElement; 4],
}

pub type MPoint = APoint;

impl APoint {
    pub fn new(reps: [GroupElement; 4]) -> Result<Self> {
        let ap = APoint { reps };
        let residual = ap.mu_residual();
        if residual > EPS_REL {
            return Err(Error::NotOnLevelSet { residual });
        }
        Ok(ap)
    }

    /// |[x,y][x′,y′] + 1|.
    pub fn mu_residual(&self) -> f64 {
        let [x, y, xp, yp] = self.reps;
        (commutator(x, y) * commutator(xp, yp)).dist(&GroupElement::IDENTITY.neg())
    }

    /// θ with [x,y] conjugate to e^{iθ}.
    pub fn theta(&self) -> f64 {
        commutator(self.reps[0], self.reps[1]).re().clamp(-1.0, 1.0).acos()
    }

    pub fn conjugated(&self, u: GroupElement) -> APoint {
        APoint { reps: self.reps.map(|g| conjugate(u, g)) }
    }
}

/// A representative with θ uniform in [lo, hi]: (x, y) = Φ_θ⁻¹(p),
/// (x′, y′) = Φ_{π−θ}⁻¹(p′) for Haar points p, p′, conjugated by a Haar element.
pub fn sample_apoint<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> Result<APoint> {
    let theta = rng.random_range(lo..=hi);
    let (x, y) = phi_inv(theta, &projectivize(haar_sample_with(rng)))?;
    let (xp, yp) = phi_inv(PI - theta, &projectivize(haar_sample_with(rng)))?;
    let u = haar_sample_with(rng);
    Ok(APoint { reps: [x, y, xp, yp] }.conjugated(u))
}

fn level_move(
    g: GroupElement,
    h: GroupElement,
    theta: f64,
    target: f64,
) -> Result<(GroupElement, GroupElement)> {
    let c = to_coords(theta, g, h)?;
    let a = c.a.complex();
    if !c.a_determined {
        let b = c.b.complex() * Complex64::from_polar(1.0, -(target - theta) / 2.0);
        return Ok(pair_from(target, c.p, a, 0.0, b));
    }
    let p = ExtendedP::from_value(c.p);
    let from = WaveId::new(theta, p)?;
    let to = WaveId::new(target, p)?;
    let phi = if c.b_determined { c.phi() } else { theta / 2.0 };
    let moved = psi_map(&from, &to, CylinderPoint::new(phi, c.q))?;
    let b = a * Complex64::from_polar(1.0, -moved.phi);
    Ok(pair_from(target, c.p, a, moved.q, b))
}

/// r: X_θ × [0,1] → X_{tθ}.
pub fn retract_r(g: GroupElement, h: GroupElement, theta: f64, t: f64) -> Result<(GroupElement, GroupElement)> {
    to_coords(theta, g, h)?;
    if t == 1.0 {
        return Ok((g, h));
    }
    level_move(g, h, theta, t * theta)
}

/// r′: X_θ × [0,1] → X_{tθ+(1−t)π}.
pub fn retract_r_prime(
    g: GroupElement,
    h: GroupElement,
    theta: f64,
    t: f64,
) -> Result<(GroupElement, GroupElement)> {
    to_coords(theta, g, h)?;
    if t == 1.0 {
        return Ok((g, h));
    }
    level_move(g, h, theta, t * theta + (1.0 - t) * PI)
}

/// u with u[x,y]u⁻¹ = e^{iθ}: the geodesic rotation taking the commutator
/// axis to +i, or conjugation by j when the axis is −i.
pub fn diagonalize_commutator(x: GroupElement, y: GroupElement) -> Result<(GroupElement, f64)> {
    let c = commutator(x, y);
    let v = c.q().vector();
    let vn = v.norm();
    if vn <= EPS_REL {
        return Err(Error::CentralCommutator);
    }
    let theta = vn.atan2(c.re());
    let n = v.scale(1.0 / vn);
    let i = LieVector::new(1.0, 0.0, 0.0);
    let d = n.dot(&i);
    let u = if 1.0 + d <= 1e-9 {
        GroupElement::j()
    } else {
        let axis = n.cross(&i);
        GroupElement::new(Quaternion::new(1.0 + d, axis.x, axis.y, axis.z))
    };
    Ok((u, theta))
}

fn conj_pair(u: GroupElement, p: (GroupElement, GroupElement)) -> (GroupElement, GroupElement) {
    (conjugate(u, p.0), conjugate(u, p.1))
}

/// r_W(x, y, t) = u⁻¹ r(u x u⁻¹, u y u⁻¹, t) u.
pub fn retract_rw(x: GroupElement, y: GroupElement, t: f64) -> Result<(GroupElement, GroupElement)> {
    if t == 1.0 {
        diagonalize_commutator(x, y)?;
        return Ok((x, y));
    }
    let (u, theta) = diagonalize_commutator(x, y)?;
    let (g, h) = conj_pair(u, (x, y));
    Ok(conj_pair(u.inv(), retract_r(g, h, theta, t)?))
}

pub fn retract_rw_prime(x: GroupElement, y: GroupElement, t: f64) -> Result<(GroupElement, GroupElement)> {
    if t == 1.0 {
        diagonalize_commutator(x, y)?;
        return Ok((x, y));
    }
    let (u, theta) = diagonalize_commutator(x, y)?;
    let (g, h) = conj_pair(u, (x, y));
    Ok(conj_pair(u.inv(), retract_r_prime(g, h, theta, t)?))
}

/// Conjugate so that (x, y) ∈ X_θ and (x′, y′) ∈ X_{π−θ}.
pub fn normalize(ap: &APoint) -> Result<(APoint, f64)> {
    let (u, theta) = diagonalize_commutator(ap.reps[0], ap.reps[1])?;
    Ok((ap.conjugated(u), theta))
}

/// ρ(·, t): A_θ → A_{tθ}, θ ∈ (0, π).
pub fn rho(ap: &APoint, t: f64) -> Result<APoint> {
    let (n, theta) = normalize(ap)?;
    if theta >= PI - EPS_REL {
        return Err(Error::CentralCommutator);
    }
    let [x, y, xp, yp] = n.reps;
    let (x1, y1) = retract_r(x, y, theta, t)?;
    let (x2, y2) = retract_r_prime(xp, yp, PI - theta, t)?;
    Ok(APoint { reps: [x1, y1, x2, y2] })
}

/// ρ extended by the identity on A_0.
pub fn rho_extended(ap: &APoint, t: f64) -> Result<APoint> {
    let c = commutator(ap.reps[0], ap.reps[1]);
    if c.dist(&GroupElement::IDENTITY) <= EPS_REL {
        return Ok(*ap);
    }
    rho(ap, t)
}

/// J₁(g, t) = (g, exp(π t ξ/|ξ|)) with ξ = log g; the axis defaults to i at g = ±1.
pub fn centralizer_homotopy_j1(g: GroupElement, t: f64) -> (GroupElement, GroupElement) {
    let v = g.q().vector();
    let n = v.norm();
    let axis = if n <= EPS_ALG { LieVector::new(1.0, 0.0, 0.0) } else { v.scale(1.0 / n) };
    (g, exp(axis.scale(PI * t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauForms {
    /// [[Φ_π(r′(x′,y′,0))]]⁻¹ · [[Φ_π(r′(x,y,0))]].
    pub definitional: ProjectivePoint,
    /// Φ_{π−θ}(x′,y′)⁻¹ · Φ_θ(x,y).
    pub homotoped: ProjectivePoint,
}

/// τ on a representative already normalized so that (x, y) ∈ X_θ.
pub fn transition_tau_normalized(ap: &APoint, theta: f64) -> Result<TauForms> {
    if theta <= EPS_REL || theta >= PI - EPS_REL {
        return Err(Error::CentralCommutator);
    }
    let [x, y, xp, yp] = ap.reps;
    let (a0, b0) = retract_r_prime(x, y, theta, 0.0)?;
    let (a1, b1) = retract_r_prime(xp, yp, PI - theta, 0.0)?;
    let p = phi_fwd(PI, a0, b0)?;
    let pp = phi_fwd(PI, a1, b1)?;
    let q = phi_fwd(theta, x, y)?;
    let qp = phi_fwd(PI - theta, xp, yp)?;
    Ok(TauForms { definitional: pp.inv().mul(&p), homotoped: qp.inv().mul(&q) })
}

pub fn transition_tau(ap: &APoint) -> Result<TauForms> {
    let (n, theta) = normalize(ap)?;
    transition_tau_normalized(&n, theta)
}

fn spread(a: &APoint, b: &APoint, u: GroupElement) -> (f64, f64) {
    let mut max: f64 = 0.0;
    let mut sq = 0.0;
    for k in 0..4 {
        let d = conjugate(u, a.reps[k]).dist(&b.reps[k]);
        max = max.max(d);
        sq += d * d;
    }
    (max, sq)
}

fn cell24() -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(24);
    for k in 0..4 {
        let mut c = [0.0; 4];
        c[k] = 1.0;
        out.push(GroupElement::new(Quaternion::new(c[0], c[1], c[2], c[3])));
    }
    for m in 0..16u32 {
        let s = |b: u32| if m & (1 << b) == 0 { 0.5 } else { -0.5 };
        out.push(GroupElement::new(Quaternion::new(s(0), s(1), s(2), s(3))));
    }
    out.retain(|g| g.re() >= 0.0);
    out
}

/// Best rotation aligning the vector parts of `a` with those of `b` in the
/// least-squares sense, via the quaternion eigenvector method.
fn aligned_seed(a: &APoint, b: &APoint) -> GroupElement {
    let mut s = [[0.0f64; 3]; 3];
    for k in 0..4 {
        let p = a.reps[k].q().vector().to_array();
        let q = b.reps[k].q().vector().to_array();
        for (r, pr) in p.iter().enumerate() {
            for (c, qc) in q.iter().enumerate() {
                s[r][c] += pr * qc;
            }
        }
    }
    let [[sxx, sxy, sxz], [syx, syy, syz], [szx, szy, szz]] = s;
    let n = Matrix4::new(
        sxx + syy + szz, syz - szy, szx - sxz, sxy - syx,
        syz - szy, sxx - syy - szz, sxy + syx, szx + sxz,
        szx - sxz, sxy + syx, -sxx + syy - szz, syz + szy,
        sxy - syx, szx + sxz, syz + szy, -sxx - syy + szz,
    );
    let eig = SymmetricEigen::new(n);
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let v = eig.eigenvectors.column(idx);
    if v.norm() < 1e-12 {
        return GroupElement::IDENTITY;
    }
    GroupElement::new(Quaternion::new(v[0], v[1], v[2], v[3]))
}

fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// min over u ∈ SU(2) of the largest componentwise distance between u a u⁻¹ and b.
pub fn class_distance(a: &APoint, b: &APoint) -> f64 {
    let mut seeds = cell24();
    let aligned = aligned_seed(a, b);
    seeds.push(aligned);
    seeds.push(aligned.inv());
    let mut best = seeds
        .into_iter()
        .map(|u| (spread(a, b, u).1, u))
        .fold((f64::INFINITY, GroupElement::IDENTITY), |acc, x| if x.0 < acc.0 { x } else { acc })
        .1;
    let mut width = 0.5;
    for _round in 0..12 {
        for axis in 0..3 {
            let e = LieVector::basis(axis);
            let obj = |ang: f64| spread(a, b, best * exp(e.scale(ang))).1;
            let ang = golden_min(obj, -width, width, 60);
            let cand = best * exp(e.scale(ang));
            if spread(a, b, cand).1 <= spread(a, b, best).1 {
                best = cand;
            }
        }
        width *= 0.5;
    }
    spread(a, b, best).0
}
