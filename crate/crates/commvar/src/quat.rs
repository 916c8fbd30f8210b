use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::EPS_ALG;

/// re + x i + y j + z k, equivalently (re + x i) + (y + z i) j.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub re: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { re: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const I: Quaternion = Quaternion { re: 0.0, x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Quaternion = Quaternion { re: 0.0, x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Quaternion = Quaternion { re: 0.0, x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(re: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { re, x, y, z }
    }

    /// z + w j.
    pub fn from_complex(z: Complex64, w: Complex64) -> Self {
        Quaternion::new(z.re, z.im, w.re, w.im)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.x)
    }

    pub fn w(&self) -> Complex64 {
        Complex64::new(self.y, self.z)
    }

    pub fn conj(&self) -> Self {
        Quaternion::new(self.re, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Quaternion::new(self.re * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(&self, o: &Quaternion) -> f64 {
        self.re * o.re + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn vector(&self) -> LieVector {
        LieVector::new(self.x, self.y, self.z)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.re, self.x, self.y, self.z]
    }

    pub fn dist(&self, o: &Quaternion) -> f64 {
        (*self - *o).norm()
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re + o.re, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.re - o.re, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.re * o.re - self.x * o.x - self.y * o.y - self.z * o.z,
            self.re * o.x + self.x * o.re + self.y * o.z - self.z * o.y,
            self.re * o.y - self.x * o.z + self.y * o.re + self.z * o.x,
            self.re * o.z + self.x * o.y - self.y * o.x + self.z * o.re,
        )
    }
}

/// Pure imaginary quaternion x i + y j + z k, an element of su(2).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LieVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LieVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        LieVector { x, y, z }
    }

    pub fn basis(k: usize) -> Self {
        match k {
            0 => LieVector::new(1.0, 0.0, 0.0),
            1 => LieVector::new(0.0, 1.0, 0.0),
            _ => LieVector::new(0.0, 0.0, 1.0),
        }
    }

    pub fn quat(&self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, o: &LieVector) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &LieVector) -> LieVector {
        LieVector::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn scale(&self, s: f64) -> LieVector {
        LieVector::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for LieVector {
    type Output = LieVector;
    fn add(self, o: LieVector) -> LieVector {
        LieVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for LieVector {
    type Output = LieVector;
    fn sub(self, o: LieVector) -> LieVector {
        LieVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for LieVector {
    type Output = LieVector;
    fn neg(self) -> LieVector {
        self.scale(-1.0)
    }
}

/// Unit quaternion, i.e. an element of SU(2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    q: Quaternion,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { q: Quaternion::ONE };

    /// Normalizes `q`; panics on the zero quaternion.
    pub fn new(q: Quaternion) -> Self {
        let n = q.norm();
        assert!(n > 0.0, "zero quaternion is not a group element");
        GroupElement { q: q.scale(1.0 / n) }
    }

    pub fn from_complex(z: Complex64, w: Complex64) -> Self {
        GroupElement::new(Quaternion::from_complex(z, w))
    }

    /// e^{iα}.
    pub fn torus(alpha: f64) -> Self {
        GroupElement { q: Quaternion::new(alpha.cos(), alpha.sin(), 0.0, 0.0) }
    }

    pub fn i() -> Self {
        GroupElement { q: Quaternion::I }
    }

    pub fn j() -> Self {
        GroupElement { q: Quaternion::J }
    }

    pub fn k() -> Self {
        GroupElement { q: Quaternion::K }
    }

    pub fn q(&self) -> Quaternion {
        self.q
    }

    pub fn z(&self) -> Complex64 {
        self.q.z()
    }

    pub fn w(&self) -> Complex64 {
        self.q.w()
    }

    pub fn inv(&self) -> Self {
        GroupElement { q: self.q.conj() }
    }

    pub fn neg(&self) -> Self {
        GroupElement { q: -self.q }
    }

    pub fn re(&self) -> f64 {
        self.q.re
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.q.re
    }

    pub fn dist(&self, o: &GroupElement) -> f64 {
        self.q.dist(&o.q)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        mul(self, o)
    }
}

pub fn mul(a: GroupElement, b: GroupElement) -> GroupElement {
    GroupElement::new(a.q * b.q)
}

/// ghg⁻¹h⁻¹.
pub fn commutator(g: GroupElement, h: GroupElement) -> GroupElement {
    GroupElement::new(g.q * h.q * g.q.conj() * h.q.conj())
}

/// u g u⁻¹.
pub fn conjugate(u: GroupElement, g: GroupElement) -> GroupElement {
    GroupElement::new(u.q * g.q * u.q.conj())
}

/// Ad(g) on su(2).
pub fn adjoint(g: GroupElement, v: LieVector) -> LieVector {
    (g.q * v.quat() * g.q.conj()).vector()
}

pub fn exp(xi: LieVector) -> GroupElement {
    let n = xi.norm();
    if n == 0.0 {
        return GroupElement::IDENTITY;
    }
    let s = n.sin() / n;
    GroupElement::new(Quaternion::new(n.cos(), xi.x * s, xi.y * s, xi.z * s))
}

pub fn log(g: GroupElement) -> Result<LieVector> {
    let v = g.q.vector();
    let vn = v.norm();
    if vn <= EPS_ALG || g.q.re.abs() >= 1.0 - EPS_ALG {
        return Err(Error::DegenerateElement);
    }
    let angle = vn.atan2(g.q.re);
    Ok(v.scale(angle / vn))
}

pub fn haar_sample(seed: u64) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_sample_with(&mut rng)
}

/// Normalized 4-dim Gaussian.
pub fn haar_sample_with<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if q.norm() > 1e-6 {
            return GroupElement::new(q);
        }
    }
}

/// A class {±q} in RP³, stored by its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    rep: GroupElement,
}

impl ProjectivePoint {
    pub fn rep(&self) -> GroupElement {
        self.rep
    }

    /// Group structure of RP³ = SO(3).
    pub fn mul(&self, o: &ProjectivePoint) -> ProjectivePoint {
        projectivize(self.rep * o.rep)
    }

    pub fn inv(&self) -> ProjectivePoint {
        projectivize(self.rep.inv())
    }

    pub fn dist(&self, o: &ProjectivePoint) -> f64 {
        rp3_dist(&self.rep, &o.rep)
    }
}

pub fn projectivize(g: GroupElement) -> ProjectivePoint {
    let q = g.q;
    let lead = q.to_array().into_iter().find(|c| c.abs() > EPS_ALG).unwrap_or(1.0);
    let rep = if lead < 0.0 { g.neg() } else { g };
    ProjectivePoint { rep }
}

/// min(|p − q|, |p + q|).
pub fn rp3_dist(p: &GroupElement, q: &GroupElement) -> f64 {
    let a = p.q.dist(&q.q);
    let b = (p.q + q.q).norm();
    a.min(b)
}

/// e^{iα}, α kept in [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusElement {
    angle: f64,
}

impl TorusElement {
    pub fn new(angle: f64) -> Self {
        TorusElement { angle: wrap_angle(angle) }
    }

    pub fn from_complex(c: Complex64) -> Self {
        TorusElement::new(c.arg())
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    pub fn element(&self) -> GroupElement {
        GroupElement::torus(self.angle)
    }

    pub fn compose(&self, o: &TorusElement) -> TorusElement {
        TorusElement::new(self.angle + o.angle)
    }

    pub fn inv(&self) -> TorusElement {
        TorusElement::new(-self.angle)
    }

    pub fn circular_dist(&self, o: &TorusElement) -> f64 {
        circular_dist(self.angle, o.angle)
    }
}

pub fn torus_translate(t: TorusElement, p: ProjectivePoint) -> ProjectivePoint {
    projectivize(t.element() * p.rep)
}

pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn circular_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Arg on (−π, π].
pub fn arg(c: Complex64) -> f64 {
    let a = c.arg();
    if a <= -PI {
        a + TAU
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.dist(&b) < tol
    }

    #[test]
    fn product_table() {
        assert!(close((GroupElement::IDENTITY * GroupElement::i()).q(), Quaternion::I, 1e-15));
        assert!(close((GroupElement::i() * GroupElement::j()).q(), Quaternion::K, 1e-15));
        assert!(close((GroupElement::j() * GroupElement::k()).q(), Quaternion::I, 1e-15));
        assert!(close((GroupElement::k() * GroupElement::i()).q(), Quaternion::J, 1e-15));
    }

    #[test]
    fn complex_form_matches_hamilton_product() {
        // (z1 + w1 j)(z2 + w2 j) = (z1 z2 − w1 w̄2) + (z1 w2 + w1 z̄2) j
        let a = haar_sample(3);
        let b = haar_sample(4);
        let (z1, w1, z2, w2) = (a.z(), a.w(), b.z(), b.w());
        let expect = Quaternion::from_complex(z1 * z2 - w1 * w2.conj(), z1 * w2 + w1 * z2.conj());
        assert!(close(a.q() * b.q(), expect, 1e-14));
    }

    #[test]
    fn inverse_and_commutator() {
        let g = haar_sample(11);
        assert!((g * g.inv()).dist(&GroupElement::IDENTITY) < 1e-12);
        let c = commutator(GroupElement::i(), GroupElement::j());
        assert!(close(c.q(), -Quaternion::ONE, 1e-15));
        let t = commutator(GroupElement::torus(0.3), GroupElement::torus(1.9));
        assert!(t.dist(&GroupElement::IDENTITY) < 1e-15);
        assert!(commutator(g, GroupElement::IDENTITY).dist(&GroupElement::IDENTITY) < 1e-15);
    }

    #[test]
    fn exp_log() {
        assert_eq!(exp(LieVector::default()), GroupElement::IDENTITY);
        let i = exp(LieVector::new(PI / 2.0, 0.0, 0.0));
        assert!(i.dist(&GroupElement::i()) < 1e-15);
        let xi = log(GroupElement::i()).unwrap();
        assert!((xi - LieVector::new(PI / 2.0, 0.0, 0.0)).norm() < 1e-15);
        assert_eq!(log(GroupElement::IDENTITY.neg()), Err(Error::DegenerateElement));
        assert_eq!(log(GroupElement::IDENTITY), Err(Error::DegenerateElement));
    }

    #[test]
    fn haar_is_deterministic_and_centered() {
        assert_eq!(haar_sample(0), haar_sample(0));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 10_000;
        let mean: f64 = (0..n).map(|_| haar_sample_with(&mut rng).trace()).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.05, "mean trace {mean}");
    }

    #[test]
    fn projective_sign_rule() {
        let g = GroupElement::new(Quaternion::new(-0.5, 0.5, 0.5, 0.5));
        let p = projectivize(g);
        assert!(p.rep().q().re > 0.0);
        assert_eq!(projectivize(g), projectivize(g.neg()));
        let h = GroupElement::new(Quaternion::new(0.0, -1.0, 0.0, 0.0));
        assert_eq!(projectivize(h).rep().q(), Quaternion::I);
    }

    #[test]
    fn torus_angles_wrap() {
        let t = TorusElement::new(-0.5);
        assert!((t.angle() - (TAU - 0.5)).abs() < 1e-15);
        assert!(TorusElement::new(TAU).angle() < 1e-15);
        assert!((circular_dist(0.1, TAU - 0.1) - 0.2).abs() < 1e-14);
    }
}
