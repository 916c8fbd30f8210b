//! Waves Γ_{θ,P} on the (φ, Q) cylinder, their images on S², and the
//! normalized arc-length parametrizations γ_{θ,P}: [0, 2π] → S².
//!
//! Orientation: every parametrization leaves (θ/2, 0) heading north. For
//! P > 0 (and 0⁺) this means φ decreases along the curve, for P < 0 it
//! increases. Seen from the south pole the P > 0 curves run counterclockwise.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{q_of, unit_complement, ExtendedP};
use crate::quat::{circular_dist, wrap_angle};
use crate::tol::{EPS_ALG, EPS_ARC, EPS_ON};

pub const DEFAULT_KNOTS: usize = 1024;
pub const MIN_KNOTS: usize = 64;

const SEGMENT_TOL: f64 = 1e-11;
const MAX_DEPTH: u32 = 40;
/// Knots held across all cached tables before the cache is flushed.
const CACHE_KNOT_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveId {
    pub theta: f64,
    pub p: ExtendedP,
}

impl WaveId {
    pub fn new(theta: f64, p: ExtendedP) -> Result<Self> {
        if !(0.0..=PI + EPS_ALG).contains(&theta) {
            return Err(Error::InvalidWave(format!("theta = {theta} outside [0, pi]")));
        }
        if let ExtendedP::NonZero(v) = p {
            if !(-1.0..=1.0).contains(&v) || v.abs() <= EPS_ALG {
                return Err(Error::InvalidWave(format!("P = {v}")));
            }
            if theta <= EPS_ALG && v.abs() >= 1.0 {
                return Err(Error::DegenerateWave);
            }
        }
        Ok(WaveId { theta: theta.min(PI), p })
    }

    pub fn smooth(theta: f64, p: f64) -> Result<Self> {
        WaveId::new(theta, ExtendedP::nonzero(p)?)
    }

    pub fn is_square(&self) -> bool {
        self.p.is_zero() || self.theta <= EPS_ALG
    }

    pub fn is_flat(&self) -> bool {
        !self.is_square() && self.p.value().abs() >= 1.0
    }

    /// +1 when φ decreases along the parametrization.
    pub fn sigma(&self) -> f64 {
        self.p.sign()
    }

    fn phi_at(&self, u: f64) -> f64 {
        wrap_angle(self.theta / 2.0 - self.sigma() * u)
    }

    fn offset_of(&self, phi: f64) -> f64 {
        wrap_angle(self.sigma() * (self.theta / 2.0 - phi))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    pub phi: f64,
    pub q: f64,
}

impl CylinderPoint {
    pub fn new(phi: f64, q: f64) -> Self {
        CylinderPoint { phi: wrap_angle(phi), q: q.clamp(-1.0, 1.0) }
    }
}

pub fn wave_q(w: &WaveId, phi: f64) -> Result<f64> {
    if w.is_square() {
        return Err(Error::SquareWaveRequested);
    }
    q_of(w.p.value(), phi, w.theta)
}

/// (√(1−Q²) e^{iφ}, Q).
pub fn project_to_sphere(c: CylinderPoint) -> [f64; 3] {
    let r = unit_complement(c.q);
    if r == 0.0 {
        return [0.0, 0.0, c.q.signum()];
    }
    [r * c.phi.cos(), r * c.phi.sin(), c.q]
}

fn chord(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    /// Normalized arc parameter in [0, 2π].
    pub s: f64,
    /// Offset u = σ(θ/2 − φ) along the wave.
    pub u: f64,
    pub point: CylinderPoint,
    pub sphere: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcKind {
    Smooth,
    Square,
    Equator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcTable {
    pub wave: WaveId,
    pub kind: ArcKind,
    pub knots: Vec<Knot>,
    pub total_length: f64,
}

fn smooth_point(w: &WaveId, u: f64) -> (CylinderPoint, [f64; 3]) {
    let phi = w.phi_at(u);
    let q = q_of(w.p.value(), phi, w.theta).unwrap_or(0.0);
    let c = CylinderPoint { phi, q };
    (c, project_to_sphere(c))
}

fn square_point(w: &WaveId, s: f64) -> CylinderPoint {
    let (sn, cs) = s.sin_cos();
    let phi = if cs >= 0.0 { w.theta / 2.0 } else { w.theta / 2.0 + PI };
    CylinderPoint::new(phi, sn)
}

pub fn build_arc_table(w: WaveId, n_knots: usize) -> Result<ArcTable> {
    if n_knots < MIN_KNOTS {
        return Err(Error::InvalidWave(format!("n_knots = {n_knots} < {MIN_KNOTS}")));
    }
    if w.theta <= EPS_ALG && !w.p.is_zero() && w.p.value().abs() >= 1.0 {
        return Err(Error::DegenerateWave);
    }
    if w.is_square() || w.is_flat() {
        let kind = if w.is_square() { ArcKind::Square } else { ArcKind::Equator };
        let knots = (0..=n_knots)
            .map(|k| {
                let s = TAU * k as f64 / n_knots as f64;
                let point = if kind == ArcKind::Square {
                    square_point(&w, s)
                } else {
                    CylinderPoint::new(w.phi_at(s), 0.0)
                };
                Knot { s, u: s, point, sphere: project_to_sphere(point) }
            })
            .collect();
        return Ok(ArcTable { wave: w, kind, knots, total_length: TAU });
    }

    let mut raw: Vec<(f64, f64, CylinderPoint, [f64; 3])> = Vec::with_capacity(4 * n_knots);
    let (c0, x0) = smooth_point(&w, 0.0);
    raw.push((0.0, 0.0, c0, x0));
    let mut acc = 0.0;
    let h = TAU / n_knots as f64;
    for k in 1..=n_knots {
        let u1 = if k == n_knots { TAU } else { h * k as f64 };
        let start = *raw.last().expect("seeded");
        let end = smooth_point(&w, u1);
        refine(&w, (start.1, start.3), (u1, end.0, end.1), 0, &mut acc, &mut raw);
    }
    let total = acc;
    let knots = raw
        .into_iter()
        .map(|(len, u, point, sphere)| Knot { s: TAU * len / total, u, point, sphere })
        .collect::<Vec<_>>();
    Ok(ArcTable { wave: w, kind: ArcKind::Smooth, knots, total_length: total })
}

/// Adaptive bisection with a Richardson-corrected chord length per leaf.
fn refine(
    w: &WaveId,
    a: (f64, [f64; 3]),
    b: (f64, CylinderPoint, [f64; 3]),
    depth: u32,
    acc: &mut f64,
    out: &mut Vec<(f64, f64, CylinderPoint, [f64; 3])>,
) {
    let um = 0.5 * (a.0 + b.0);
    let (cm, xm) = smooth_point(w, um);
    let c = chord(&a.1, &b.2);
    let c1 = chord(&a.1, &xm);
    let c2 = chord(&xm, &b.2);
    if depth >= MAX_DEPTH || (c1 + c2 - c) <= SEGMENT_TOL {
        let len = (4.0 * (c1 + c2) - c) / 3.0;
        let split = if c1 + c2 > 0.0 { c1 / (c1 + c2) } else { 0.5 };
        out.push((*acc + len * split, um, cm, xm));
        *acc += len;
        out.push((*acc, b.0, b.1, b.2));
        return;
    }
    refine(w, a, (um, cm, xm), depth + 1, acc, out);
    let mid = *out.last().expect("left half pushed");
    refine(w, (mid.1, mid.3), b, depth + 1, acc, out);
}

type CacheKey = (i64, i64, u8, usize);

#[derive(Default)]
struct TableCache {
    map: HashMap<CacheKey, Arc<ArcTable>>,
    knots: usize,
}

fn cache() -> &'static RwLock<TableCache> {
    static CACHE: OnceLock<RwLock<TableCache>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(TableCache::default()))
}

fn cache_key(w: &WaveId, n: usize) -> CacheKey {
    let tag = match w.p {
        ExtendedP::NonZero(_) => 0,
        ExtendedP::ZeroPlus => 1,
        ExtendedP::ZeroMinus => 2,
    };
    ((w.theta * 1e12).round() as i64, (w.p.value() * 1e12).round() as i64, tag, n)
}

/// Cached table with the default knot count.
pub fn arc_table(w: WaveId) -> Result<Arc<ArcTable>> {
    arc_table_with(w, DEFAULT_KNOTS)
}

pub fn arc_table_with(w: WaveId, n_knots: usize) -> Result<Arc<ArcTable>> {
    let key = cache_key(&w, n_knots);
    if let Some(t) = cache().read().expect("wave cache poisoned").map.get(&key) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(build_arc_table(w, n_knots)?);
    let mut c = cache().write().expect("wave cache poisoned");
    if let Some(t) = c.map.get(&key) {
        return Ok(Arc::clone(t));
    }
    if c.knots + table.knots.len() > CACHE_KNOT_BUDGET {
        c.map.clear();
        c.knots = 0;
    }
    c.knots += table.knots.len();
    c.map.insert(key, Arc::clone(&table));
    Ok(table)
}

impl ArcTable {
    fn segment_by<F: Fn(&Knot) -> f64>(&self, key: F, x: f64) -> usize {
        let idx = self.knots.partition_point(|k| key(k) <= x);
        idx.clamp(1, self.knots.len() - 1) - 1
    }

    /// Total change of the azimuth φ over one period (smooth and flat waves).
    pub fn swept_azimuth(&self) -> f64 {
        match self.kind {
            ArcKind::Square => 0.0,
            _ => -self.wave.sigma() * TAU,
        }
    }
}

pub fn eval_arc(tab: &ArcTable, s: f64) -> CylinderPoint {
    let s = if (0.0..=TAU).contains(&s) { s } else { wrap_angle(s) };
    let w = &tab.wave;
    match tab.kind {
        ArcKind::Square => square_point(w, s),
        ArcKind::Equator => CylinderPoint::new(w.phi_at(s), 0.0),
        ArcKind::Smooth => {
            let i = tab.segment_by(|k| k.s, s);
            let (k0, k1) = (&tab.knots[i], &tab.knots[i + 1]);
            let f = if k1.s > k0.s { ((s - k0.s) / (k1.s - k0.s)).clamp(0.0, 1.0) } else { 0.0 };
            let u = k0.u + f * (k1.u - k0.u);
            smooth_point(w, u).0
        }
    }
}

pub fn arc_param(tab: &ArcTable, c: CylinderPoint) -> Result<f64> {
    let w = &tab.wave;
    let s = match tab.kind {
        ArcKind::Square => {
            let x = project_to_sphere(c);
            let (sn, cs) = (w.theta / 2.0).sin_cos();
            let off_plane = (-sn * x[0] + cs * x[1]).abs();
            if off_plane > EPS_ON {
                return Err(Error::NotOnWave { deviation: off_plane });
            }
            let along = cs * x[0] + sn * x[1];
            x[2].atan2(along)
        }
        ArcKind::Equator => {
            if c.q.abs() > EPS_ON {
                return Err(Error::NotOnWave { deviation: c.q.abs() });
            }
            w.offset_of(c.phi)
        }
        ArcKind::Smooth => {
            let expect = q_of(w.p.value(), c.phi, w.theta)?;
            let dev = (expect - c.q).abs();
            if dev > EPS_ON {
                return Err(Error::NotOnWave { deviation: dev });
            }
            let u = w.offset_of(c.phi);
            let i = tab.segment_by(|k| k.u, u);
            let (k0, k1) = (&tab.knots[i], &tab.knots[i + 1]);
            let f = if k1.u > k0.u { ((u - k0.u) / (k1.u - k0.u)).clamp(0.0, 1.0) } else { 0.0 };
            k0.s + f * (k1.s - k0.s)
        }
    };
    let s = wrap_angle(s);
    Ok(if TAU - s < 1e-15 { 0.0 } else { s })
}

/// Ψ: move a point of `from` to the point of `to` at the same normalized arc length.
pub fn psi_map(from: &WaveId, to: &WaveId, c: CylinderPoint) -> Result<CylinderPoint> {
    if from.p != to.p {
        return Err(Error::InvalidWave("psi_map needs waves with the same P".into()));
    }
    let s = arc_param(&*arc_table(*from)?, c)?;
    Ok(eval_arc(&*arc_table(*to)?, s))
}

/// Plot data: φ uniform over one period. Square waves give their limiting
/// step profile Q = σ·sgn(sin(θ/2 − φ)).
pub fn sample_curve(w: &WaveId, n: usize) -> Result<Vec<CylinderPoint>> {
    (0..n)
        .map(|k| {
            let phi = TAU * k as f64 / n as f64;
            let q = if w.is_square() {
                let k = (w.theta / 2.0 - phi).sin();
                if k.abs() < 1e-15 {
                    0.0
                } else {
                    w.sigma() * k.signum()
                }
            } else {
                wave_q(w, phi)?
            };
            Ok(CylinderPoint { phi, q })
        })
        .collect()
}

/// The square wave as a closed polyline on the cylinder, vertical jumps included.
pub fn square_polyline(w: &WaveId, n_per_edge: usize) -> Vec<CylinderPoint> {
    let jump = w.theta / 2.0;
    let sigma = w.sigma();
    let mut pts = Vec::new();
    let mut edge = |from: (f64, f64), to: (f64, f64)| {
        for k in 0..n_per_edge {
            let f = k as f64 / n_per_edge as f64;
            pts.push(CylinderPoint {
                phi: from.0 + f * (to.0 - from.0),
                q: from.1 + f * (to.1 - from.1),
            });
        }
    };
    edge((jump - PI, sigma), (jump, sigma));
    edge((jump, sigma), (jump, -sigma));
    edge((jump, -sigma), (jump + PI, -sigma));
    edge((jump + PI, -sigma), (jump + PI, sigma));
    pts.into_iter().map(|c| CylinderPoint::new(c.phi, c.q)).collect()
}

/// Hausdorff distance between two point samples on the cylinder, with φ measured circularly.
pub fn cylinder_hausdorff(a: &[CylinderPoint], b: &[CylinderPoint]) -> f64 {
    let d = |x: &CylinderPoint, y: &CylinderPoint| {
        (circular_dist(x.phi, y.phi).powi(2) + (x.q - y.q).powi(2)).sqrt()
    };
    let one_way = |p: &[CylinderPoint], q: &[CylinderPoint]| {
        p.iter()
            .map(|x| q.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Hausdorff distance between sphere samples (chordal).
pub fn sphere_hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let one_way = |p: &[[f64; 3]], q: &[[f64; 3]]| {
        p.iter()
            .map(|x| q.iter().map(|y| chord(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Relative change of the total length when the initial knot count doubles.
pub fn richardson_gap(w: WaveId, n_knots: usize) -> Result<f64> {
    let a = build_arc_table(w, n_knots)?.total_length;
    let b = build_arc_table(w, 2 * n_knots)?.total_length;
    Ok((a - b).abs())
}

pub fn within_arc_tolerance(x: f64) -> bool {
    x <= EPS_ARC
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn wave_q_examples() {
        let w = WaveId::smooth(1.2, FRAC_1_SQRT_2).unwrap();
        assert!((wave_q(&w, 0.0).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        let w = WaveId::smooth(PI, 0.99).unwrap();
        let bound = unit_complement(0.99);
        for k in 0..100 {
            assert!(wave_q(&w, k as f64 * 0.0628).unwrap().abs() <= bound + 1e-15);
        }
        assert_eq!(wave_q(&WaveId::smooth(0.7, 1.0).unwrap(), 1.3).unwrap(), 0.0);
        let sq = WaveId::new(1.0, ExtendedP::ZeroPlus).unwrap();
        assert_eq!(wave_q(&sq, 0.1), Err(Error::SquareWaveRequested));
    }

    #[test]
    fn sphere_projection() {
        assert_eq!(project_to_sphere(CylinderPoint::new(2.0, 1.0)), [0.0, 0.0, 1.0]);
        assert_eq!(project_to_sphere(CylinderPoint::new(0.0, 0.0)), [1.0, 0.0, 0.0]);
        let p = project_to_sphere(CylinderPoint::new(PI / 2.0, 0.6));
        assert!(p[0].abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15 && (p[2] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn degenerate_and_invalid_waves() {
        assert_eq!(WaveId::smooth(0.0, 1.0), Err(Error::DegenerateWave));
        assert!(WaveId::smooth(4.0, 0.5).is_err());
        assert!(build_arc_table(WaveId::smooth(1.0, 0.5).unwrap(), 10).is_err());
    }

    #[test]
    fn square_wave_table() {
        let w = WaveId::new(PI, ExtendedP::ZeroPlus).unwrap();
        let t = build_arc_table(w, 256).unwrap();
        assert_eq!(t.total_length, TAU);
        let c = eval_arc(&t, PI);
        assert!(circular_dist(c.phi, PI / 2.0 + PI) < 1e-15 && c.q.abs() < 1e-15);
        let north = eval_arc(&t, PI / 2.0);
        assert!((north.q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn flat_wave_is_the_equator() {
        let w = WaveId::smooth(0.8, 1.0).unwrap();
        let t = build_arc_table(w, 64).unwrap();
        assert_eq!(t.kind, ArcKind::Equator);
        for s in [0.0, 0.3, 2.0, 5.5] {
            let c = eval_arc(&t, s);
            assert!(circular_dist(c.phi, 0.4 - s) < 1e-14 && c.q == 0.0);
            assert!((arc_param(&t, c).unwrap() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn half_length_symmetry() {
        let w = WaveId::smooth(PI, 0.5).unwrap();
        let t = build_arc_table(w, DEFAULT_KNOTS).unwrap();
        let s = arc_param(&t, CylinderPoint::new(PI / 2.0 + PI, 0.0)).unwrap();
        assert!((s - PI).abs() < 1e-6, "s = {s}");
        let first = t.knots.iter().find(|k| (k.u - PI).abs() < 1e-15).unwrap();
        assert!((first.s - PI).abs() < 1e-6);
    }

    #[test]
    fn base_point_and_orientation() {
        for p in [0.3, -0.3, 0.9, -0.05] {
            let w = WaveId::smooth(1.1, p).unwrap();
            let t = build_arc_table(w, 128).unwrap();
            let c = eval_arc(&t, 0.0);
            assert!(circular_dist(c.phi, 0.55) < 1e-15 && c.q.abs() < 1e-15);
            assert!(eval_arc(&t, 0.01).q > 0.0, "heads north first");
            assert_eq!(t.swept_azimuth().signum(), -p.signum());
        }
    }

    #[test]
    fn off_curve_point_is_rejected() {
        let t = build_arc_table(WaveId::smooth(1.0, 0.4).unwrap(), 64).unwrap();
        assert!(matches!(arc_param(&t, CylinderPoint::new(2.0, 0.95)), Err(Error::NotOnWave { .. })));
    }
}
