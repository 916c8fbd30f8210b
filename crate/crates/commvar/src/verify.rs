//! Named invariant suites with observed worst-case defects, used by
//! `commvar verify`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{canonical_residual, k_factor, k_factor_ratio, level_residual, pair_from, q_of, to_coords};
use crate::gradflow::{flow, Direction, FlowConfig, Termination};
use crate::homalg::{self, gysin, ring, scenario};
use crate::homeo::{phi_fwd, phi_inv, t_equivariance_defect};
use crate::quat::{
    adjoint, commutator, exp, haar_sample_with, log, projectivize, rp3_dist, GroupElement, LieVector, TorusElement,
};
use crate::retract::{class_distance, retract_r, retract_r_prime, rho, sample_apoint, transition_tau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Quat,
    Geom,
    Homeo,
    Retract,
    Flow,
    Homalg,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Quat, Suite::Geom, Suite::Homeo, Suite::Retract, Suite::Flow, Suite::Homalg];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Quat => "quat",
            Suite::Geom => "geom",
            Suite::Homeo => "homeo",
            Suite::Retract => "retract",
            Suite::Flow => "flow",
            Suite::Homalg => "homalg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub samples: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub invariants: Vec<Invariant>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Replaces every default tolerance when set.
    pub tol: Option<f64>,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, tol: None, samples: 200 }
    }
}

struct Collector {
    cfg: VerifyConfig,
    out: Vec<Invariant>,
}

impl Collector {
    fn push(&mut self, name: &str, samples: usize, defects: impl IntoIterator<Item = f64>, default_tol: f64) {
        let max_defect = defects.into_iter().fold(0.0, |m: f64, d| if d.is_nan() { f64::INFINITY } else { m.max(d) });
        let tolerance = self.cfg.tol.unwrap_or(default_tol);
        self.out.push(Invariant { name: name.into(), samples, max_defect, tolerance, pass: max_defect <= tolerance });
    }

    /// Errors count as an infinite defect.
    fn push_results(&mut self, name: &str, samples: usize, defects: Vec<Result<f64>>, default_tol: f64) {
        let d: Vec<f64> = defects.into_iter().map(|r| r.unwrap_or(f64::INFINITY)).collect();
        self.push(name, samples, d, default_tol);
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut c = Collector { cfg: *cfg, out: Vec::new() };
    let n = cfg.samples.max(1);
    match suite {
        Suite::Quat => quat_suite(&mut c, &mut rng, n),
        Suite::Geom => geom_suite(&mut c, &mut rng, n),
        Suite::Homeo => homeo_suite(&mut c, &mut rng, n),
        Suite::Retract => retract_suite(&mut c, &mut rng, n),
        Suite::Flow => flow_suite(&mut c, &mut rng, n),
        Suite::Homalg => homalg_suite(&mut c),
    }
    SuiteReport { suite, invariants: c.out }
}

fn quat_suite(c: &mut Collector, rng: &mut ChaCha8Rng, n: usize) {
    let pairs: Vec<(GroupElement, GroupElement)> =
        (0..n).map(|_| (haar_sample_with(rng), haar_sample_with(rng))).collect();
    c.push("product_stays_unit", n, pairs.iter().map(|(g, h)| ((*g * *h).q().norm() - 1.0).abs()), 1e-12);
    c.push_results(
        "exp_log_round_trip",
        n,
        pairs.iter().map(|(g, _)| Ok(exp(log(*g)?).dist(g))).collect(),
        1e-10,
    );
    c.push(
        "commutator_inverse",
        n,
        pairs.iter().map(|(g, h)| (commutator(*g, *h) * commutator(*h, *g)).dist(&GroupElement::IDENTITY)),
        1e-12,
    );
    let v = LieVector::new(0.3, -1.2, 0.7);
    c.push("adjoint_isometry", n, pairs.iter().map(|(g, _)| (adjoint(*g, v).norm() - v.norm()).abs()), 1e-12);
}

fn random_point(rng: &mut ChaCha8Rng) -> crate::quat::ProjectivePoint {
    projectivize(haar_sample_with(rng))
}

fn geom_suite(c: &mut Collector, rng: &mut ChaCha8Rng, n: usize) {
    let thetas = [0.3, PI / 2.0, PI];
    let mut round = Vec::new();
    let mut canonical = Vec::new();
    for k in 0..n {
        let theta = thetas[k % 3];
        let r = phi_inv(theta, &random_point(rng)).and_then(|(g, h)| {
            let co = to_coords(theta, g, h)?;
            let (g2, h2) = co.to_pair();
            Ok((g2.dist(&g).max(h2.dist(&h)), canonical_residual(&co).norm()))
        });
        round.push(r.clone().map(|x| x.0));
        canonical.push(r.map(|x| x.1));
    }
    c.push_results("coords_round_trip", n, round, 1e-9);
    c.push_results("canonical_relation", n, canonical, 1e-8);
    let k_gap: Vec<f64> = (0..n)
        .map(|_| {
            let theta = rng.random_range(0.05..=PI);
            let phi = rng.random_range(0.0..2.0 * PI);
            (k_factor(phi, theta) - k_factor_ratio(phi, theta)).abs()
        })
        .collect();
    c.push("k_closed_forms_agree", n, k_gap, 1e-12);
    let q_level: Vec<Result<f64>> = (0..n)
        .map(|_| {
            let theta = rng.random_range(0.05..=PI);
            let p: f64 = rng.random_range(-0.999..0.999);
            let p = if p.abs() < 1e-3 { 1e-3 } else { p };
            let phi = rng.random_range(0.0..2.0 * PI);
            let alpha = rng.random_range(0.0..2.0 * PI);
            let q = q_of(p, phi, theta)?;
            let a = num_complex::Complex64::from_polar(1.0, alpha);
            let b = a * num_complex::Complex64::from_polar(1.0, -phi);
            let (g, h) = pair_from(theta, p, a, q, b);
            Ok(level_residual(theta, g, h))
        })
        .collect();
    c.push_results("q_formula_on_level", n, q_level, 1e-8);
}

fn homeo_suite(c: &mut Collector, rng: &mut ChaCha8Rng, n: usize) {
    let mut level = Vec::new();
    let mut round = Vec::new();
    let mut equiv = Vec::new();
    for _ in 0..n {
        let theta = rng.random_range(0.05..=PI);
        let p = random_point(rng);
        let r = phi_inv(theta, &p);
        level.push(r.as_ref().map(|(g, h)| level_residual(theta, *g, *h)).map_err(Clone::clone));
        round.push(r.and_then(|(g, h)| Ok(rp3_dist(&phi_fwd(theta, g, h)?.rep(), &p.rep()))));
        let t = TorusElement::new(rng.random_range(0.0..2.0 * PI));
        equiv.push(t_equivariance_defect(theta, t, &p));
    }
    c.push_results("level_residual", n, level, 1e-7);
    c.push_results("round_trip", n, round, 1e-6);
    c.push_results("t_equivariance", n, equiv, 1e-7);
}

fn retract_suite(c: &mut Collector, rng: &mut ChaCha8Rng, n: usize) {
    let mut r_level = Vec::new();
    let mut rp_level = Vec::new();
    for _ in 0..n {
        let theta = rng.random_range(0.05..=PI - 0.05);
        let t: f64 = rng.random_range(0.0..=1.0);
        let p = random_point(rng);
        let pair = phi_inv(theta, &p);
        r_level.push(pair.clone().and_then(|(g, h)| {
            let (g1, h1) = retract_r(g, h, theta, t)?;
            Ok(level_residual(t * theta, g1, h1))
        }));
        rp_level.push(pair.and_then(|(g, h)| {
            let (g1, h1) = retract_r_prime(g, h, theta, t)?;
            Ok(level_residual(t * theta + (1.0 - t) * PI, g1, h1))
        }));
    }
    c.push_results("r_lands_on_level", n, r_level, 1e-7);
    c.push_results("r_prime_lands_on_level", n, rp_level, 1e-7);
    let grid = 50;
    let points = (n / 10).max(2);
    let mut mu = Vec::new();
    let mut tau = Vec::new();
    for _ in 0..points {
        let Ok(ap) = sample_apoint(rng, 0.1, PI - 0.1) else {
            mu.push(Err(crate::error::Error::DegenerateElement));
            continue;
        };
        for k in 0..grid {
            let t = k as f64 / (grid - 1) as f64;
            mu.push(rho(&ap, t).map(|x| x.mu_residual()));
        }
        let u = haar_sample_with(rng);
        tau.push(transition_tau(&ap).and_then(|a| {
            let b = transition_tau(&ap.conjugated(u))?;
            Ok(a.definitional.dist(&b.definitional).max(a.homotoped.dist(&b.homotoped)))
        }));
        let moved = ap.conjugated(haar_sample_with(rng));
        tau.push(Ok(class_distance(&ap, &moved)));
    }
    c.push_results("rho_preserves_mu", points * grid, mu, 1e-6);
    c.push_results("tau_representative_invariance", points, tau, 1e-6);
}

fn flow_suite(c: &mut Collector, rng: &mut ChaCha8Rng, n: usize) {
    let starts = (n / 4).max(4);
    // |[g,h] − 1|² = 2 − f, so the endpoint bound needs f within 1e-8 of 2.
    let cfg = FlowConfig::default();
    let mut failures = 0usize;
    let mut mono = Vec::new();
    let mut endpoint = Vec::new();
    for _ in 0..starts {
        let trace = flow(haar_sample_with(rng), haar_sample_with(rng), &cfg);
        mono.push(trace.worst_monotonicity_violation(Direction::Ascend));
        if trace.terminated_by == Termination::FTol {
            let last = trace.last();
            endpoint.push(commutator(last.g, last.h).dist(&GroupElement::IDENTITY));
        } else {
            failures += 1;
        }
    }
    c.push("non_convergence_fraction", starts, [failures as f64 / starts as f64], 0.01);
    c.push("monotone_ascent", starts, mono, 1e-12);
    c.push("endpoint_commutator", starts, endpoint, 1e-4);
}

fn homalg_suite(c: &mut Collector) {
    for name in scenario::bundled_names() {
        let d = match scenario::solve_bundled(name) {
            Ok(r) if r.passed() => 0.0,
            _ => 1.0,
        };
        c.push(&format!("table_{name}"), 1, [d], 0.0);
    }
    let thaddeus = homalg::thaddeus_check(3, 2)
        .map(|q| if q == num_rational::BigRational::from_integer(4.into()) { 0.0 } else { 1.0 })
        .unwrap_or(1.0);
    c.push("thaddeus_3_2_is_4", 1, [thaddeus], 0.0);
    let lambda = gysin::solve_lambda(&[4], 64).ok().flatten();
    c.push("gysin_lambda_is_4", 1, [if lambda == Some(4) { 0.0 } else { 1.0 }], 0.0);
    let ring_ok = matches!(ring::ring_table_check(&ring::atiyah_ring(4)), Ok(true));
    c.push("ring_table_duality", 1, [if ring_ok { 0.0 } else { 1.0 }], 0.0);
    let w = homalg::wall_invariants(2, 12, 4);
    let wall_ok = w.d == 4 && w.p == -8 && w.congruence_ok;
    c.push("wall_invariants_2_12_4", 1, [if wall_ok { 0.0 } else { 1.0 }], 0.0);
}

pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Vec<SuiteReport> {
    suites.iter().map(|s| run_suite(*s, cfg)).collect()
}
