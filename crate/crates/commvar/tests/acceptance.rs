//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use commvar::geom::{canonical_residual, k_factor, k_factor_ratio, level_residual, pair_from, q_of, to_coords, ExtendedP};
use commvar::gradflow::{dnu, f_value, flow, grad_f, Direction, FlowConfig, TangentPair, Termination};
use commvar::homalg::{gysin, ring, scenario, smith_normal_form, thaddeus_check, wall_invariants, IntMatrix};
use commvar::homeo::{phi_fwd, phi_inv, t_equivariance_defect};
use commvar::quat::{
    commutator, conjugate, exp, haar_sample_with, log, projectivize, rp3_dist, GroupElement, LieVector, TorusElement,
};
use commvar::retract::{class_distance, retract_r, retract_r_prime, rho, sample_apoint, transition_tau};
use commvar::waves::{cylinder_hausdorff, project_to_sphere, sample_curve, sphere_hausdorff, square_polyline, wave_q, CylinderPoint, WaveId};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const TOL_LEVEL: f64 = 1e-7;
const TOL_ROUND_TRIP: f64 = 1e-6;
const TOL_EQUIVARIANCE: f64 = 1e-7;
const TOL_ON_LEVEL: f64 = 1e-8;
const TOL_K_FORMS: f64 = 1e-12;
const TOL_RETRACT: f64 = 1e-7;
const TOL_MU: f64 = 1e-6;
const TOL_TAU: f64 = 1e-6;
const RICHARDSON_TARGET: f64 = 2.0;
const RICHARDSON_BAND: f64 = 0.1;
const MIN_CONVERGED: f64 = 0.99;
const TOL_F: f64 = 1e-6;
const TOL_ENDPOINT: f64 = 1e-4;
const TOL_FIGURE_POINTWISE: f64 = 1e-12;
const TOL_HAUSDORFF: f64 = 1e-2;
const FD_STEP: f64 = 1e-4;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED.wrapping_add(k))
}

fn hamilton(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn conj4(a: [f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// |g h g⁻¹ h⁻¹ − (cos θ + i sin θ)| from raw Hamilton products.
fn raw_level_residual(theta: f64, g: GroupElement, h: GroupElement) -> f64 {
    let (g, h) = (g.q().to_array(), h.q().to_array());
    let nu = hamilton(hamilton(hamilton(g, h), conj4(g)), conj4(h));
    let target = [theta.cos(), theta.sin(), 0.0, 0.0];
    nu.iter().zip(target).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn c1_level_set() -> Outcome {
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for k in 0..10_000 {
        let theta = [0.3, PI / 2.0, PI][k % 3];
        match phi_inv(theta, &projectivize(haar_sample_with(&mut r))) {
            Ok((g, h)) => worst = worst.max(raw_level_residual(theta, g, h)),
            Err(_) => errors += 1,
        }
    }
    outcome(errors == 0 && worst < TOL_LEVEL, format!("10^4 samples, max residual {worst:.2e} (< {TOL_LEVEL:e}), {errors} errors"))
}

fn c2_round_trip() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..1000 {
        let theta = r.random_range(0.01..=PI);
        let p = haar_sample_with(&mut r);
        match phi_inv(theta, &projectivize(p)).and_then(|(g, h)| phi_fwd(theta, g, h)) {
            Ok(back) => worst = worst.max(rp3_dist(&back.rep(), &p)),
            Err(_) => errors += 1,
        }
    }
    outcome(errors == 0 && worst < TOL_ROUND_TRIP, format!("10^3 points, max RP^3 distance {worst:.2e} (< {TOL_ROUND_TRIP:e})"))
}

fn c3_equivariance() -> Outcome {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    let mut errors = 0;
    for _ in 0..1000 {
        let theta = r.random_range(0.01..=PI);
        let t = TorusElement::new(r.random_range(0.0..2.0 * PI));
        match t_equivariance_defect(theta, t, &projectivize(haar_sample_with(&mut r))) {
            Ok(d) => worst = worst.max(d),
            Err(_) => errors += 1,
        }
    }
    outcome(errors == 0 && worst < TOL_EQUIVARIANCE, format!("10^3 triples, max defect {worst:.2e} (< {TOL_EQUIVARIANCE:e})"))
}

fn c4_canonical_and_q() -> Outcome {
    let mut r = rng(4);
    let (mut canon, mut level, mut kgap): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut errors = 0;
    for _ in 0..10_000 {
        let theta = r.random_range(0.01..=PI);
        let mut p: f64 = r.random_range(-1.0..1.0);
        if p.abs() < 1e-6 {
            p = 1e-6;
        }
        let phi = r.random_range(0.0..2.0 * PI);
        let alpha = r.random_range(0.0..2.0 * PI);
        kgap = kgap.max((k_factor(phi, theta) - k_factor_ratio(phi, theta)).abs());
        let Ok(q) = q_of(p, phi, theta) else {
            errors += 1;
            continue;
        };
        let a = Complex64::from_polar(1.0, alpha);
        let b = a * Complex64::from_polar(1.0, -phi);
        let (g, h) = pair_from(theta, p, a, q, b);
        level = level.max(raw_level_residual(theta, g, h));
        match to_coords(theta, g, h) {
            Ok(c) => canon = canon.max(canonical_residual(&c).norm()),
            Err(_) => errors += 1,
        }
    }
    let pass = errors == 0 && level < TOL_ON_LEVEL && canon < TOL_ON_LEVEL && kgap < TOL_K_FORMS;
    outcome(
        pass,
        format!("10^4 draws, on-level {level:.2e}, canonical {canon:.2e} (< {TOL_ON_LEVEL:e}); K forms {kgap:.2e} (< {TOL_K_FORMS:e})"),
    )
}

fn c5_retractions() -> Outcome {
    let mut r = rng(5);
    let (mut lr, mut lrp): (f64, f64) = (0.0, 0.0);
    let mut errors = 0;
    for _ in 0..1000 {
        let theta = r.random_range(0.05..PI - 0.05);
        let t: f64 = r.random_range(0.0..=1.0);
        let Ok((g, h)) = phi_inv(theta, &projectivize(haar_sample_with(&mut r))) else {
            errors += 1;
            continue;
        };
        match retract_r(g, h, theta, t) {
            Ok((a, b)) => lr = lr.max(level_residual(t * theta, a, b)),
            Err(_) => errors += 1,
        }
        match retract_r_prime(g, h, theta, t) {
            Ok((a, b)) => lrp = lrp.max(level_residual(t * theta + (1.0 - t) * PI, a, b)),
            Err(_) => errors += 1,
        }
    }
    let (mut mu, mut tau): (f64, f64) = (0.0, 0.0);
    for _ in 0..40 {
        let Ok(ap) = sample_apoint(&mut r, 0.1, PI - 0.1) else {
            errors += 1;
            continue;
        };
        for k in 0..50 {
            match rho(&ap, k as f64 / 49.0) {
                Ok(x) => mu = mu.max(x.mu_residual()),
                Err(_) => errors += 1,
            }
        }
        let u = haar_sample_with(&mut r);
        match (transition_tau(&ap), transition_tau(&ap.conjugated(u))) {
            (Ok(a), Ok(b)) => {
                tau = tau.max(a.definitional.dist(&b.definitional)).max(a.homotoped.dist(&b.homotoped));
            }
            _ => errors += 1,
        }
        tau = tau.max(class_distance(&ap, &ap.conjugated(u)));
    }
    let pass = errors == 0 && lr < TOL_RETRACT && lrp < TOL_RETRACT && mu < TOL_MU && tau < TOL_TAU;
    outcome(
        pass,
        format!("r {lr:.2e}, r' {lrp:.2e} (< {TOL_RETRACT:e}); mu {mu:.2e} (< {TOL_MU:e}); tau {tau:.2e} (< {TOL_TAU:e})"),
    )
}

/// Forward-difference errors at steps s and s/2 for ν⁻¹dν and for df.
fn fd_errors(g: GroupElement, h: GroupElement, tp: &TangentPair, s: f64) -> (f64, f64) {
    let nu = commutator(g, h);
    let moved = |s: f64| (g * exp(tp.u.scale(s)), h * exp(tp.v.scale(s)));
    let exact = dnu(g, h, tp);
    let grad = grad_f(g, h);
    let exact_df = tp.b_form(&grad);
    let nu_err = |s: f64| {
        let (g1, h1) = moved(s);
        let approx = log(nu.inv() * commutator(g1, h1)).expect("small step").scale(1.0 / s);
        (approx - exact).norm()
    };
    let df_err = |s: f64| {
        let (g1, h1) = moved(s);
        ((f_value(g1, h1) - f_value(g, h)) / s - exact_df).abs()
    };
    (nu_err(s) / nu_err(s / 2.0), df_err(s) / df_err(s / 2.0))
}

fn c6_gradient() -> Outcome {
    let mut r = rng(6);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut seen = 0;
    for _ in 0..200 {
        let (g, h) = (haar_sample_with(&mut r), haar_sample_with(&mut r));
        let rand_vec = |r: &mut ChaCha8Rng| LieVector::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let tp = TangentPair::new(rand_vec(&mut r), rand_vec(&mut r));
        let (a, b) = fd_errors(g, h, &tp, FD_STEP);
        for x in [a, b] {
            if x.is_finite() {
                lo = lo.min(x);
                hi = hi.max(x);
                seen += 1;
            }
        }
    }
    let ratios_ok = seen >= 300 && (lo - RICHARDSON_TARGET).abs() <= RICHARDSON_BAND && (hi - RICHARDSON_TARGET).abs() <= RICHARDSON_BAND;
    // ∇f = 0 exactly on ν = ±1: conjugated commuting and anticommuting pairs
    // against generic pairs.
    let mut crit: f64 = 0.0;
    let mut generic_min = f64::INFINITY;
    for _ in 0..200 {
        let u = haar_sample_with(&mut r);
        let (a, b) = (r.random_range(0.0..2.0 * PI), r.random_range(0.0..2.0 * PI));
        crit = crit.max(grad_f(conjugate(u, GroupElement::torus(a)), conjugate(u, GroupElement::torus(b))).norm());
        crit = crit.max(grad_f(conjugate(u, GroupElement::i()), conjugate(u, GroupElement::j())).norm());
        let (g, h) = (haar_sample_with(&mut r), haar_sample_with(&mut r));
        let nu = commutator(g, h);
        let off = nu.dist(&GroupElement::IDENTITY).min(nu.dist(&GroupElement::IDENTITY.neg()));
        if off > 1e-3 {
            generic_min = generic_min.min(grad_f(g, h).norm() / off);
        }
    }
    let crit_ok = crit < 1e-12 && generic_min > 1e-3;
    outcome(
        ratios_ok && crit_ok,
        format!(
            "error ratios in [{lo:.3}, {hi:.3}] (target {RICHARDSON_TARGET} ± {RICHARDSON_BAND}); |grad| at nu = ±1 {crit:.1e}, min |grad|/|nu ∓ 1| elsewhere {generic_min:.2e}"
        ),
    )
}

fn c7_flow() -> Outcome {
    let mut r = rng(7);
    let cfg = FlowConfig::default();
    let starts = 200;
    let mut converged = 0;
    let mut mono: f64 = 0.0;
    let mut endpoint: f64 = 0.0;
    for _ in 0..starts {
        let trace = flow(haar_sample_with(&mut r), haar_sample_with(&mut r), &cfg);
        mono = mono.max(trace.worst_monotonicity_violation(Direction::Ascend));
        let last = trace.last();
        if trace.terminated_by == Termination::FTol && (last.f - 2.0).abs() < TOL_F {
            converged += 1;
            endpoint = endpoint.max(commutator(last.g, last.h).dist(&GroupElement::IDENTITY));
        }
    }
    let frac = converged as f64 / starts as f64;
    let pass = frac >= MIN_CONVERGED && mono <= 1e-12 && endpoint < TOL_ENDPOINT;
    outcome(
        pass,
        format!("{converged}/{starts} reach |f - 2| < {TOL_F:e}; worst decrease {mono:.1e}; endpoint |nu - 1| {endpoint:.4e} (< {TOL_ENDPOINT:e})"),
    )
}

fn c8_tables() -> Outcome {
    let expected: [(&str, &[&str]); 6] = [
        ("commuting_pairs", &["Z", "0", "Z", "Z^2", "Z/2", "0"]),
        ("atiyah_A", &["Z", "0", "Z", "Z^4", "Z", "0", "Z"]),
        ("atiyah_bar_A", &["Z", "0", "0", "0", "Z/4", "0", "0", "Z"]),
        ("nine_manifold_check_M", &["Z", "0", "Z", "0", "Z/4", "0", "Z/4", "Z", "0", "Z"]),
        ("nine_manifold_M", &["Z", "0", "Z", "Z^4", "Z/4", "(Z/2)^4", "Z^4+Z/4", "Z", "0", "Z"]),
        ("line_bundle_E", &["Z", "0", "0", "Z^4", "Z^4+Z/4", "0", "0", "Z"]),
    ];
    let mut bad = Vec::new();
    for (name, want) in expected {
        let got = scenario::solve_bundled(name).map(|r| r.table);
        let matches = match &got {
            Ok(t) => {
                let n = t.len().max(want.len());
                (0..n).all(|q| t.get(q).map_or("0", String::as_str) == want.get(q).copied().unwrap_or("0"))
            }
            Err(_) => false,
        };
        if !matches {
            bad.push(format!("{name}: {got:?}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "6/6 tables match".into() } else { bad.join("; ") })
}

fn c9_ring() -> Outcome {
    let thaddeus = thaddeus_check(3, 2).ok() == Some(BigRational::from_integer(BigInt::from(4)));
    let lambda = gysin::solve_lambda(&[4], 64).ok().flatten();
    let ring_ok = matches!(ring::ring_table_check(&ring::atiyah_ring(4)), Ok(true));
    let w = wall_invariants(2, 12, 4);
    let wall_ok = w.d == 4 && w.p == -8 && w.congruence_ok;
    outcome(
        thaddeus && lambda == Some(4) && ring_ok && wall_ok,
        format!("thaddeus(3,2)=4 {thaddeus}; lambda {lambda:?}; ring duality {ring_ok}; wall (d={}, p={}, mod 24 {})", w.d, w.p, w.congruence_ok),
    )
}

fn cli_waves_csv(args: &[&str]) -> Vec<(f64, String, f64, f64)> {
    let path = std::env::temp_dir().join(format!("commvar-acceptance-{}.csv", std::process::id()));
    let mut argv = vec!["commvar", "--out", path.to_str().expect("utf-8 temp path"), "waves"];
    argv.extend_from_slice(args);
    assert_eq!(commvar::cli::main_with_args(argv), 0, "waves command failed");
    let text = std::fs::read_to_string(&path).expect("waves output");
    let _ = std::fs::remove_file(&path);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,P,phi,Q"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].to_string(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

fn c10_figures() -> Outcome {
    let n = 720;
    let mut rows = cli_waves_csv(&["--figure", "1", "--samples", &n.to_string()]);
    rows.extend(cli_waves_csv(&["--figure", "2", "--samples", &n.to_string()]));
    let mut pointwise: f64 = 0.0;
    let mut zero_at_half: f64 = 0.0;
    let mut peak: f64 = 0.0;
    let mut square_rows = 0;
    for (theta, p, phi, q) in &rows {
        let ep: ExtendedP = p.parse().expect("P label");
        let w = WaveId::new(*theta, ep).expect("wave");
        if w.is_square() {
            square_rows += 1;
            continue;
        }
        pointwise = pointwise.max((q - q_of(ep.value(), *phi, *theta).unwrap()).abs());
    }
    let smooth: Vec<(f64, f64)> = vec![(1.2, FRAC_1_SQRT_2), (0.5, FRAC_1_SQRT_2), (PI, 0.99), (PI, 0.5), (PI, -0.5)];
    for (theta, p) in smooth {
        let w = WaveId::smooth(theta, p).unwrap();
        zero_at_half = zero_at_half.max(wave_q(&w, theta / 2.0).unwrap().abs());
        let rr = (1.0 - p * p).sqrt();
        let want = rr / (rr * rr + p * p * (theta / 2.0).sin().powi(2)).sqrt();
        for side in [-1.0, 1.0] {
            peak = peak.max((wave_q(&w, theta / 2.0 + side * PI / 2.0).unwrap().abs() - want).abs());
        }
        let grid_max = (0..4096).map(|k| wave_q(&w, 2.0 * PI * k as f64 / 4096.0).unwrap().abs()).fold(0.0, f64::max);
        peak = peak.max((grid_max - want).max(0.0));
    }
    // The θ = 0 curve of the first set against the nearby smooth θ = 0.05 wave.
    let square = WaveId::new(0.0, ExtendedP::NonZero(FRAC_1_SQRT_2)).unwrap();
    let near = WaveId::smooth(0.05, FRAC_1_SQRT_2).unwrap();
    let sq: Vec<CylinderPoint> = square_polyline(&square, 2000);
    let sm: Vec<CylinderPoint> = sample_curve(&near, 8000).unwrap();
    let h_cyl = cylinder_hausdorff(&sq, &sm);
    let h_sph = sphere_hausdorff(
        &sq.iter().map(|c| project_to_sphere(*c)).collect::<Vec<_>>(),
        &sm.iter().map(|c| project_to_sphere(*c)).collect::<Vec<_>>(),
    );
    let qualitative = pointwise < TOL_FIGURE_POINTWISE && zero_at_half < TOL_FIGURE_POINTWISE && peak < TOL_FIGURE_POINTWISE && square_rows == 2 * n;
    outcome(
        qualitative && h_cyl < TOL_HAUSDORFF,
        format!(
            "pointwise {pointwise:.1e}, Q(theta/2) {zero_at_half:.1e}, peak {peak:.1e} (< {TOL_FIGURE_POINTWISE:e}); square vs theta=0.05 Hausdorff {h_cyl:.3e} cylinder, {h_sph:.3e} sphere (< {TOL_HAUSDORFF:e})"
        ),
    )
}

fn snf_postconditions(a: &IntMatrix) -> bool {
    let s = smith_normal_form(a);
    if s.u.mul(a).mul(&s.v) != s.d || s.u.mul(&s.u_inv) != IntMatrix::identity(a.rows()) {
        return false;
    }
    let unimodular = |m: &IntMatrix| m.det().abs() == BigInt::from(1);
    if !unimodular(&s.u) || !unimodular(&s.v) {
        return false;
    }
    let diag = s.diagonal();
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j && !s.d.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let nonzero = diag.iter().take_while(|x| !x.is_zero()).count();
    diag.iter().all(|x| !x.is_negative())
        && nonzero == s.rank
        && diag[nonzero..].iter().all(Zero::is_zero)
        && diag.windows(2).take(nonzero.saturating_sub(1)).all(|w| (&w[1] % &w[0]).is_zero())
}

fn c11_algebra() -> Outcome {
    let mut r = rng(11);
    let mut snf_bad = 0;
    for _ in 0..1000 {
        let (m, n) = (r.random_range(1..=8), r.random_range(1..=8));
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| r.random_range(-20..=20)).collect()).collect();
        if !snf_postconditions(&IntMatrix::from_rows(&rows, n)) {
            snf_bad += 1;
        }
    }
    let mut sums_bad = Vec::new();
    let mut beta_bad = Vec::new();
    for name in scenario::bundled_names() {
        let Ok(rep) = scenario::solve_bundled(name) else {
            sums_bad.push(name);
            continue;
        };
        if let Some(f2) = &rep.f2 {
            if commvar::homalg::mv::alternating_sum(&f2.sequence) != 0 {
                sums_bad.push(name);
            }
        }
        if rep.checks.beta_squared == Some(false) {
            beta_bad.push(name);
        }
    }
    outcome(
        snf_bad == 0 && sums_bad.is_empty() && beta_bad.is_empty(),
        format!("SNF failures {snf_bad}/1000; nonzero alternating sums {sums_bad:?}; beta^2 != 0 {beta_bad:?}"),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("level-set construction", c1_level_set),
        ("round trip", c2_round_trip),
        ("T-equivariance", c3_equivariance),
        ("canonical relation and Q formula", c4_canonical_and_q),
        ("retractions", c5_retractions),
        ("gradient analytics", c6_gradient),
        ("flow convergence", c7_flow),
        ("cohomology tables", c8_tables),
        ("ring checks", c9_ring),
        ("figures", c10_figures),
        ("exactness and algebra", c11_algebra),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
