//! `commvar` command line. Exit codes: 0 ok, 1 verification failure,
//! 2 usage or I/O error.

use std::ffi::OsString;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::geom::{level_residual, ExtendedP};
use crate::gradflow::{flow, Direction, FlowConfig, Integrator, Termination};
use crate::homalg::scenario::{self, ScenarioReport};
use crate::homeo::{phi_fwd, phi_inv};
use crate::quat::{commutator, haar_sample_with, projectivize, GroupElement, Quaternion};
use crate::verify::{run, Suite, SuiteReport, VerifyConfig};
use crate::waves::{sample_curve, WaveId};

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "commvar", version, about = "Commutator level sets in SU(2)^2: waves, homeomorphisms, flows, cohomology")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Overrides the default tolerance of the chosen check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Sample waves Q(phi) on the cylinder (CSV: theta,P,phi,Q).
    Waves(WavesArgs),
    /// Run invariant suites; exits 1 when any invariant exceeds its tolerance.
    Verify(VerifyArgs),
    /// Gradient flow of f = 2 Re[g,h] from Haar-random starts.
    Flow(FlowArgs),
    /// Level residual and round-trip statistics of the inverse homeomorphism.
    Homeo(HomeoArgs),
    /// Retraction and transition-map statistics.
    Retract(RetractArgs),
    /// Solve a cohomology scenario given by file path or bundled name.
    Cohomology(CohomologyArgs),
}

#[derive(Debug, Args)]
struct WavesArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    theta: Vec<f64>,
    /// Values in [-1, 1] or the formal limits 0+ and 0-.
    #[arg(long = "p", value_delimiter = ',', allow_hyphen_values = true)]
    p: Vec<String>,
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Preset parameter sets: 1 = theta 1.2, 0.5, 0 at P = 1/sqrt 2; 2 = theta pi at P 0.99, 0.5, -0.5, 0+.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with_all = ["theta", "p"])]
    figure: Option<u8>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Quat,
    Geom,
    Homeo,
    Retract,
    Flow,
    Homalg,
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[arg(long, default_value_t = 200)]
    seeds: usize,
    #[arg(long)]
    descend: bool,
    #[arg(long)]
    rk4: bool,
    #[arg(long, default_value_t = 0.02)]
    step: f64,
    #[arg(long, default_value_t = 50_000)]
    max_steps: usize,
}

#[derive(Debug, Args)]
struct HomeoArgs {
    #[arg(long, default_value_t = PI / 2.0)]
    theta: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// A single point of RP^3 as four quaternion coordinates re,x,y,z.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    point: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct RetractArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Debug, Args)]
struct CohomologyArgs {
    /// Scenario file or bundled name (e.g. atiyah_A).
    #[arg(required_unless_present = "all")]
    scenario: Option<String>,
    #[arg(long, conflicts_with = "scenario")]
    all: bool,
}

struct Failure(i32, String);

type CmdResult = std::result::Result<(String, bool), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Some(t) = cli.tol {
        if t.is_nan() || t <= 0.0 {
            eprintln!("error: --tol must be positive");
            return EXIT_USAGE;
        }
    }
    let result = match &cli.cmd {
        Cmd::Waves(a) => cmd_waves(&cli, a),
        Cmd::Verify(a) => cmd_verify(&cli, a),
        Cmd::Flow(a) => cmd_flow(&cli, a),
        Cmd::Homeo(a) => cmd_homeo(&cli, a),
        Cmd::Retract(a) => cmd_retract(&cli, a),
        Cmd::Cohomology(a) => cmd_cohomology(&cli, a),
    };
    match result {
        Ok((text, ok)) => {
            if let Err(e) = emit(cli.out.as_ref(), &text) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_waves(cli: &Cli, a: &WavesArgs) -> CmdResult {
    let (thetas, ps): (Vec<f64>, Vec<ExtendedP>) = match a.figure {
        Some(1) => (vec![1.2, 0.5, 0.0], vec![ExtendedP::NonZero(FRAC_1_SQRT_2)]),
        Some(_) => (
            vec![PI],
            vec![ExtendedP::NonZero(0.99), ExtendedP::NonZero(0.5), ExtendedP::NonZero(-0.5), ExtendedP::ZeroPlus],
        ),
        None => {
            let ps = a
                .p
                .iter()
                .map(|s| s.parse::<ExtendedP>().map_err(|e| usage(e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            (a.theta.clone(), ps)
        }
    };
    if thetas.is_empty() || ps.is_empty() {
        return Err(usage("waves needs --theta and --p, or --figure"));
    }
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let mut curves = Vec::new();
    for &theta in &thetas {
        for &p in &ps {
            let w = WaveId::new(theta, p).map_err(|e| usage(format!("theta = {theta}, P = {p}: {e}")))?;
            let pts = sample_curve(&w, a.samples).map_err(|e| usage(e.to_string()))?;
            curves.push((theta, p, pts));
        }
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("theta,P,phi,Q\n");
            for (theta, p, pts) in &curves {
                for c in pts {
                    let _ = writeln!(s, "{theta},{p},{},{}", c.phi, c.q);
                }
            }
            s
        }
        Format::Json => to_json(
            &curves
                .iter()
                .map(|(theta, p, pts)| {
                    json!({
                        "theta": theta,
                        "P": p.to_string(),
                        "points": pts.iter().map(|c| [c.phi, c.q]).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok((text, true))
}

fn suites_csv(reports: &[SuiteReport]) -> String {
    let mut s = String::from("suite,invariant,samples,max_defect,tolerance,pass\n");
    for r in reports {
        for i in &r.invariants {
            let _ = writeln!(s, "{},{},{},{:e},{:e},{}", r.suite.name(), i.name, i.samples, i.max_defect, i.tolerance, i.pass);
        }
    }
    s
}

fn suites_output(cli: &Cli, reports: &[SuiteReport]) -> (String, bool) {
    let pass = reports.iter().all(SuiteReport::pass);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => suites_csv(reports),
        Format::Json => to_json(&json!({ "seed": cli.seed, "tol": cli.tol, "pass": pass, "suites": reports })),
    };
    (text, pass)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let suites: Vec<Suite> = match a.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Quat => vec![Suite::Quat],
        SuiteArg::Geom => vec![Suite::Geom],
        SuiteArg::Homeo => vec![Suite::Homeo],
        SuiteArg::Retract => vec![Suite::Retract],
        SuiteArg::Flow => vec![Suite::Flow],
        SuiteArg::Homalg => vec![Suite::Homalg],
    };
    let cfg = VerifyConfig { seed: cli.seed, tol: cli.tol, samples: a.samples };
    Ok(suites_output(cli, &run(&suites, &cfg)))
}

#[derive(Serialize)]
struct FlowRun {
    start: usize,
    terminated_by: Termination,
    steps: usize,
    f_final: f64,
    monotonicity_violation: f64,
    endpoint_commutator: f64,
}

fn cmd_flow(cli: &Cli, a: &FlowArgs) -> CmdResult {
    if a.seeds == 0 || a.step.is_nan() || a.step <= 0.0 {
        return Err(usage("--seeds and --step must be positive"));
    }
    let direction = if a.descend { Direction::Descend } else { Direction::Ascend };
    let cfg = FlowConfig {
        step: a.step,
        max_steps: a.max_steps,
        f_tol: cli.tol.unwrap_or(1e-8),
        direction,
        integrator: if a.rk4 { Integrator::Rk4 } else { Integrator::Euler },
        ..FlowConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let runs: Vec<FlowRun> = (0..a.seeds)
        .map(|start| {
            let trace = flow(haar_sample_with(&mut rng), haar_sample_with(&mut rng), &cfg);
            let last = trace.last();
            FlowRun {
                start,
                terminated_by: trace.terminated_by,
                steps: trace.steps(),
                f_final: last.f,
                monotonicity_violation: trace.worst_monotonicity_violation(direction).max(0.0),
                endpoint_commutator: commutator(last.g, last.h).dist(&GroupElement::IDENTITY),
            }
        })
        .collect();
    let converged: Vec<&FlowRun> = runs.iter().filter(|r| r.terminated_by == Termination::FTol).collect();
    let fraction = converged.len() as f64 / runs.len() as f64;
    let monotone = runs.iter().all(|r| r.monotonicity_violation <= 1e-12);
    let endpoint = converged.iter().map(|r| r.endpoint_commutator).fold(0.0, f64::max);
    let endpoint_ok = a.descend || endpoint <= 1e-4;
    let pass = fraction >= 0.99 && monotone && endpoint_ok;
    let line = format!(
        "converged {}/{} ({:.1}%) to |f {} 2| < {:e}",
        converged.len(),
        runs.len(),
        100.0 * fraction,
        if a.descend { "+" } else { "-" },
        cfg.f_tol
    );
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("start,terminated_by,steps,f_final,monotonicity_violation,endpoint_commutator\n");
            for r in &runs {
                let _ = writeln!(
                    s,
                    "{},{:?},{},{},{:e},{:e}",
                    r.start, r.terminated_by, r.steps, r.f_final, r.monotonicity_violation, r.endpoint_commutator
                );
            }
            s
        }
        Format::Json => to_json(&json!({
            "seed": cli.seed,
            "direction": direction,
            "integrator": if a.rk4 { "rk4" } else { "euler" },
            "starts": runs.len(),
            "converged": converged.len(),
            "convergence_fraction": fraction,
            "monotone": monotone,
            "max_endpoint_commutator": endpoint,
            "mean_steps": runs.iter().map(|r| r.steps as f64).sum::<f64>() / runs.len() as f64,
            "line": line,
            "pass": pass,
            "runs": runs,
        })),
    };
    Ok((text, pass))
}

fn cmd_homeo(cli: &Cli, a: &HomeoArgs) -> CmdResult {
    if !(a.theta > 0.0 && a.theta <= PI) {
        return Err(usage("--theta must lie in (0, pi]"));
    }
    let tol = cli.tol.unwrap_or(1e-6);
    let points = match &a.point {
        Some(c) => {
            if c.len() != 4 {
                return Err(usage("--point takes exactly four coordinates"));
            }
            let q = Quaternion::new(c[0], c[1], c[2], c[3]);
            if q.norm() < 1e-12 {
                return Err(usage("--point must be nonzero"));
            }
            vec![projectivize(GroupElement::new(q))]
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            (0..a.samples).map(|_| projectivize(haar_sample_with(&mut rng))).collect()
        }
    };
    let mut rows = Vec::new();
    let mut worst_level: f64 = 0.0;
    let mut worst_round: f64 = 0.0;
    let mut errors = 0usize;
    for p in &points {
        match phi_inv(a.theta, p).and_then(|(g, h)| Ok((g, h, phi_fwd(a.theta, g, h)?))) {
            Ok((g, h, back)) => {
                let level = level_residual(a.theta, g, h);
                let round = back.dist(p);
                worst_level = worst_level.max(level);
                worst_round = worst_round.max(round);
                rows.push(json!({
                    "point": p.rep().q().to_array(),
                    "g": g.q().to_array(),
                    "h": h.q().to_array(),
                    "level_residual": level,
                    "round_trip": round,
                }));
            }
            Err(e) => {
                errors += 1;
                rows.push(json!({ "point": p.rep().q().to_array(), "error": e.to_string() }));
            }
        }
    }
    let pass = errors == 0 && worst_level <= tol && worst_round <= tol;
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("theta,samples,errors,max_level_residual,max_round_trip,tolerance,pass\n");
            let _ = writeln!(s, "{},{},{errors},{worst_level:e},{worst_round:e},{tol:e},{pass}", a.theta, points.len());
            s
        }
        Format::Json => {
            let mut v = json!({
                "seed": cli.seed,
                "theta": a.theta,
                "samples": points.len(),
                "errors": errors,
                "max_level_residual": worst_level,
                "max_round_trip": worst_round,
                "tolerance": tol,
                "pass": pass,
            });
            if a.point.is_some() {
                v["result"] = rows.pop().unwrap_or_default();
            }
            to_json(&v)
        }
    };
    Ok((text, pass))
}

fn cmd_retract(cli: &Cli, a: &RetractArgs) -> CmdResult {
    let cfg = VerifyConfig { seed: cli.seed, tol: cli.tol, samples: a.samples };
    Ok(suites_output(cli, &run(&[Suite::Retract], &cfg)))
}

fn cmd_cohomology(cli: &Cli, a: &CohomologyArgs) -> CmdResult {
    let names: Vec<String> = if a.all {
        scenario::bundled_names().into_iter().map(String::from).collect()
    } else {
        a.scenario.iter().cloned().collect()
    };
    let mut reports: Vec<ScenarioReport> = Vec::new();
    for n in &names {
        let sc = scenario::load(n).map_err(|e| usage(e.to_string()))?;
        let r = scenario::solve(&sc).map_err(|e| Failure(EXIT_FAIL, format!("{n}: {e}")))?;
        reports.push(r);
    }
    let pass = reports.iter().all(ScenarioReport::passed);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = String::from("scenario,degree,group\n");
            for r in &reports {
                for (q, g) in r.table.iter().enumerate() {
                    let _ = writeln!(s, "{},{q},{g}", r.scenario);
                }
            }
            s
        }
        Format::Json if a.all => to_json(&reports),
        Format::Json => to_json(&reports[0]),
    };
    Ok((text, pass))
}
