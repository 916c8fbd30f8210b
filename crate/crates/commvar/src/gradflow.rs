//! The trace functional f = 2 Re ν on SU(2)², its differential and gradient
//! for the bi-invariant form B(u, v) = −2 Re(uv), and a monotone gradient flow.

use serde::{Deserialize, Serialize};

use crate::quat::{adjoint, commutator, exp, GroupElement, LieVector};

/// Left-translated tangent vector (u, v) at (g, h): the curve (g e^{εu}, h e^{εv}).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TangentPair {
    pub u: LieVector,
    pub v: LieVector,
}

impl TangentPair {
    pub fn new(u: LieVector, v: LieVector) -> Self {
        TangentPair { u, v }
    }

    /// The k-th vector of the basis {i, j, k} × {0} ∪ {0} × {i, j, k}.
    pub fn basis(k: usize) -> Self {
        if k < 3 {
            TangentPair::new(LieVector::basis(k), LieVector::default())
        } else {
            TangentPair::new(LieVector::default(), LieVector::basis(k - 3))
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        TangentPair::new(self.u.scale(s), self.v.scale(s))
    }

    pub fn add(&self, o: &TangentPair) -> Self {
        TangentPair::new(self.u + o.u, self.v + o.v)
    }

    pub fn norm(&self) -> f64 {
        (self.u.dot(&self.u) + self.v.dot(&self.v)).sqrt()
    }

    /// B on 𝔤², i.e. 2 × the Euclidean dot product.
    pub fn b_form(&self, o: &TangentPair) -> f64 {
        2.0 * (self.u.dot(&o.u) + self.v.dot(&o.v))
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.u.x, self.u.y, self.u.z, self.v.x, self.v.y, self.v.z]
    }
}

pub fn f_value(g: GroupElement, h: GroupElement) -> f64 {
    2.0 * commutator(g, h).re()
}

/// (u^{h⁻¹} − u + v − v^{g⁻¹})^{hg}, i.e. ν⁻¹ dν.
pub fn dnu(g: GroupElement, h: GroupElement, tp: &TangentPair) -> LieVector {
    let inner = adjoint(h.inv(), tp.u) - tp.u + tp.v - adjoint(g.inv(), tp.v);
    adjoint(h * g, inner)
}

/// df(u, v) = tr(ν dν) = 2 Re(ν · ν⁻¹dν).
pub fn df(g: GroupElement, h: GroupElement, tp: &TangentPair) -> f64 {
    let nu = commutator(g, h).q();
    2.0 * (nu * dnu(g, h, tp).quat()).re
}

/// ∇f with B(∇f, ·) = df, expanded in the B-orthonormal basis {i, j, k}/√2.
pub fn grad_f(g: GroupElement, h: GroupElement) -> TangentPair {
    let mut c = [0.0; 6];
    for (k, ck) in c.iter_mut().enumerate() {
        *ck = df(g, h, &TangentPair::basis(k)) / 2.0;
    }
    TangentPair::new(LieVector::new(c[0], c[1], c[2]), LieVector::new(c[3], c[4], c[5]))
}

/// Rank of the linear map 𝔤² → 𝔤, tp ↦ dν(tp), by singular values.
pub fn dnu_rank(g: GroupElement, h: GroupElement, tol: f64) -> usize {
    let mut m = nalgebra::Matrix3x6::<f64>::zeros();
    for k in 0..6 {
        let col = dnu(g, h, &TangentPair::basis(k)).to_array();
        for r in 0..3 {
            m[(r, k)] = col[r];
        }
    }
    m.singular_values().iter().filter(|&&s| s > tol).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascend,
    Descend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Euler,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub step: f64,
    pub max_steps: usize,
    pub grad_tol: f64,
    pub f_tol: f64,
    pub direction: Direction,
    pub integrator: Integrator,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            step: 0.02,
            max_steps: 50_000,
            grad_tol: 1e-8,
            f_tol: 1e-8,
            direction: Direction::Ascend,
            integrator: Integrator::Euler,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    GradTol,
    FTol,
    MaxSteps,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub g: GroupElement,
    pub h: GroupElement,
    pub f: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub states: Vec<FlowState>,
    pub terminated_by: Termination,
}

impl FlowTrace {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("a trace holds at least its start")
    }

    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    /// Largest decrease of f between accepted states (ascending traces).
    pub fn worst_monotonicity_violation(&self, direction: Direction) -> f64 {
        self.states
            .windows(2)
            .map(|w| match direction {
                Direction::Ascend => w[0].f - w[1].f,
                Direction::Descend => w[1].f - w[0].f,
            })
            .fold(0.0, f64::max)
    }
}

fn advance(g: GroupElement, h: GroupElement, d: &TangentPair, dt: f64) -> (GroupElement, GroupElement) {
    (g * exp(d.u.scale(dt)), h * exp(d.v.scale(dt)))
}

fn direction_field(g: GroupElement, h: GroupElement, sign: f64) -> TangentPair {
    grad_f(g, h).scale(sign)
}

fn rk4_increment(g: GroupElement, h: GroupElement, sign: f64, dt: f64) -> TangentPair {
    let k1 = direction_field(g, h, sign);
    let (g2, h2) = advance(g, h, &k1, dt / 2.0);
    let k2 = direction_field(g2, h2, sign);
    let (g3, h3) = advance(g, h, &k2, dt / 2.0);
    let k3 = direction_field(g3, h3, sign);
    let (g4, h4) = advance(g, h, &k3, dt);
    let k4 = direction_field(g4, h4, sign);
    k1.add(&k2.scale(2.0)).add(&k3.scale(2.0)).add(&k4).scale(1.0 / 6.0)
}

const MONOTONE_SLACK: f64 = 1e-12;
const MIN_STEP: f64 = 1e-14;

/// Explicit exponential-map stepping along ±∇f, halving the step whenever f
/// would move the wrong way and regrowing it afterwards.
pub fn flow(g: GroupElement, h: GroupElement, cfg: &FlowConfig) -> FlowTrace {
    let sign = match cfg.direction {
        Direction::Ascend => 1.0,
        Direction::Descend => -1.0,
    };
    let target = 2.0 * sign;
    let (mut g, mut h) = (g, h);
    let mut f = f_value(g, h);
    let mut grad = grad_f(g, h);
    let mut states = vec![FlowState { g, h, f, grad_norm: grad.norm() }];
    let mut dt = cfg.step;
    for _ in 0..cfg.max_steps {
        if (target - f).abs() < cfg.f_tol {
            return FlowTrace { states, terminated_by: Termination::FTol };
        }
        if grad.norm() < cfg.grad_tol {
            return FlowTrace { states, terminated_by: Termination::GradTol };
        }
        loop {
            let d = match cfg.integrator {
                Integrator::Euler => grad.scale(sign),
                Integrator::Rk4 => rk4_increment(g, h, sign, dt),
            };
            let (g1, h1) = advance(g, h, &d, dt);
            let f1 = f_value(g1, h1);
            if sign * (f1 - f) >= -MONOTONE_SLACK {
                g = g1;
                h = h1;
                f = f1;
                break;
            }
            dt /= 2.0;
            if dt < MIN_STEP {
                return FlowTrace { states, terminated_by: Termination::MaxSteps };
            }
        }
        grad = grad_f(g, h);
        states.push(FlowState { g, h, f, grad_norm: grad.norm() });
        dt = (dt * 2.0).min(cfg.step);
    }
    let terminated_by = if (target - f).abs() < cfg.f_tol {
        Termination::FTol
    } else if grad.norm() < cfg.grad_tol {
        Termination::GradTol
    } else {
        Termination::MaxSteps
    };
    FlowTrace { states, terminated_by }
}
