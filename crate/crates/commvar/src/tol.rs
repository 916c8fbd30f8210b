use serde::{Deserialize, Serialize};

pub const EPS_ALG: f64 = 1e-12;
pub const EPS_REL: f64 = 1e-9;
pub const EPS_ARC: f64 = 1e-6;
pub const EPS_ON: f64 = 1e-6;

/// Tolerance bundle for callers that want to override the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub alg: f64,
    pub rel: f64,
    pub arc: f64,
    pub on: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { alg: EPS_ALG, rel: EPS_REL, arc: EPS_ARC, on: EPS_ON }
    }
}
