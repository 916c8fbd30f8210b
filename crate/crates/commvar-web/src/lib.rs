//! Browser bindings for the demo page in `www/`.

use commvar::geom::{level_residual, ExtendedP};
use commvar::gradflow::{flow, Direction, FlowConfig};
use commvar::homeo::{phi_fwd, phi_inv};
use commvar::quat::{haar_sample, projectivize, GroupElement, Quaternion};
use commvar::waves::{sample_curve, WaveId};
use wasm_bindgen::prelude::*;

/// Flat [φ₀, Q₀, φ₁, Q₁, …] for the wave (θ, P); P accepts "0+" and "0-".
pub fn wave_points(theta: f64, p: &str, n: usize) -> Result<Vec<f64>, String> {
    let p: ExtendedP = p.parse().map_err(|e: commvar::Error| e.to_string())?;
    let w = WaveId::new(theta, p).map_err(|e| e.to_string())?;
    let pts = sample_curve(&w, n.clamp(8, 20_000)).map_err(|e| e.to_string())?;
    Ok(pts.iter().flat_map(|c| [c.phi, c.q]).collect())
}

/// [g (4), h (4), level residual, round-trip distance] for the class of (re, x, y, z).
pub fn phi_inv_report(theta: f64, re: f64, x: f64, y: f64, z: f64) -> Result<Vec<f64>, String> {
    let q = Quaternion::new(re, x, y, z);
    if q.norm() < 1e-12 {
        return Err("the point must be nonzero".into());
    }
    let p = projectivize(GroupElement::new(q));
    let (g, h) = phi_inv(theta, &p).map_err(|e| e.to_string())?;
    let back = phi_fwd(theta, g, h).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(10);
    out.extend(g.q().to_array());
    out.extend(h.q().to_array());
    out.push(level_residual(theta, g, h));
    out.push(back.dist(&p));
    Ok(out)
}

/// Values of f along the flow from the Haar pair drawn from `seed`.
pub fn flow_values(seed: u32, descend: bool, step: f64) -> Vec<f64> {
    let cfg = FlowConfig {
        step: if step > 0.0 { step.min(0.5) } else { 0.02 },
        max_steps: 20_000,
        direction: if descend { Direction::Descend } else { Direction::Ascend },
        ..FlowConfig::default()
    };
    let s = 2 * seed as u64;
    flow(haar_sample(s), haar_sample(s + 1), &cfg).states.iter().map(|st| st.f).collect()
}

#[wasm_bindgen]
pub fn waves(theta: f64, p: &str, n: usize) -> Result<Vec<f64>, JsValue> {
    wave_points(theta, p, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn phi_inv_point(theta: f64, re: f64, x: f64, y: f64, z: f64) -> Result<Vec<f64>, JsValue> {
    phi_inv_report(theta, re, x, y, z).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn flow_trace(seed: u32, descend: bool, step: f64) -> Vec<f64> {
    flow_values(seed, descend, step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wave_points_interleave() {
        let v = wave_points(1.2, "0.7", 16).unwrap();
        assert_eq!(v.len(), 32);
        assert!(wave_points(1.2, "2", 16).is_err());
        assert_eq!(wave_points(std::f64::consts::PI, "0+", 8).unwrap().len(), 16);
    }

    #[test]
    fn phi_inv_report_is_on_level() {
        let r = phi_inv_report(1.0, 0.1, 0.2, 0.3, 0.4).unwrap();
        assert!(r[8] < 1e-12 && r[9] < 1e-9);
        assert!(phi_inv_report(1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn flow_values_climb_to_two() {
        let f = flow_values(3, false, 0.02);
        assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!((f.last().unwrap() - 2.0).abs() < 1e-6);
    }
}
