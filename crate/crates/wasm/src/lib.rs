//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns JSON text (or a plain float array) so the page needs
//! no generated type glue beyond `wasm-bindgen`'s own.

use serde_json::json;
use wasm_bindgen::prelude::*;

use evio::metrics::pixel_error;
use evio::postprocess::{adaptive_windows, blink_override, m2f, M2FParams, MotionMethod, DEFAULT_RATIO_THRESHOLD};
use evio::repr::bin_to_frames;
use evio::sim::Scenario;
use evio::track::{build_bias, centroid_track, AttentionConfig};
use evio::Trajectory;

fn pairs(t: &Trajectory) -> Vec<[f64; 2]> {
    t.points.clone()
}

/// Simulates a scenario, tracks it with the centroid baseline and smooths
/// the result with M2F plus the blink override.
pub fn scenario_report(scenario_json: &str, half_life: f64) -> Result<String, String> {
    let sc = Scenario::from_json(scenario_json).map_err(|e| e.to_string())?;
    if half_life.is_nan() || half_life <= 0.0 {
        return Err("half-life must be positive".into());
    }
    let (track, stream) = sc.run().map_err(|e| e.to_string())?;
    let stack = bin_to_frames(&stream, &track);
    let raw = centroid_track(&stack, half_life, 5.0);
    let smooth = m2f(&raw, &M2FParams::default()).map_err(|e| e.to_string())?;
    let post = blink_override(&smooth, &stack, DEFAULT_RATIO_THRESHOLD).map_err(|e| e.to_string())?;
    let err = |t: &Trajectory| pixel_error(t, &track, true).map(|r| r.pixel_error).map_err(|e| e.to_string());
    Ok(json!({
        "width": stream.width(),
        "height": stream.height(),
        "events": stream.len(),
        "labels": track.labels().iter().map(|l| json!([l.x, l.y, l.blink])).collect::<Vec<_>>(),
        "activity": stack.frames.iter().map(|f| [f.pos_total(), f.neg_total()]).collect::<Vec<_>>(),
        "centroid": pairs(&raw),
        "filtered": pairs(&post.trajectory),
        "flagged": post.flagged,
        "error": { "centroid": err(&raw)?, "filtered": err(&post.trajectory)? },
    })
    .to_string())
}

/// Row-major `seq_len x seq_len` total bias of one head.
pub fn head_bias(seq_len: usize, heads: usize, head: usize) -> Result<Vec<f64>, String> {
    let cfg = AttentionConfig::new(seq_len, heads, 1).map_err(|e| e.to_string())?;
    let bias = build_bias(&cfg);
    let b = bias.get(head).ok_or_else(|| format!("head {head} out of range for {heads} heads"))?;
    Ok(b.total.iter().copied().collect())
}

/// M2F on an arbitrary trajectory, with the adaptive windows it chose.
pub fn m2f_report(xs: &[f64], ys: &[f64], w_base: usize, w_min: usize, w_max: usize, percentile: f64, method: &str) -> Result<String, String> {
    if xs.len() != ys.len() {
        return Err(format!("{} x values but {} y values", xs.len(), ys.len()));
    }
    let method: MotionMethod = method.parse().map_err(|e: evio::Error| e.to_string())?;
    let params = M2FParams { w_base, w_min, w_max, percentile, method };
    let traj = Trajectory::new(xs.iter().zip(ys).map(|(&x, &y)| [x, y]).collect(), "input");
    let windows = adaptive_windows(&traj, &params).map_err(|e| e.to_string())?;
    let out = m2f(&traj, &params).map_err(|e| e.to_string())?;
    Ok(json!({ "windows": windows, "xs": out.xs(), "ys": out.ys() }).to_string())
}

#[wasm_bindgen(js_name = runScenario)]
pub fn run_scenario(scenario_json: &str, half_life: f64) -> Result<String, JsError> {
    scenario_report(scenario_json, half_life).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = biasMatrix)]
pub fn bias_matrix(seq_len: usize, heads: usize, head: usize) -> Result<Vec<f64>, JsError> {
    head_bias(seq_len, heads, head).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = m2fExplore)]
pub fn m2f_explore(xs: Vec<f64>, ys: Vec<f64>, w_base: usize, w_min: usize, w_max: usize, percentile: f64, method: &str) -> Result<String, JsError> {
    m2f_report(&xs, &ys, w_base, w_min, w_max, percentile, method).map_err(|e| JsError::new(&e))
}
