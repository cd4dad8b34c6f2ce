//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function returns a JSON string that the page parses. The
//! `*_json` functions hold the logic and are plain Rust so they can be
//! tested off-wasm; the `#[wasm_bindgen]` wrappers only convert errors.

use leggett_core::canonical::CanonicalState;
use leggett_core::hvt::{hvt_sweep, malus_product_model};
use leggett_core::inequality::{leggett_check, quantum_sweep_with_offset, AverageTriple};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request.
pub const MAX_GRID: usize = 4096;
/// Largest per-point sample count for the Monte Carlo panel.
pub const MAX_SAMPLES: u32 = 1_000_000;

#[derive(Debug, Serialize)]
struct SweepPoint {
    delta: f64,
    av_a: f64,
    av_b: f64,
    paper: f64,
    oracle: f64,
    lower: f64,
    upper: f64,
    satisfied: bool,
}

#[derive(Debug, Serialize)]
struct MalusPoint {
    delta: f64,
    av_a: f64,
    av_b: f64,
    av_ab: f64,
    stderr_ab: f64,
    exact_ab: f64,
    lower: f64,
    upper: f64,
    satisfied: bool,
}

fn check_grid(grid: usize) -> Result<(), String> {
    if grid > MAX_GRID {
        return Err(format!("grid is limited to {MAX_GRID} points"));
    }
    Ok(())
}

/// Correlation sweep of a canonical state: closed form, full trace and bounds.
pub fn sweep_json(state: &str, grid: usize, offset_deg: f64) -> Result<String, String> {
    check_grid(grid)?;
    let state: CanonicalState = state
        .parse()
        .map_err(|e: leggett_core::Error| e.to_string())?;
    let rows = quantum_sweep_with_offset(state, grid, offset_deg.to_radians())
        .map_err(|e| e.to_string())?;
    let points: Vec<SweepPoint> = rows
        .iter()
        .map(|r| SweepPoint {
            delta: r.delta,
            av_a: r.av_a,
            av_b: r.av_b,
            paper: r.av_ab_paper,
            oracle: r.av_ab_oracle,
            lower: r.report_paper.lower,
            upper: r.report_paper.upper,
            satisfied: r.satisfied(),
        })
        .collect();
    serde_json::to_string(&points).map_err(|e| e.to_string())
}

/// Leggett check of a hand-entered triple.
pub fn check_json(av_a: f64, av_b: f64, av_ab: f64, tolerance: f64) -> Result<String, String> {
    let triple = AverageTriple::new(av_a, av_b, av_ab).map_err(|e| e.to_string())?;
    let report = leggett_check(&triple, tolerance).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Monte Carlo sweep of the Malus product model; angles in degrees.
pub fn malus_json(
    u_deg: f64,
    v_deg: f64,
    offset_deg: f64,
    grid: usize,
    samples: u32,
    seed: u32,
) -> Result<String, String> {
    check_grid(grid)?;
    if samples > MAX_SAMPLES {
        return Err(format!("samples are limited to {MAX_SAMPLES}"));
    }
    let model = malus_product_model(u_deg.to_radians(), v_deg.to_radians());
    let rows = hvt_sweep(
        &model,
        grid,
        offset_deg.to_radians(),
        samples.into(),
        seed.into(),
    )
    .map_err(|e| e.to_string())?;
    let points: Vec<MalusPoint> = rows
        .iter()
        .map(|r| MalusPoint {
            delta: r.delta,
            av_a: r.estimate.triple.av_a,
            av_b: r.estimate.triple.av_b,
            av_ab: r.estimate.triple.av_ab,
            stderr_ab: r.estimate.stderr_ab,
            exact_ab: r.exact.map_or(f64::NAN, |t| t.av_ab),
            lower: r.report.lower,
            upper: r.report.upper,
            satisfied: r.report.satisfied,
        })
        .collect();
    serde_json::to_string(&points).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn sweep(state: &str, grid: usize, offset_deg: f64) -> Result<String, JsValue> {
    sweep_json(state, grid, offset_deg).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn check(av_a: f64, av_b: f64, av_ab: f64, tolerance: f64) -> Result<String, JsValue> {
    check_json(av_a, av_b, av_ab, tolerance).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn malus(
    u_deg: f64,
    v_deg: f64,
    offset_deg: f64,
    grid: usize,
    samples: u32,
    seed: u32,
) -> Result<String, JsValue> {
    malus_json(u_deg, v_deg, offset_deg, grid, samples, seed).map_err(|e| JsValue::from_str(&e))
}
