//! WebAssembly bindings for the browser demo in `www/`.

pub mod api;

use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn beta_predict(seq: &str, bound: u32) -> Result<String, JsValue> {
    to_json(api::beta_predict(seq, u64::from(bound)))
}

#[wasm_bindgen]
pub fn collapse_table(pred: &str, k: u32, measures: &str, upto: u32) -> Result<String, JsValue> {
    to_json(api::collapse_table(
        pred,
        u64::from(k),
        measures,
        u64::from(upto),
    ))
}

#[wasm_bindgen]
pub fn run_machine(
    src: &str,
    input: &str,
    budget: u32,
    max_frames: u32,
) -> Result<String, JsValue> {
    to_json(api::run_machine(
        src,
        input,
        u64::from(budget),
        max_frames as usize,
    ))
}
