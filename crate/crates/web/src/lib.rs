//! Three operations for the static demo page. Each returns a JSON string;
//! the plain functions are what the tests call, the `#[wasm_bindgen]`
//! wrappers only convert errors.

use serde_json::json;
use wasm_bindgen::prelude::*;

use locmod::resolution;
use locmod::schemes::ChainSpec;
use locmod::toric::{self, CharacterData};
use locmod::verification;

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn torus_report(n: u32, r: u32, big_n: usize) -> Result<String, String> {
    let data = CharacterData::new(n, r, big_n).map_err(|e| e.to_string())?;
    let k = toric::kernel_is_torus_check(&data).map_err(|e| e.to_string())?;
    let q = toric::quotient_by_subtorus_check(&data).map_err(|e| e.to_string())?;
    Ok(json!({
        "size_of_S": data.s.len(),
        "chi": strs(&data.chi),
        "kernel_is_torus": k.verdict,
        "coordinates": strs(&k.coords),
        "snf_invariants": strs(&k.snf.invariants),
        "quotient_is_torus": q.verdict,
    })
    .to_string())
}

pub fn fiber_report(g: usize) -> Result<String, String> {
    if !(1..=4).contains(&g) {
        return Err("g must be between 1 and 4".into());
    }
    let rep = resolution::sigma_fiber_freecount(g).map_err(|e| e.to_string())?;
    Ok(json!({
        "g": g,
        "free_count": rep.free_count,
        "expected": g * (3 * g - 1) / 2,
        "free_coordinates": rep.free_coordinates,
        "consumed": resolution::relation_log_table(&rep),
        "consistent": rep.consistent,
    })
    .to_string())
}

pub fn normal_form_report(d: &str, q: u32, seed: u64, trials: usize) -> Result<String, String> {
    let d: Vec<usize> = d
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad step `{s}`")))
        .collect::<Result<_, _>>()?;
    let n = d.iter().sum();
    if n > 4 || trials > 500 {
        return Err("keep n <= 4 and trials <= 500 in the browser".into());
    }
    let spec = ChainSpec::unitary(n, 1, d).map_err(|e| e.to_string())?;
    let rep = verification::normal_form_round_trips(&spec, q, trials, seed).map_err(|e| e.to_string())?;
    Ok(json!({"n": n, "r": 1, "q": q, "seed": seed, "trials": trials, "recovered": rep.successes, "special_fibre": rep.zero_tau}).to_string())
}

#[wasm_bindgen]
pub fn torus_check(n: u32, r: u32, big_n: usize) -> Result<String, JsError> {
    torus_report(n, r, big_n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sigma_fiber(g: usize) -> Result<String, JsError> {
    fiber_report(g).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn chain_normal_form(d: &str, q: u32, seed: u64, trials: usize) -> Result<String, JsError> {
    normal_form_report(d, q, seed, trials).map_err(|e| JsError::new(&e))
}
