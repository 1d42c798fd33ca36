//! Browser bindings for a static demo page: curve analysis, the rate
//! comparison table and the parameter calculators.
//!
//! Each export returns JSON text. The `*_impl` functions hold the logic so
//! they can be tested natively.

use agcodes::constructions::{lomont1_params, lomont2_params};
use agcodes::curve::{analyze_with, PlaneCurve};
use agcodes::rate::{best_pair, format_sig, Family};
use agcodes::FieldSpec;
use num_rational::Ratio;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

pub fn analyze_impl(curve: &str, m: u32) -> Result<Value, String> {
    let c: PlaneCurve = curve.parse().map_err(|e: agcodes::Error| e.to_string())?;
    if m > 8 {
        return Err("the demo analyzes over GF(2^m) with m <= 8".into());
    }
    let f = FieldSpec::cached(m).map_err(|e| e.to_string())?;
    serde_json::to_value(analyze_with(&c, &f, true)).map_err(|e| e.to_string())
}

/// `targets` are whole percentages, e.g. `"10,20,50"`.
pub fn compare_impl(q: u64, aleph: u64, families: &str, targets: &str) -> Result<Value, String> {
    if !(2..=1024).contains(&q) {
        return Err("q must lie in 2..=1024".into());
    }
    let families: Vec<Family> =
        families.split(',').map(|s| s.parse::<Family>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let targets: Vec<u64> = targets
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| format!("bad target '{t}'")))
        .collect::<Result<_, _>>()?;
    if let Some(t) = targets.iter().find(|&&t| t == 0 || t >= 100) {
        return Err(format!("target {t}% is not in 1..=99"));
    }
    if families.iter().any(Family::needs_aleph) && aleph < 3 {
        return Err("elliptic families need aleph >= 3".into());
    }
    let rows: Vec<Value> = targets
        .iter()
        .map(|&t| {
            let cells: Vec<Value> = families
                .iter()
                .map(|&f| match best_pair(f, q, aleph, Ratio::new(t, 100)) {
                    Ok(p) => json!({
                        "family": f.as_str(),
                        "pair": [p.pair.0, p.pair.1],
                        "n": p.n, "k": p.k, "d": p.d,
                        "rate": format_sig(p.rate_f64(), 6),
                        "delta": format_sig(p.delta_f64(), 6),
                    }),
                    Err(_) => json!({ "family": f.as_str() }),
                })
                .collect();
            json!({ "target": t as f64 / 100.0, "cells": cells })
        })
        .collect();
    Ok(json!({ "q": q, "aleph": aleph, "rows": rows }))
}

pub fn params_impl(family: &str, q: u64, aleph: u64, a: u64, b: u64) -> Result<Value, String> {
    let p = match family {
        "lomont1" => lomont1_params(q, a, b, 0),
        "lomont2" => lomont2_params(q, aleph, a, b),
        other => return Err(format!("unknown family '{other}' (lomont1, lomont2)")),
    }
    .map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(p).map_err(|e| e.to_string())?;
    v["display"] = Value::String(p.to_string());
    Ok(v)
}

#[wasm_bindgen]
pub fn analyze_curve(curve: &str, m: u32) -> Result<String, JsValue> {
    to_js(analyze_impl(curve, m))
}

#[wasm_bindgen]
pub fn compare(q: u64, aleph: u64, families: &str, targets: &str) -> Result<String, JsValue> {
    to_js(compare_impl(q, aleph, families, targets))
}

#[wasm_bindgen]
pub fn params(family: &str, q: u64, aleph: u64, a: u64, b: u64) -> Result<String, JsValue> {
    to_js(params_impl(family, q, aleph, a, b))
}
