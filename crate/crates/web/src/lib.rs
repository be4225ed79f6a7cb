//! wasm-bindgen bindings for the static page in `www/`. Each export takes
//! plain strings and numbers and returns a JSON string.

use std::sync::Arc;

use serde_json::json;
use superext::algebra::make_semidirect;
use superext::extring::ext_dims;
use superext::gf::{fp_linear_independent, Fe, GaloisField};
use superext::resolution::minimal_resolution;
use superext::sympow::SymPowers;
use wasm_bindgen::prelude::*;

/// Keeps a click from freezing the tab.
pub const MAX_DEGREE: usize = 40;

fn params(field: &str, s: usize, mus: &str) -> Result<(Arc<GaloisField>, Vec<Fe>), String> {
    let k = GaloisField::from_spec(field).map_err(|e| e.to_string())?;
    let mus: Vec<Fe> = mus
        .split(',')
        .filter(|m| !m.trim().is_empty())
        .map(|m| k.parse_element(m))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if mus.len() != s {
        return Err(format!("expected {s} parameters, got {}", mus.len()));
    }
    if !fp_linear_independent(&k, &mus) {
        return Err("parameters are linearly dependent over the prime field".into());
    }
    Ok((k, mus))
}

fn bounded(maxdeg: usize) -> Result<usize, String> {
    if maxdeg > MAX_DEGREE {
        return Err(format!("degree {maxdeg} above the demo limit {MAX_DEGREE}"));
    }
    Ok(maxdeg)
}

pub fn poincare_series_json(field: &str, r: usize, s: usize, mus: &str, maxdeg: usize) -> Result<String, String> {
    let (k, mus) = params(field, s, mus)?;
    let alg = make_semidirect(&k, r, s, &mus).map_err(|e| e.to_string())?;
    let res = minimal_resolution(&alg, bounded(maxdeg)?).map_err(|e| e.to_string())?;
    let dims = ext_dims(&res);
    let poincare: Vec<usize> = dims.iter().map(|d| d[0] + d[1]).collect();
    Ok(json!({ "descriptor": alg.descriptor().canonical(), "dims": dims, "poincare": poincare }).to_string())
}

pub fn invariant_dims_json(field: &str, r: usize, s: usize, mus: &str, maxdeg: usize) -> Result<String, String> {
    let (k, mus) = params(field, s, mus)?;
    let fam = SymPowers::over(&k, r, s, &mus).map_err(|e| e.to_string())?;
    let q = fam.period();
    let n_max = bounded(maxdeg)?;
    let dims: Vec<usize> = (0..=n_max).map(|n| fam.invariants(n).len()).collect();
    let predicted: Vec<usize> = (0..=n_max).map(|n| n / q + 1).collect();
    Ok(json!({ "dims": dims, "predicted": predicted }).to_string())
}

pub fn rank_variety_json(field: &str, r: usize, s: usize, mus: &str, i: usize, sample: &str) -> Result<String, String> {
    let (k, mus) = params(field, s, mus)?;
    let fam = SymPowers::over(&k, r, s, &mus).map_err(|e| e.to_string())?;
    let target = GaloisField::from_spec(sample).map_err(|e| e.to_string())?;
    let fam = if target.as_ref() == k.as_ref() { fam } else { fam.base_change(&target).map_err(|e| e.to_string())? };
    let scan = fam.rank_variety_scan(i).map_err(|e| e.to_string())?;
    let kf = fam.field();
    let non_free: Vec<Vec<String>> = scan
        .points
        .iter()
        .filter(|p| !p.1)
        .map(|p| p.0.iter().map(|c| kf.format(kf.from_coeffs(c))).collect())
        .collect();
    Ok(json!({
        "points": scan.points.len(),
        "non_free": non_free,
        "predicted_non_free": scan.predicted_nonfree,
        "agree": scan.agree,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn poincare_series(field: &str, r: usize, s: usize, mus: &str, maxdeg: usize) -> Result<String, JsValue> {
    poincare_series_json(field, r, s, mus, maxdeg).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn invariant_dims(field: &str, r: usize, s: usize, mus: &str, maxdeg: usize) -> Result<String, JsValue> {
    invariant_dims_json(field, r, s, mus, maxdeg).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn rank_variety(field: &str, r: usize, s: usize, mus: &str, i: usize, sample: &str) -> Result<String, JsValue> {
    rank_variety_json(field, r, s, mus, i, sample).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn exports_return_json() {
        let v: Value = serde_json::from_str(&poincare_series_json("3", 1, 0, "", 5).unwrap()).unwrap();
        assert_eq!(v["poincare"], json!([1, 2, 3, 4, 5, 6]));
        let v: Value = serde_json::from_str(&invariant_dims_json("3", 1, 0, "", 6).unwrap()).unwrap();
        assert_eq!(v["dims"], v["predicted"]);
        let v: Value = serde_json::from_str(&rank_variety_json("3", 1, 1, "1", 1, "3").unwrap()).unwrap();
        assert_eq!(v["non_free"], json!([["1", "1"], ["2", "2"]]));
    }

    #[test]
    fn bad_input_is_an_error() {
        assert!(poincare_series_json("3", 0, 2, "1,2", 4).is_err());
        assert!(poincare_series_json("3", 1, 0, "", 400).is_err());
        assert!(rank_variety_json("3^2", 0, 2, "1,w", 1, "3").is_err());
    }
}
