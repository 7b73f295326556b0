//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page has a single code path.

use kbeq::check::{check_coset_constant, check_kac_bernstein, check_kac_bernstein_self, coset_violations};
use kbeq::decompose::{decompose_hermitian, decompose_positive, decompose_self};
use kbeq::oracle::{builtin_counterexample, builtin_odd_quadratic, enum_sign_solutions, DEFAULT_BUDGET};
use kbeq::{synth_table, FuncTable, GroupSpec, PositiveSolutionForm, Window};
use serde_json::{json, Value as Json};
use wasm_bindgen::prelude::*;

fn error(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn signs(t: &FuncTable) -> Vec<i8> {
    t.values()
        .iter()
        .map(|v| if v.as_sign(0.0) == Some(true) { -1 } else { 1 })
        .collect()
}

/// The sign pair on `(Z/4)²` with its equation check, coset constancy, the
/// pairs of `X^(2)`-equivalent points where `f` differs, its decomposition,
/// and the size of the full census of sign pairs on that group.
#[wasm_bindgen]
pub fn counterexample() -> String {
    let (f, g) = builtin_counterexample();
    let run = || -> Result<Json, String> {
        let check = check_kac_bernstein(&f, &g, 0.0).map_err(|e| e.to_string())?;
        let constant = |t: &FuncTable, m| check_coset_constant(t, m, 0.0).map(|r| r.holds).map_err(|e| e.to_string());
        let form = decompose_hermitian(&f, &g, 0.0).map_err(|e| e.to_string())?;
        let census = enum_sign_solutions(f.group(), 256, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        Ok(json!({
            "size": 4,
            "f": signs(&f),
            "g": signs(&g),
            "check": check,
            "f_constant_on_4x_cosets": constant(&f, 4)?,
            "f_constant_on_2x_cosets": constant(&f, 2)?,
            "f_2x_violations": coset_violations(&f, 2, 0.0),
            "form": form,
            "census_count": census.count(),
        }))
    };
    run().map(|v| v.to_string()).unwrap_or_else(error)
}

/// Tabulates a positive form given as JSON on its group's radius-`radius`
/// box, checks the equation and decomposes the tables back. On groups with
/// two free coordinates the first two coordinates index the heatmap.
#[wasm_bindgen]
pub fn positive_form(form_json: &str, radius: u32) -> String {
    let run = || -> Result<Json, String> {
        let form: PositiveSolutionForm = serde_json::from_str(form_json).map_err(|e| e.to_string())?;
        form.validate().map_err(|e| e.to_string())?;
        let window = Window::standard(form.group.clone(), radius).map_err(|e| e.to_string())?;
        let (f, g) = synth_table(&form, &window).map_err(|e| e.to_string())?;
        let logs = |t: &FuncTable| -> Vec<f64> {
            t.values()
                .iter()
                .map(|v| v.log_modulus().map_or(f64::NAN, |r| r.to_f64()))
                .collect()
        };
        let check = check_kac_bernstein(&f, &g, 0.0).map_err(|e| e.to_string())?;
        let recovered = match decompose_positive(&f, &g, 0.0) {
            Ok(back) => json!({ "form": back, "matches": back == form }),
            Err(e) => e.to_json(),
        };
        Ok(json!({
            "points": window.points().collect::<Vec<_>>(),
            "log_f": logs(&f),
            "log_g": logs(&g),
            "check": check,
            "recovered": recovered,
        }))
    };
    run().map(|v| v.to_string()).unwrap_or_else(error)
}

/// `(-1)^{mn}` on the radius-`radius` box of `Z²` with its self-check and
/// single-function decomposition.
#[wasm_bindgen]
pub fn odd_quadratic(radius: u32) -> String {
    let run = || -> Result<Json, String> {
        let f = builtin_odd_quadratic(radius).map_err(|e| e.to_string())?;
        let check = check_kac_bernstein_self(&f, 0.0);
        let decomposition = match decompose_self(&f, 0.0) {
            Ok(d) => serde_json::to_value(d).map_err(|e| e.to_string())?,
            Err(e) => e.to_json(),
        };
        Ok(json!({
            "size": 2 * radius + 1,
            "f": signs(&f),
            "check": check,
            "decomposition": decomposition,
        }))
    };
    run().map(|v| v.to_string()).unwrap_or_else(error)
}

/// Parses a group description, returning its normal form or an error.
#[wasm_bindgen]
pub fn parse_group(text: &str) -> String {
    match text.parse::<GroupSpec>() {
        Ok(g) => json!({ "group": g.to_string(), "rank": g.rank(), "torsion": g.torsion() }).to_string(),
        Err(e) => error(e),
    }
}
