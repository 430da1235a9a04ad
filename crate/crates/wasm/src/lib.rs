//! Three operations for the browser page in `www/`. Each returns a JSON
//! string; the plain functions are also callable from Rust.

use rand::Rng;
use relpriv::adversary::{posterior_exclusive_worstcase, posterior_independent};
use relpriv::anonymizer::{
    check_privacy_params, plan_parameters, stream_rng, Anonymizer, BetaPolicy, MechanismParams, PrivacyBudget,
    UtilityBudget,
};
use relpriv::estimator::{error_bound, estimate_count, guarantee_radius};
use relpriv::model::{
    eval_query_instance, AttrKind, ConjunctiveQuery, DomainDescriptor, Predicate, Relation, Schema, Value,
};
use serde_json::{json, Value as Json};
use wasm_bindgen::prelude::*;

/// Planned `beta`, expected view size and error radius as `gamma` varies.
pub fn plan_sweep(n: u64, m: u64, k: f64, simple_beta: bool, steps: usize) -> relpriv::Result<Json> {
    let policy = if simple_beta { BetaPolicy::SimpleBeta } else { BetaPolicy::MinimalBeta };
    let mut rows = Vec::new();
    for i in 1..steps {
        let gamma = i as f64 / steps as f64;
        // gammas too small for this k are skipped
        let Ok(plan) = plan_parameters(n, m, k, gamma, policy) else { continue };
        let rho = error_bound(&plan.utility);
        rows.push(json!({
            "gamma": gamma,
            "d": plan.privacy.d(),
            "alpha": plan.params.alpha(),
            "beta": plan.params.beta(),
            "view_size": plan.params.expected_view_size(n, m),
            "r": plan.utility.r(),
            "radius": guarantee_radius(rho, n),
        }));
    }
    if rows.is_empty() {
        return Err(relpriv::Error::InvalidParameter(format!("no gamma in (0, 1) admits k = {k} at n = {n}, m = {m}")));
    }
    Ok(json!({ "n": n, "m": m, "k": k, "rows": rows }))
}

/// Posterior of a tuple against its prior `p`, for a tuple seen in the view,
/// one missing from it, and one in an exclusion set that the view singles out.
pub fn posterior_curves(alpha: f64, beta: f64, d: f64, gamma: f64, steps: usize) -> relpriv::Result<Json> {
    let params = MechanismParams::new(alpha, beta)?;
    let budget = PrivacyBudget::new(d, gamma)?;
    let verdict = check_privacy_params(&params, &budget);
    let mut rows = Vec::new();
    for i in 1..steps {
        let p = i as f64 / steps as f64;
        rows.push(json!({
            "prior": p,
            "present": posterior_independent(p, &params, true)?,
            "absent": posterior_independent(p, &params, false)?,
            "exclusive": posterior_exclusive_worstcase(p, &params).ok(),
        }));
    }
    Ok(json!({
        "passed": verdict.passed(),
        "violations": verdict.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "warnings": verdict.warnings,
        "rows": rows,
    }))
}

/// Releases a random `n`-tuple instance over a `side x side` grid once and
/// estimates `queries` random rectangle counts from the view.
pub fn simulate(n: u64, side: i64, alpha: f64, beta: f64, queries: usize, seed: u64) -> relpriv::Result<Json> {
    let params = MechanismParams::new(alpha, beta)?;
    if side < 2 || (side * side) as u64 <= n {
        return Err(relpriv::Error::InvalidParameter(format!("need side >= 2 and side^2 > n (got {side}, {n})")));
    }
    let schema = Schema::from_pairs([("x", AttrKind::Integer), ("y", AttrKind::Integer)])?;
    let domain = DomainDescriptor::new(schema.clone(), vec![(0..side).map(Value::Int).collect(); 2])?;
    let mut rng = stream_rng(seed, 8);
    let mut instance = Relation::new(schema.clone());
    let spread = side as f64 / 2.0;
    while (instance.len() as u64) < n {
        // two blobs, so that rectangle counts vary
        let (cx, cy) = if rng.random_bool(0.6) { (0.3, 0.35) } else { (0.7, 0.65) };
        let x = (cx * side as f64 + (rng.random::<f64>() - 0.5) * spread).round() as i64;
        let y = (cy * side as f64 + (rng.random::<f64>() - 0.5) * spread).round() as i64;
        instance.insert(relpriv::tuple![x.clamp(0, side - 1), y.clamp(0, side - 1)])?;
    }
    let view = Anonymizer::new(&instance, &domain)?.release(params, seed)?;
    let mut points = Vec::with_capacity(queries);
    for _ in 0..queries {
        let mut q = ConjunctiveQuery::all(&schema);
        for attr in 0..2 {
            let lo = rng.random_range(0..side - 1);
            let hi = rng.random_range(lo + 1..side);
            q.set(attr, Predicate::range(lo, hi)?)?;
        }
        let mask = q.mask(&domain)?;
        let n_d = mask.domain_count(&domain)?;
        let n_v = view.cells().iter().filter(|&&c| mask.matches_code(&domain, c)).count() as u64;
        points.push(json!({
            "query": q.to_string(),
            "actual": eval_query_instance(&q, &instance)?,
            "estimate": estimate_count(n_v, n_d, &params)?,
        }));
    }
    let m = domain.size();
    let utility = UtilityBudget::new((4.0 * beta * m as f64 / n as f64).max(f64::MIN_POSITIVE), 0.05)?;
    Ok(json!({
        "n": n,
        "m": m,
        "view_size": view.len(),
        "radius": guarantee_radius(error_bound(&utility), n),
        "points": points,
    }))
}

fn to_js(r: relpriv::Result<Json>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = planSweep)]
pub fn plan_sweep_js(n: f64, m: f64, k: f64, simple_beta: bool, steps: usize) -> Result<String, JsError> {
    to_js(plan_sweep(n as u64, m as u64, k, simple_beta, steps))
}

#[wasm_bindgen(js_name = posteriorCurves)]
pub fn posterior_curves_js(alpha: f64, beta: f64, d: f64, gamma: f64, steps: usize) -> Result<String, JsError> {
    to_js(posterior_curves(alpha, beta, d, gamma, steps))
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(n: u32, side: i32, alpha: f64, beta: f64, queries: usize, seed: u32) -> Result<String, JsError> {
    to_js(simulate(n as u64, side as i64, alpha, beta, queries, seed as u64))
}
