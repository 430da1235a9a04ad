//! Counting-query estimates from a published view, and their accuracy radius.

use serde::Serialize;

use crate::anonymizer::{MechanismParams, PublishedView, UtilityBudget};
use crate::error::{Error, Result};
use crate::model::ConjunctiveQuery;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateReport {
    /// `(n_view - beta * n_domain) / (alpha - beta)`; may be negative or exceed `n`.
    pub estimate: f64,
    /// `|Q ∩ V|`
    pub n_view: u64,
    /// `|Q ∩ D|`
    pub n_domain: u64,
    /// `rho * sqrt(n)` when a utility budget and `n` were supplied.
    pub guarantee_radius: Option<f64>,
    pub params: MechanismParams,
}

impl EstimateReport {
    /// The estimate clamped to `[0, n]`. Not applied by default: small true
    /// counts are expected to come out far off, even negative.
    pub fn clamped(&self, n: u64) -> f64 {
        self.estimate.clamp(0.0, n as f64)
    }
}

/// `(n_view - beta * n_domain) / (alpha - beta)`. Requires `alpha > beta`.
pub fn estimate_count(n_view: u64, n_domain: u64, params: &MechanismParams) -> Result<f64> {
    let (a, b) = (params.alpha(), params.beta());
    if !(a > b) {
        return Err(Error::EstimatorUndefined);
    }
    Ok((n_view as f64 - b * n_domain as f64) / (a - b))
}

/// `EST(Q, V) = (Q(V) - beta n_D) / (alpha - beta)`.
pub fn estimate(q: &ConjunctiveQuery, v: &PublishedView) -> Result<EstimateReport> {
    let mask = q.mask(v.domain())?;
    let n_domain = mask.domain_count(v.domain())?;
    let n_view = v.cells().iter().filter(|&&c| mask.matches_code(v.domain(), c)).count() as u64;
    Ok(EstimateReport {
        estimate: estimate_count(n_view, n_domain, v.params())?,
        n_view,
        n_domain,
        guarantee_radius: None,
        params: *v.params(),
    })
}

/// Like [`estimate`], also reporting the radius `rho * sqrt(n)` within which
/// the error stays except with probability `u.failure_prob()`.
pub fn estimate_with_guarantee(
    q: &ConjunctiveQuery,
    v: &PublishedView,
    u: &UtilityBudget,
    n: u64,
) -> Result<EstimateReport> {
    let mut r = estimate(q, v)?;
    r.guarantee_radius = Some(guarantee_radius(error_bound(u), n));
    Ok(r)
}

/// `rho = 2 * sqrt(3 r ln(2 / failure_prob))`.
pub fn error_bound(u: &UtilityBudget) -> f64 {
    2.0 * (3.0 * u.r() * (2.0 / u.failure_prob()).ln()).sqrt()
}

/// `rho` expressed through the privacy budget: `4 * sqrt(3 (k/gamma) ln(2 / failure_prob))`,
/// the same quantity as [`error_bound`] with `r = 4k/gamma`.
pub fn error_bound_for_privacy(k: f64, gamma: f64, failure_prob: f64) -> Result<f64> {
    UtilityBudget::new(4.0 * k / gamma, failure_prob)?;
    Ok(4.0 * (3.0 * (k / gamma) * (2.0 / failure_prob).ln()).sqrt())
}

/// `rho * sqrt(n)`.
pub fn guarantee_radius(rho: f64, n: u64) -> f64 {
    rho * (n as f64).sqrt()
}
