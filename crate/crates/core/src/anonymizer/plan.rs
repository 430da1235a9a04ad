use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::params::{min_beta_for_privacy, MechanismParams, PrivacyBudget, UtilityBudget};

/// Failure probability attached to planned utility budgets unless overridden.
pub const DEFAULT_FAILURE_PROB: f64 = 0.05;

/// How the planner picks `beta` once `alpha = 1/2` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaPolicy {
    /// The smallest `beta` meeting the privacy conditions.
    #[default]
    MinimalBeta,
    /// `beta = d/gamma = (k/gamma)(n/m)`.
    SimpleBeta,
}

impl fmt::Display for BetaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaPolicy::MinimalBeta => "minimal-beta",
            BetaPolicy::SimpleBeta => "simple-beta",
        })
    }
}

impl FromStr for BetaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal-beta" => Ok(BetaPolicy::MinimalBeta),
            "simple-beta" => Ok(BetaPolicy::SimpleBeta),
            other => Err(Error::InvalidParameter(format!("unknown policy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plan {
    pub params: MechanismParams,
    pub privacy: PrivacyBudget,
    pub utility: UtilityBudget,
}

/// Picks `alpha = 1/2` and a `beta` per `policy` for `(k*n/m, gamma)`-privacy.
///
/// The returned utility budget has `r = 4k/gamma` and
/// [`DEFAULT_FAILURE_PROB`]. Requires `d = k*n/m < gamma/2`.
pub fn plan_parameters(n: u64, m: u64, k: f64, gamma: f64, policy: BetaPolicy) -> Result<Plan> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must lie in (0, 1)")));
    }
    let privacy = PrivacyBudget::from_multiplier(k, n, m, gamma).map_err(|e| match e {
        Error::BudgetOrder { d, gamma } => Error::BudgetTooAggressive { d, half_gamma: gamma / 2.0 },
        e => e,
    })?;
    if privacy.d() >= gamma / 2.0 {
        return Err(Error::BudgetTooAggressive { d: privacy.d(), half_gamma: gamma / 2.0 });
    }
    let alpha = 0.5;
    let beta = match policy {
        BetaPolicy::MinimalBeta => min_beta_for_privacy(alpha, &privacy),
        BetaPolicy::SimpleBeta => privacy.ratio(),
    };
    Ok(Plan {
        params: MechanismParams::new(alpha, beta)?,
        privacy,
        utility: UtilityBudget::new(4.0 * k / gamma, DEFAULT_FAILURE_PROB)?,
    })
}

/// Limiting view-to-input size ratio `1/2 + k/gamma` for the simple-beta plan
/// as `m/n` grows. Only meaningful for `gamma` in `(0, 1)`; the formula is
/// evaluated for any positive `gamma`.
pub fn view_size_ratio(k: f64, gamma: f64) -> f64 {
    0.5 + k / gamma
}
