use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when comparing against closed-form bounds, so that a
/// parameter computed *as* the bound is accepted.
const BOUND_SLACK: f64 = 1e-12;

pub(crate) fn le(a: f64, b: f64) -> bool {
    a <= b || a - b <= BOUND_SLACK * a.abs().max(b.abs())
}

pub(crate) fn ge(a: f64, b: f64) -> bool {
    le(b, a)
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {v} must lie in [0, 1]")))
    }
}

/// Retention probability `alpha` for tuples of the input and insertion
/// probability `beta` for every other tuple of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechanismParams {
    alpha: f64,
    beta: f64,
}

impl MechanismParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_unit("alpha", alpha)?;
        check_unit("beta", beta)?;
        Ok(MechanismParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Expected view size `n*alpha + (m - n)*beta`.
    ///
    /// # Panics
    /// If `m < n`.
    pub fn expected_view_size(&self, n: u64, m: u64) -> f64 {
        assert!(m >= n, "domain size {m} smaller than instance size {n}");
        n as f64 * self.alpha + (m - n) as f64 * self.beta
    }

    pub(crate) fn boundary_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if v == 0.0 || v == 1.0 {
                w.push(format!("{name} = {v} is a boundary value"));
            }
        }
        w
    }
}

/// An adversary model `(d, gamma)`: prior bound `d`, posterior bound `gamma`,
/// and optionally the multiplier `k` when `d = k*n/m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    d: f64,
    gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
}

impl PrivacyBudget {
    pub fn new(d: f64, gamma: f64) -> Result<Self> {
        if !(d > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!("need 0 < d and gamma < 1 (got d = {d}, gamma = {gamma})")));
        }
        if d >= gamma {
            return Err(Error::BudgetOrder { d, gamma });
        }
        Ok(PrivacyBudget { d, gamma, k: None })
    }

    /// Budget with `d = k*n/m`.
    pub fn from_multiplier(k: f64, n: u64, m: u64, gamma: f64) -> Result<Self> {
        if !(k > 0.0) || n == 0 || m < n {
            return Err(Error::InvalidParameter(format!("need k > 0 and 1 <= n <= m (got k = {k}, n = {n}, m = {m})")));
        }
        let mut b = PrivacyBudget::new(k * n as f64 / m as f64, gamma)?;
        b.k = Some(k);
        Ok(b)
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k(&self) -> Option<f64> {
        self.k
    }

    /// Checks the recorded multiplier against `d = k*n/m` to 1e-12 relative.
    pub fn consistent_with(&self, n: u64, m: u64) -> bool {
        self.k.is_none_or(|k| {
            let want = k * n as f64 / m as f64;
            (self.d - want).abs() <= 1e-12 * want.abs()
        })
    }

    /// `d / gamma`.
    pub fn ratio(&self) -> f64 {
        self.d / self.gamma
    }
}

/// Utility target: constant `r > 0` and the failure probability of the
/// accuracy guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityBudget {
    r: f64,
    failure_prob: f64,
}

impl UtilityBudget {
    pub fn new(r: f64, failure_prob: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::InvalidParameter(format!("r = {r} must be positive")));
        }
        if !(failure_prob > 0.0 && failure_prob < 1.0) {
            return Err(Error::InvalidParameter(format!("failure_prob = {failure_prob} must lie in (0, 1)")));
        }
        Ok(UtilityBudget { r, failure_prob })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn failure_prob(&self) -> f64 {
        self.failure_prob
    }
}

/// An inequality a parameter set failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    /// `alpha <= 1 - d/gamma`
    AlphaAbovePrivacyBound { alpha: f64, bound: f64 },
    /// `beta >= (d/gamma) * (1-gamma)/(1-d) * alpha`
    BetaBelowPrivacyBound { beta: f64, bound: f64 },
    /// `alpha >= 1/2`
    AlphaBelowHalf { alpha: f64 },
    /// `beta <= (r/4) * n/m`
    BetaAboveUtilityBound { beta: f64, bound: f64 },
    /// `beta >= 2 * (d/gamma) * (1-gamma)/(1-d)`
    BetaBelowExclusiveBound { beta: f64, bound: f64 },
    /// Worst-case posterior under an exclusion set exceeds gamma.
    ExclusivePosteriorAboveGamma { posterior: f64, gamma: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphaAbovePrivacyBound { alpha, bound } => {
                write!(f, "alpha = {alpha} exceeds 1 - d/gamma = {bound}")
            }
            Violation::BetaBelowPrivacyBound { beta, bound } => {
                write!(f, "beta = {beta} below (d/gamma)(1-gamma)/(1-d) alpha = {bound}")
            }
            Violation::AlphaBelowHalf { alpha } => write!(f, "alpha = {alpha} below 1/2"),
            Violation::BetaAboveUtilityBound { beta, bound } => {
                write!(f, "beta = {beta} exceeds (r/4)(n/m) = {bound}")
            }
            Violation::BetaBelowExclusiveBound { beta, bound } => {
                write!(f, "beta = {beta} below 2(d/gamma)(1-gamma)/(1-d) = {bound}")
            }
            Violation::ExclusivePosteriorAboveGamma { posterior, gamma } => {
                write!(f, "worst-case exclusive posterior {posterior} exceeds gamma = {gamma}")
            }
        }
    }
}

/// Outcome of a parameter check. Boundary parameters pass or fail on their
/// merits but are listed in `warnings`.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lower bound on `beta` for `(d, gamma)`-privacy at retention `alpha`.
pub fn min_beta_for_privacy(alpha: f64, b: &PrivacyBudget) -> f64 {
    b.ratio() * ((1.0 - b.gamma) / (1.0 - b.d)) * alpha
}

/// Checks the sufficient conditions for `(d, gamma)`-privacy against
/// tuple-independent adversaries:
/// `alpha <= 1 - d/gamma` and `beta >= (d/gamma)(1-gamma)/(1-d) alpha`.
pub fn check_privacy_params(p: &MechanismParams, b: &PrivacyBudget) -> Verdict {
    let mut v = Verdict { warnings: p.boundary_warnings(), ..Verdict::default() };
    let alpha_bound = 1.0 - b.ratio();
    if !le(p.alpha, alpha_bound) {
        v.violations.push(Violation::AlphaAbovePrivacyBound { alpha: p.alpha, bound: alpha_bound });
    }
    let beta_bound = min_beta_for_privacy(p.alpha, b);
    if !ge(p.beta, beta_bound) {
        v.violations.push(Violation::BetaBelowPrivacyBound { beta: p.beta, bound: beta_bound });
    }
    if p.beta > p.alpha {
        // a retained tuple then lowers its own posterior, possibly below (d/gamma) * prior
        v.warnings.push(format!(
            "beta = {} exceeds alpha = {}; the posterior/prior lower bound does not hold",
            p.beta, p.alpha
        ));
    }
    v
}

/// Checks the accuracy conditions `alpha >= 1/2` and `beta <= (r/4)(n/m)`.
pub fn check_utility_params(p: &MechanismParams, n: u64, m: u64, u: &UtilityBudget) -> Result<Verdict> {
    if n == 0 || m < n {
        return Err(Error::InvalidParameter(format!("need 1 <= n <= m (got n = {n}, m = {m})")));
    }
    let mut v = Verdict { warnings: p.boundary_warnings(), ..Verdict::default() };
    if !ge(p.alpha, 0.5) {
        v.violations.push(Violation::AlphaBelowHalf { alpha: p.alpha });
    }
    let bound = u.r / 4.0 * (n as f64 / m as f64);
    if !le(p.beta, bound) {
        v.violations.push(Violation::BetaAboveUtilityBound { beta: p.beta, bound });
    }
    Ok(v)
}
