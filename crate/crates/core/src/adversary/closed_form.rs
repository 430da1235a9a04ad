use serde::Serialize;

use crate::anonymizer::{ge, le, MechanismParams, PrivacyBudget, Verdict, Violation};
use crate::error::{Error, Result};

fn ratio(num: f64, den: f64) -> Result<f64> {
    if den == 0.0 {
        Err(Error::ZeroProbabilityEvent)
    } else {
        Ok(num / den)
    }
}

fn check_prior(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("prior {p} outside [0, 1]")))
    }
}

/// Posterior of a tuple with independent prior `p`, after seeing whether it
/// is in the view.
pub fn posterior_independent(p: f64, params: &MechanismParams, present_in_view: bool) -> Result<f64> {
    check_prior(p)?;
    let (a, b) = (params.alpha(), params.beta());
    if present_in_view {
        ratio(a * p, a * p + b * (1.0 - p))
    } else {
        ratio((1.0 - a) * p, (1.0 - a) * p + (1.0 - b) * (1.0 - p))
    }
}

/// Posterior of `t_i` in an exclusion set when the view holds `t_i` and no
/// other member of the set; the largest posterior any view can produce.
pub fn posterior_exclusive_worstcase(p: f64, params: &MechanismParams) -> Result<f64> {
    check_prior(p)?;
    let (a, b) = (params.alpha(), params.beta());
    let num = a * (1.0 - b) * p;
    ratio(num, num + b * (1.0 - a) * (1.0 - p))
}

/// Safety against exclusive adversaries at `alpha = 1/2`: requires
/// `beta >= 2 (d/gamma)(1-gamma)/(1-d)` and checks the worst-case posterior
/// at prior `d` numerically.
pub fn check_exclusive_safe(params: &MechanismParams, b: &PrivacyBudget) -> Result<Verdict> {
    if (params.alpha() - 0.5).abs() > 1e-12 {
        return Err(Error::HypothesisViolated(params.alpha()));
    }
    let mut v = Verdict { warnings: params.boundary_warnings(), ..Verdict::default() };
    let bound = 2.0 * b.ratio() * (1.0 - b.gamma()) / (1.0 - b.d());
    if !ge(params.beta(), bound) {
        v.violations.push(Violation::BetaBelowExclusiveBound { beta: params.beta(), bound });
    }
    match posterior_exclusive_worstcase(b.d(), params) {
        Ok(post) if le(post, b.gamma()) => {}
        Ok(post) => v.violations.push(Violation::ExclusivePosteriorAboveGamma { posterior: post, gamma: b.gamma() }),
        // beta = 0: a view holding t_i proves it
        Err(_) => v.violations.push(Violation::ExclusivePosteriorAboveGamma { posterior: 1.0, gamma: b.gamma() }),
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageKind {
    None,
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageVerdict {
    pub kind: LeakageKind,
    pub prior: f64,
    pub posterior: f64,
    pub budget: PrivacyBudget,
}

/// Positive leakage: `prior <= d` and `posterior > gamma`. Negative leakage:
/// `posterior / prior < d / gamma`. Tuples with prior 1 are already known and
/// never leak.
pub fn classify_leakage(prior: f64, posterior: f64, b: &PrivacyBudget) -> Result<LeakageVerdict> {
    if !(prior > 0.0 && prior <= 1.0) {
        return Err(Error::InvalidParameter(format!("prior {prior} must lie in (0, 1]")));
    }
    if !(0.0..=1.0).contains(&posterior) {
        return Err(Error::InvalidParameter(format!("posterior {posterior} outside [0, 1]")));
    }
    let kind = if prior == 1.0 {
        LeakageKind::None
    } else if prior <= b.d() && !le(posterior, b.gamma()) {
        LeakageKind::Positive
    } else if !ge(posterior / prior, b.ratio()) {
        LeakageKind::Negative
    } else {
        LeakageKind::None
    };
    Ok(LeakageVerdict { kind, prior, posterior, budget: *b })
}
