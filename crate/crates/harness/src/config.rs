use std::path::PathBuf;

use relpriv::anonymizer::{plan_parameters, BetaPolicy, MechanismParams, Plan, UtilityBudget, DEFAULT_FAILURE_PROB};
use relpriv::model::Schema;

use crate::error::{HarnessError, Result};

/// Where the mechanism parameters come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSource {
    Planned { k: f64, gamma: f64, policy: BetaPolicy },
    Explicit { alpha: f64, beta: f64 },
}

impl ParamSource {
    /// Exactly one of `(k, gamma)` and `(alpha, beta)` must be given, both halves of it.
    pub fn from_flags(
        k: Option<f64>,
        gamma: Option<f64>,
        policy: Option<BetaPolicy>,
        alpha: Option<f64>,
        beta: Option<f64>,
    ) -> Result<Self> {
        match (k, gamma, alpha, beta) {
            (Some(k), Some(gamma), None, None) => {
                Ok(ParamSource::Planned { k, gamma, policy: policy.unwrap_or_default() })
            }
            (None, None, Some(alpha), Some(beta)) => {
                if policy.is_some() {
                    return Err(HarnessError::Config("--policy only applies with --k/--gamma".into()));
                }
                Ok(ParamSource::Explicit { alpha, beta })
            }
            _ => Err(HarnessError::Config("give exactly one of --k with --gamma, or --alpha with --beta".into())),
        }
    }

    /// Concrete parameters for an instance of `n` tuples in a domain of `m` cells.
    pub fn resolve(&self, n: u64, m: u64) -> Result<Resolved> {
        match *self {
            ParamSource::Planned { k, gamma, policy } => {
                let plan = plan_parameters(n, m, k, gamma, policy)?;
                Ok(Resolved { params: plan.params, utility: plan.utility, plan: Some(plan) })
            }
            ParamSource::Explicit { alpha, beta } => {
                let params = MechanismParams::new(alpha, beta)?;
                Ok(Resolved { params, utility: implied_utility(beta, n, m)?, plan: None })
            }
        }
    }
}

/// Accuracy budget whose bound `beta <= (r/4)(n/m)` is tight at `beta`.
pub fn implied_utility(beta: f64, n: u64, m: u64) -> Result<UtilityBudget> {
    let r = 4.0 * beta * m as f64 / n.max(1) as f64;
    // beta = 0 means an exact view; any positive r describes it
    Ok(UtilityBudget::new(r.max(f64::MIN_POSITIVE), DEFAULT_FAILURE_PROB)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub params: MechanismParams,
    pub utility: UtilityBudget,
    pub plan: Option<Plan>,
}

/// Query-family and reporting options of an experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Largest number of constrained attributes per query.
    pub max_arity: usize,
    /// Quantile buckets per integer attribute; ranges join bucket edges.
    pub buckets: usize,
    /// Evaluate a seeded random sample of this many queries instead of all.
    pub sample: Option<usize>,
    pub bands: Vec<f64>,
    /// Queries with `Q(I)` at or above this count get their own statistics.
    pub threshold: u64,
    pub failure_prob: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            max_arity: 3,
            buckets: 8,
            sample: None,
            bands: vec![100.0, 500.0, 1000.0],
            threshold: 500,
            failure_prob: DEFAULT_FAILURE_PROB,
        }
    }
}

/// Everything a publish or experiment run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub schema: Schema,
    pub params: ParamSource,
    pub seed: u64,
    /// Rows holding this exact value in any column are dropped on load.
    pub missing_token: Option<String>,
    pub experiment: ExperimentSpec,
}

impl RunConfig {
    pub fn new(input: PathBuf, schema: Schema, params: ParamSource, seed: Option<u64>) -> Result<Self> {
        let seed = seed.ok_or_else(|| HarnessError::Config("--seed is required for randomized runs".into()))?;
        Ok(RunConfig { input, schema, params, seed, missing_token: None, experiment: ExperimentSpec::default() })
    }
}
