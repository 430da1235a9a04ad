use std::path::Path;

use relpriv::anonymizer::{Anonymizer, PublishedView};
use relpriv::model::build_domain;

use crate::config::{ParamSource, Resolved, RunConfig};
use crate::error::Result;
use crate::io::{load_relation_with, write_view_bundle, Loaded, ParamsFile, PlannerInputs};

/// The input, its parameters and one view of it.
#[derive(Debug, Clone)]
pub struct Release {
    pub loaded: Loaded,
    pub resolved: Resolved,
    pub view: PublishedView,
}

impl Release {
    pub fn params_file(&self, config: &RunConfig) -> ParamsFile {
        let n = self.loaded.relation.len() as u64;
        let m = self.view.domain().size();
        let planner = match (&config.params, &self.resolved.plan) {
            (ParamSource::Planned { k, gamma, policy }, Some(plan)) => Some(PlannerInputs {
                k: *k,
                gamma: *gamma,
                policy: policy.to_string(),
                d: plan.privacy.d(),
                r: plan.utility.r(),
                failure_prob: plan.utility.failure_prob(),
            }),
            _ => None,
        };
        ParamsFile {
            alpha: self.resolved.params.alpha(),
            beta: self.resolved.params.beta(),
            seed: config.seed,
            n,
            m,
            expected_view_size: self.resolved.params.expected_view_size(n, m),
            view_size: self.view.len() as u64,
            planner,
        }
    }
}

/// Loads the input, builds its domain, fixes the parameters and runs the mechanism once.
pub fn release(config: &RunConfig) -> Result<Release> {
    let loaded = load_relation_with(&config.input, &config.schema, config.missing_token.as_deref())?;
    let domain = build_domain(&loaded.relation)?;
    let resolved = config.params.resolve(loaded.relation.len() as u64, domain.size())?;
    let view = Anonymizer::new(&loaded.relation, &domain)?.release(resolved.params, config.seed)?;
    Ok(Release { loaded, resolved, view })
}

/// [`release`], then writes the view bundle to `out_dir`.
pub fn publish(config: &RunConfig, out_dir: &Path) -> Result<(Release, ParamsFile)> {
    let rel = release(config)?;
    let params_file = rel.params_file(config);
    write_view_bundle(out_dir, &rel.view, &params_file)?;
    Ok((rel, params_file))
}
