//! The insert-remove mechanism, its parameter planner and the condition checkers.

mod mechanism;
mod params;
mod plan;

pub use mechanism::{
    anonymize, stream_rng, Anonymizer, PublishedView, INSERTION_STREAM, RETENTION_STREAM, SHUFFLE_STREAM,
};
pub use params::{
    check_privacy_params, check_utility_params, min_beta_for_privacy, MechanismParams, PrivacyBudget, UtilityBudget,
    Verdict, Violation,
};
pub(crate) use params::{ge, le};
pub use plan::{plan_parameters, view_size_ratio, BetaPolicy, Plan, DEFAULT_FAILURE_PROB};
