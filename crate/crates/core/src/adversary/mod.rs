//! Bayesian leakage analysis: closed-form posteriors, conversions between
//! privacy notions, and an exhaustive oracle for domains of at most 20 cells.

mod cells;
mod closed_form;
mod convert;
mod exact;
mod experiments;
mod prior;

pub use cells::{cell_of, cell_set, subsets_of_size, subsets_within, CellSet, MAX_ORACLE_CELLS};
pub use closed_form::{
    check_exclusive_safe, classify_leakage, posterior_exclusive_worstcase, posterior_independent, LeakageKind,
    LeakageVerdict,
};
pub use convert::{
    complement_ratio_bounds, delta_from_absolute, epsilon_from_relative, gamma_from_relative, impossibility_frontier,
};
pub use exact::{
    exact_event_posterior, exact_posterior, exact_posterior_of, exact_posteriors, exact_view_distribution,
    statistical_difference, view_probability, ViewDistribution,
};
pub use experiments::{
    correlated_breach_demo, expected_breach_posterior, indistinguishability_epsilon, meaningfulness_experiment,
    meaningfulness_experiment_with, BreachReport, MeaningfulnessReport, MeaningfulnessThresholds, QuerySd,
    MAX_INDIST_CELLS, MAX_MEANINGFULNESS_CELLS,
};
pub use prior::{ExclusionSet, PriorModel};
