//! Anonymized publishing of relations by random tuple deletion and insertion.
//!
//! [`model`] holds schemas, relations, finite domains and conjunctive
//! queries. [`anonymizer`] releases a randomized view and plans its
//! parameters, [`estimator`] answers counting queries from a view, and
//! [`adversary`] computes what a Bayesian attacker learns from one.

pub mod adversary;
pub mod anonymizer;
mod error;
pub mod estimator;
pub mod model;

pub use error::{Error, Result};
