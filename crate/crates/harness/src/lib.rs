//! File formats, the query-family experiment and the census surrogate behind
//! the `relpriv` command.

pub mod config;
mod error;
pub mod experiment;
pub mod io;
pub mod publish;
pub mod summarize;
pub mod surrogate;

pub use error::{HarnessError, Result, EXIT_CONFIG, EXIT_DATA};
