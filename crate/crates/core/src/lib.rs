//! Cardinality-constrained maximization of non-monotone submodular
//! functions in few adaptive rounds.
//!
//! Every algorithm talks to its objective through an [`oracle::Oracle`],
//! which batches queries into adaptive rounds and keeps a per-round count.

pub mod baselines;
pub mod engine;
pub mod error;
pub mod graph_gen;
pub mod objectives;
pub mod oracle;
pub mod stats;
pub mod testkit;
pub mod trace;

pub use error::{Error, Result};
pub use oracle::{Element, Oracle, QueryLedger, SetFunction};
