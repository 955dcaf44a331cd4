//! Multi-label classification by problem transformation.
//!
//! The crate turns a table with several binary label columns into ordinary
//! single-label problems (binary relevance, classifier chains, tree-shaped
//! Bayesian chains, label powerset), trains classic learners on them
//! (ZeroR, naive Bayes, kNN, Hoeffding tree, RIPPER) and evaluates the fused
//! multi-label predictions with example-based, label-based and ranking
//! metrics.
//!
//! Data-parallel loops (cross-validation folds, per-label training, batch
//! prediction) go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and runs sequentially otherwise.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod learners;
pub mod metrics;
pub mod multilabel;
pub mod par;
pub mod persist;

pub use error::{Error, Result};
