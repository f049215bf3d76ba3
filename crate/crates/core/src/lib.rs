//! Commit size and source code density mining, plus maintenance-activity
//! classification of commits.
//!
//! The crate is organised bottom-up:
//!
//! - [`diffcore`] lexes changed lines into code, comment and whitespace and
//!   turns hunks into gross/net line counts.
//! - [`miner`] walks a git repository and produces one [`CommitSizeRecord`]
//!   per commit, and chains records across parent generations.
//! - [`dataset`] loads, joins, splits, filters and preprocesses feature tables.
//! - [`learn`] holds the classifiers (ZeroR, random forest, LogitBoost,
//!   compound keyword-routed models), evaluation, cross-validation and RFE.
//! - [`stats`] computes descriptive statistics and effort/productivity metrics.

pub mod dataset;
pub mod diffcore;
pub mod error;
pub mod label;
pub mod learn;
pub mod miner;
pub mod seed;
pub mod stats;

pub use dataset::{Column, ColumnRole, Dataset, FeatureGroup, LabeledSample};
pub use diffcore::{LanguageProfile, LineClass, ProfileSet};
pub use error::{Error, Result};
pub use label::Label;
pub use learn::{CompoundModel, EvalReport, LearnerConfig, TrainedModel};
pub use miner::{CommitSizeRecord, GenerationChain, Generations};
