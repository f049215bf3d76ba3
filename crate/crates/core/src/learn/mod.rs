//! Classifiers, evaluation, resampling and feature selection.

mod compound;
mod cv;
mod data;
mod forest;
mod importance;
mod logitboost;
mod metrics;
mod model;
mod rfe;
mod tree;

pub use compound::{
    compound_pairs, evaluate_compound, train_compound, CompoundBinding, CompoundModel, CompoundPrediction,
    CompoundSpec, Side, VoteMode,
};
pub use cv::{cross_validate, CvPlan};
pub use forest::{Forest, ForestConfig};
pub use importance::{roc_auc, roc_auc_importance, FeatureAuc};
pub use logitboost::{BoostConfig, LogitBoost, Stump};
pub use metrics::{confusion_from, Agreement, Confusion, EvalReport, FoldScore};
pub use model::{evaluate, Binding, LearnerConfig, Model, ModelParams, TrainedModel, ZeroR, MODEL_SCHEMA_VERSION};
pub use rfe::{rfe, RfePlan, RfeResult, RfeStep};
pub use tree::Tree;
