pub mod evaluate;
pub mod extract;
pub mod merge;
pub mod predict;
pub mod rfe;
pub mod stats;
pub mod train;

use std::path::Path;

use clap::ValueEnum;
use commit_density::dataset::read_dataset_csv;
use commit_density::learn::{BoostConfig, ForestConfig, LearnerConfig};
use commit_density::Dataset;

use crate::config::{existing, Context};

/// Single-model learners selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LearnerKind {
    Zeror,
    Forest,
    Logitboost,
}

/// Hyperparameter overrides shared by `train` and `rfe`.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct LearnerArgs {
    /// Trees per forest.
    #[arg(long)]
    pub n_trees: Option<usize>,
    /// Features tried per split (default: floor(sqrt(p))).
    #[arg(long)]
    pub mtry: Option<usize>,
    /// Minimum rows per forest leaf.
    #[arg(long)]
    pub min_leaf: Option<usize>,
    /// LogitBoost rounds.
    #[arg(long)]
    pub iterations: Option<usize>,
}

impl LearnerArgs {
    /// Learner of the given kind: the config file's settings when it names
    /// the same kind, then flag overrides, then the seed.
    pub fn build(&self, ctx: &Context, kind: LearnerKind, seed: u64) -> LearnerConfig {
        let base = ctx.config.learner.clone();
        let learner = match kind {
            LearnerKind::Zeror => LearnerConfig::Zeror,
            LearnerKind::Forest => {
                let mut c = match base {
                    Some(LearnerConfig::Forest(c)) => c,
                    _ => ForestConfig::default(),
                };
                if let Some(n) = self.n_trees {
                    c.n_trees = n;
                }
                if self.mtry.is_some() {
                    c.m_try = self.mtry;
                }
                if let Some(m) = self.min_leaf {
                    c.min_leaf = m;
                }
                LearnerConfig::Forest(c)
            }
            LearnerKind::Logitboost => {
                let mut c = match base {
                    Some(LearnerConfig::Logitboost(c)) => c,
                    _ => BoostConfig::default(),
                };
                if let Some(n) = self.iterations {
                    c.n_iterations = n;
                }
                LearnerConfig::Logitboost(c)
            }
        };
        learner.with_seed(seed)
    }
}

pub fn load_dataset(path: &Path) -> anyhow::Result<Dataset> {
    Ok(read_dataset_csv(&existing(path, "dataset")?)?)
}
