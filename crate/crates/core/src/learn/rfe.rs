use serde::{Deserialize, Serialize};

use super::cv::{pool, run_folds, CvPlan};
use super::forest::ForestConfig;
use super::metrics::EvalReport;
use super::model::{LearnerConfig, TrainedModel};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfePlan {
    /// Candidate subset sizes, strictly ascending.
    pub sizes: Vec<usize>,
    pub cv: CvPlan,
    /// Model refit on each subset and scored.
    pub learner: LearnerConfig,
    /// Forest used to rank features inside each resample.
    pub ranker: ForestConfig,
}

impl RfePlan {
    /// Ranks with the learner itself when it is a forest, otherwise with a
    /// default forest.
    pub fn new(sizes: Vec<usize>, cv: CvPlan, learner: LearnerConfig) -> RfePlan {
        let ranker = match &learner {
            LearnerConfig::Forest(c) => c.clone(),
            _ => ForestConfig::default(),
        };
        RfePlan {
            sizes,
            cv,
            learner,
            ranker,
        }
    }

    fn validate(&self, p: usize) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Config("no subset sizes given".into()));
        }
        if self.sizes[0] == 0 || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(format!(
                "subset sizes {:?} must be positive and strictly ascending",
                self.sizes
            )));
        }
        if *self.sizes.last().unwrap() > p {
            return Err(Error::Config(format!(
                "largest subset size {} exceeds the {p} available features",
                self.sizes.last().unwrap()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeStep {
    pub size: usize,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfeResult {
    /// Resampled performance for every candidate size.
    pub profile: Vec<RfeStep>,
    pub champion_size: usize,
    /// Top-ranked features on the full data, in dataset column order.
    pub champion_features: Vec<String>,
    /// Learner refit on all rows using `champion_features`.
    pub model: TrainedModel,
    /// How often each feature made the champion-size cut across resamples.
    pub selection_counts: Vec<(String, usize)>,
}

impl RfeResult {
    pub fn champion_report(&self) -> &EvalReport {
        &self
            .profile
            .iter()
            .find(|s| s.size == self.champion_size)
            .expect("champion size is in the profile")
            .report
    }
}

/// Features ordered by decreasing forest importance; ties keep column order.
fn ranking(model: &TrainedModel) -> Result<Vec<usize>> {
    let imp = model.forest_importance()?;
    let mut idx: Vec<usize> = (0..imp.len()).collect();
    idx.sort_by(|&a, &b| imp[b].1.total_cmp(&imp[a].1));
    Ok(idx)
}

/// Names of the `size` best-ranked features, in dataset column order.
fn top(dataset: &Dataset, rank: &[usize], size: usize) -> Vec<String> {
    let mut keep = rank[..size].to_vec();
    keep.sort_unstable();
    let names = dataset.feature_names();
    keep.into_iter().map(|j| names[j].clone()).collect()
}

pub fn rfe(dataset: &Dataset, plan: &RfePlan) -> Result<RfeResult> {
    let p = dataset.n_features();
    plan.validate(p)?;
    let truth = dataset.labels()?;
    let ranker = LearnerConfig::Forest(plan.ranker.clone());
    let runs = run_folds(dataset, &plan.cv, |train, test, r, f| {
        let s = plan.cv.learner_seed(r, f);
        let full = ranker.with_seed(s).train(train)?;
        let rank = ranking(&full)?;
        let reuse = ranker.with_seed(s) == plan.learner.with_seed(s);
        plan.sizes
            .iter()
            .map(|&size| {
                let names = top(train, &rank, size);
                let model = if reuse && size == p {
                    full.clone()
                } else {
                    plan.learner.with_seed(s).train(&train.select(&names)?)?
                };
                Ok((names, model.predict_dataset(test)?))
            })
            .collect::<Result<Vec<(Vec<String>, Vec<Label>)>>>()
    })?;

    let mut profile = Vec::with_capacity(plan.sizes.len());
    for (k, &size) in plan.sizes.iter().enumerate() {
        let views: Vec<_> = runs
            .iter()
            .map(|run| (run.repeat, run.fold, run.test.as_slice(), run.output[k].1.as_slice()))
            .collect();
        profile.push(RfeStep {
            size,
            report: pool(&truth, &views)?,
        });
    }
    // Best pooled accuracy; the earlier (smaller) size wins ties.
    let best = profile
        .iter()
        .enumerate()
        .fold(0, |b, (i, s)| if s.report.accuracy_total > profile[b].report.accuracy_total { i } else { b });
    let champion_size = profile[best].size;

    let names = dataset.feature_names();
    let mut counts = vec![0usize; p];
    for run in &runs {
        for n in &run.output[best].0 {
            counts[names.iter().position(|x| x == n).expect("known feature")] += 1;
        }
    }

    let final_seed = seed::derive(plan.cv.seed, &[seed::tag("rfe-final")]);
    let full = ranker.with_seed(final_seed).train(dataset)?;
    let champion_features = top(dataset, &ranking(&full)?, champion_size);
    let model = plan.learner.with_seed(final_seed).train(&dataset.select(&champion_features)?)?;
    Ok(RfeResult {
        profile,
        champion_size,
        champion_features,
        model,
        selection_counts: names.into_iter().zip(counts).collect(),
    })
}
