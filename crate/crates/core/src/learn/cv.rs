use log::warn;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{confusion_from, Agreement, EvalReport, FoldScore};
use super::model::LearnerConfig;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CvPlan {
    pub k: usize,
    pub repeats: usize,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for CvPlan {
    fn default() -> Self {
        CvPlan {
            k: 10,
            repeats: 5,
            seed: 0,
            stratified: true,
        }
    }
}

impl CvPlan {
    pub fn new(k: usize, repeats: usize, seed: u64) -> CvPlan {
        CvPlan {
            k,
            repeats,
            seed,
            stratified: true,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config(format!("k = {} but at least 2 folds are needed", self.k)));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be positive".into()));
        }
        if n < self.k {
            return Err(Error::invalid(format!("{n} rows cannot fill {} folds", self.k)));
        }
        Ok(())
    }

    /// Seed handed to the learner trained for one fold of one repeat.
    pub fn learner_seed(&self, repeat: usize, fold: usize) -> u64 {
        seed::derive(self.seed, &[seed::tag("cv-learner"), repeat as u64, fold as u64])
    }

    /// Fold index of each row, one vector per repeat.
    pub fn assignments(&self, labels: &[Label]) -> Result<Vec<Vec<usize>>> {
        self.validate(labels.len())?;
        let mut stratified = self.stratified;
        if stratified {
            let mut counts = [0usize; Label::COUNT];
            for l in labels {
                counts[l.index()] += 1;
            }
            if let Some(k) = Label::ALL.iter().find(|l| (1..self.k).contains(&counts[l.index()])) {
                warn!(
                    "label {k} has {} rows, fewer than k = {}; folds are not stratified",
                    counts[k.index()],
                    self.k
                );
                stratified = false;
            }
        }
        Ok((0..self.repeats)
            .map(|r| {
                let mut rng = seed::rng(seed::derive(self.seed, &[seed::tag("cv-folds"), r as u64]));
                assign_folds(labels, self.k, stratified, &mut rng)
            })
            .collect())
    }
}

/// Deal shuffled rows round-robin into `k` folds. When stratified, each
/// class is dealt in turn, continuing where the previous class stopped, so
/// both per-class and total fold sizes differ by at most one.
fn assign_folds(labels: &[Label], k: usize, stratified: bool, rng: &mut seed::Rng) -> Vec<usize> {
    let groups: Vec<Vec<usize>> = if stratified {
        Label::ALL
            .iter()
            .map(|&c| (0..labels.len()).filter(|&i| labels[i] == c).collect())
            .collect()
    } else {
        vec![(0..labels.len()).collect()]
    };
    let mut fold = vec![0; labels.len()];
    let mut next = 0;
    for mut g in groups {
        g.shuffle(rng);
        for i in g {
            fold[i] = next % k;
            next += 1;
        }
    }
    fold
}

/// One train/test round of a resampling plan.
pub(crate) struct FoldRun<T> {
    pub repeat: usize,
    pub fold: usize,
    pub test: Vec<usize>,
    pub output: T,
}

/// Run `job(train, test, repeat, fold)` for every fold of every repeat, in
/// parallel, returning results in (repeat, fold) order.
pub(crate) fn run_folds<T, F>(dataset: &Dataset, plan: &CvPlan, job: F) -> Result<Vec<FoldRun<T>>>
where
    T: Send,
    F: Fn(&Dataset, &Dataset, usize, usize) -> Result<T> + Sync,
{
    let labels = dataset.labels()?;
    let assignments = plan.assignments(&labels)?;
    let jobs: Vec<(usize, usize)> = (0..plan.repeats)
        .flat_map(|r| (0..plan.k).map(move |f| (r, f)))
        .collect();
    jobs.into_par_iter()
        .map(|(r, f)| {
            let a = &assignments[r];
            let (test, train): (Vec<usize>, Vec<usize>) = (0..a.len()).partition(|&i| a[i] == f);
            let output = job(&dataset.subset(&train), &dataset.subset(&test), r, f)?;
            Ok(FoldRun {
                repeat: r,
                fold: f,
                test,
                output,
            })
        })
        .collect()
}

/// Pool out-of-fold predictions into one report with per-fold scores.
/// Every repeat predicts every row once, so pooled accuracy equals the mean
/// of the per-repeat accuracies.
pub(crate) fn pool(truth: &[Label], runs: &[(usize, usize, &[usize], &[Label])]) -> Result<EvalReport> {
    let mut confusion = [[0u64; Label::COUNT]; Label::COUNT];
    let mut folds = Vec::with_capacity(runs.len());
    for &(repeat, fold, test, predicted) in runs {
        let t: Vec<Label> = test.iter().map(|&i| truth[i]).collect();
        let c = confusion_from(&t, predicted);
        for (row, add) in confusion.iter_mut().zip(c) {
            for (x, y) in row.iter_mut().zip(add) {
                *x += y;
            }
        }
        let a = Agreement::from_confusion(&c)?;
        folds.push(FoldScore {
            repeat,
            fold,
            n: test.len(),
            accuracy: a.accuracy_total,
            kappa: a.kappa,
        });
    }
    let mut report = EvalReport::from_confusion(confusion)?;
    report.folds = folds;
    Ok(report)
}

/// Repeated k-fold cross-validation of `learner` on `dataset`.
pub fn cross_validate(dataset: &Dataset, learner: &LearnerConfig, plan: &CvPlan) -> Result<EvalReport> {
    let truth = dataset.labels()?;
    let runs = run_folds(dataset, plan, |train, test, r, f| {
        learner.with_seed(plan.learner_seed(r, f)).train(train)?.predict_dataset(test)
    })?;
    let views: Vec<_> = runs
        .iter()
        .map(|run| (run.repeat, run.fold, run.test.as_slice(), run.output.as_slice()))
        .collect();
    pool(&truth, &views)
}
