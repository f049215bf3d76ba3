use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::TrainingSet;
use super::tree::{GrowParams, Tree};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features sampled per split; `None` means `floor(sqrt(p))`.
    pub m_try: Option<usize>,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 500,
            m_try: None,
            min_leaf: 1,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn resolved_m_try(&self, p: usize) -> Result<usize> {
        let m = self.m_try.unwrap_or_else(|| ((p as f64).sqrt().floor() as usize).max(1));
        if m == 0 || m > p {
            return Err(Error::Config(format!("m_try = {m} outside 1..={p}")));
        }
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("n_trees must be positive".into()));
        }
        if self.min_leaf == 0 {
            return Err(Error::Config("min_leaf must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub m_try: usize,
    trees: Vec<Tree>,
    /// Total Gini decrease per feature, averaged over trees.
    gini_decrease: Vec<f64>,
}

impl Forest {
    pub(crate) fn fit(data: &TrainingSet, config: &ForestConfig) -> Result<Forest> {
        config.validate()?;
        data.require_two_classes()?;
        let p = data.n_features();
        if p == 0 {
            return Err(Error::invalid("no feature columns to train on"));
        }
        let params = GrowParams {
            m_try: config.resolved_m_try(p)?,
            min_leaf: config.min_leaf,
        };
        let n = data.len();
        let grown: Vec<(Tree, Vec<f64>)> = (0..config.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut rng = seed::rng(seed::derive(config.seed, &[seed::tag("tree"), t as u64]));
                let sample: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                let mut imp = vec![0.0; p];
                let tree = Tree::grow(data, sample, params, &mut rng, &mut imp);
                (tree, imp)
            })
            .collect();
        let mut gini_decrease = vec![0.0; p];
        let mut trees = Vec::with_capacity(grown.len());
        for (tree, imp) in grown {
            for (g, v) in gini_decrease.iter_mut().zip(imp) {
                *g += v;
            }
            trees.push(tree);
        }
        for g in &mut gini_decrease {
            *g /= config.n_trees as f64;
        }
        Ok(Forest {
            m_try: params.m_try,
            trees,
            gini_decrease,
        })
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Fraction of trees voting for each class.
    pub fn predict_proba(&self, row: &[f64]) -> [f64; Label::COUNT] {
        let mut votes = [0usize; Label::COUNT];
        for t in &self.trees {
            votes[t.predict(row)] += 1;
        }
        let n = self.trees.len() as f64;
        votes.map(|v| v as f64 / n)
    }

    /// Mean decrease in Gini impurity per feature, scaled so the largest is
    /// 100. All zeros if no tree ever split.
    pub fn importance(&self) -> Vec<f64> {
        let max = self.gini_decrease.iter().copied().fold(0.0, f64::max);
        if max <= 0.0 {
            return vec![0.0; self.gini_decrease.len()];
        }
        self.gini_decrease.iter().map(|g| g / max * 100.0).collect()
    }

    pub fn raw_importance(&self) -> &[f64] {
        &self.gini_decrease
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> TrainingSet {
        let mut rng = seed::rng(3);
        let mut columns = vec![Vec::new(), Vec::new(), Vec::new()];
        let mut labels = Vec::new();
        for i in 0..90 {
            let k = i % 3;
            columns[0].push(k as f64 * 10.0 + rng.gen_range(-1.0..1.0));
            columns[1].push(rng.gen_range(-1.0..1.0));
            columns[2].push(rng.gen_range(-1.0..1.0));
            labels.push(k);
        }
        TrainingSet {
            names: vec!["signal".into(), "n1".into(), "n2".into()],
            columns,
            labels,
        }
    }

    fn config(seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees: 50,
            seed,
            ..ForestConfig::default()
        }
    }

    #[test]
    fn default_m_try_is_floor_sqrt() {
        let c = ForestConfig::default();
        assert_eq!(c.resolved_m_try(1).unwrap(), 1);
        assert_eq!(c.resolved_m_try(10).unwrap(), 3);
        assert_eq!(c.resolved_m_try(16).unwrap(), 4);
        let bad = ForestConfig { m_try: Some(4), ..c };
        assert!(bad.resolved_m_try(3).is_err());
    }

    #[test]
    fn fits_blobs_and_ranks_signal_first() {
        let data = blobs();
        let f = Forest::fit(&data, &config(1)).unwrap();
        let correct = (0..data.len())
            .filter(|&i| crate::label::argmax(&f.predict_proba(&data.row(i))) == data.labels[i])
            .count();
        assert!(correct as f64 / data.len() as f64 >= 0.99);
        let imp = f.importance();
        assert_eq!(imp[0], 100.0);
        assert!(imp.iter().all(|&v| (0.0..=100.0).contains(&v)));
    }

    #[test]
    fn probabilities_are_vote_fractions() {
        let data = blobs();
        let f = Forest::fit(&data, &config(2)).unwrap();
        for i in 0..data.len() {
            let p = f.predict_proba(&data.row(i));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for v in p {
                assert!(((v * 50.0).round() - v * 50.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn same_seed_same_forest() {
        let data = blobs();
        assert_eq!(Forest::fit(&data, &config(9)).unwrap(), Forest::fit(&data, &config(9)).unwrap());
        assert_ne!(Forest::fit(&data, &config(9)).unwrap(), Forest::fit(&data, &config(10)).unwrap());
    }

    #[test]
    fn single_class_is_degenerate() {
        let data = TrainingSet {
            names: vec!["x".into()],
            columns: vec![vec![1.0, 2.0]],
            labels: vec![1, 1],
        };
        assert!(matches!(Forest::fit(&data, &config(0)), Err(Error::DegenerateModel(_))));
    }
}
