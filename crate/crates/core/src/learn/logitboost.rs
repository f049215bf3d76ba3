//! Multiclass LogitBoost (Friedman, Hastie and Tibshirani) with weighted
//! least-squares regression stumps as base learners.

use serde::{Deserialize, Serialize};

use super::data::TrainingSet;
use crate::error::{Error, Result};
use crate::label::Label;

const J: usize = Label::COUNT;
const Z_MAX: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoostConfig {
    pub n_iterations: usize,
    /// Kept for a uniform learner interface; the fit is deterministic.
    pub seed: u64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            n_iterations: 50,
            seed: 0,
        }
    }
}

/// `x[feature] <= threshold ? left : right`. A stump without a usable split
/// has `feature = None` and predicts `left` everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: Option<usize>,
    pub threshold: f64,
    pub left: f64,
    pub right: f64,
}

impl Stump {
    pub fn eval(&self, row: &[f64]) -> f64 {
        match self.feature {
            Some(f) if row[f] > self.threshold => self.right,
            _ => self.left,
        }
    }

    /// Weighted least-squares stump on `z` with weights `w`. `order[f]`
    /// lists row indices sorted by feature `f`.
    fn fit(columns: &[Vec<f64>], order: &[Vec<usize>], z: &[f64], w: &[f64]) -> Stump {
        let sw: f64 = w.iter().sum();
        let swz: f64 = w.iter().zip(z).map(|(a, b)| a * b).sum();
        let base = if sw > 0.0 { swz / sw } else { 0.0 };
        let mut best = Stump {
            feature: None,
            threshold: 0.0,
            left: base,
            right: base,
        };
        let mut best_gain = if sw > 0.0 { swz * swz / sw } else { 0.0 };
        for (f, idx) in order.iter().enumerate() {
            let col = &columns[f];
            let (mut lw, mut lwz) = (0.0, 0.0);
            for k in 0..idx.len() - 1 {
                let i = idx[k];
                lw += w[i];
                lwz += w[i] * z[i];
                let (lo, hi) = (col[i], col[idx[k + 1]]);
                let (rw, rwz) = (sw - lw, swz - lwz);
                if lo == hi || lw <= 0.0 || rw <= 0.0 {
                    continue;
                }
                let gain = lwz * lwz / lw + rwz * rwz / rw;
                if gain > best_gain * (1.0 + 1e-12) + 1e-300 {
                    let mid = lo + (hi - lo) / 2.0;
                    best_gain = gain;
                    best = Stump {
                        feature: Some(f),
                        threshold: if mid < hi { mid } else { lo },
                        left: lwz / lw,
                        right: rwz / rw,
                    };
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitBoost {
    /// One stump per class per iteration.
    rounds: Vec<[Stump; J]>,
}

impl LogitBoost {
    pub(crate) fn fit(data: &TrainingSet, config: &BoostConfig) -> Result<LogitBoost> {
        if config.n_iterations == 0 {
            return Err(Error::Config("n_iterations must be at least 1".into()));
        }
        data.require_two_classes()?;
        if data.n_features() == 0 {
            return Err(Error::invalid("no feature columns to train on"));
        }
        let n = data.len();
        let order: Vec<Vec<usize>> = data
            .columns
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| c[a].total_cmp(&c[b]));
                idx
            })
            .collect();
        let mut scores = vec![[0.0; J]; n];
        let mut probs = vec![[1.0 / J as f64; J]; n];
        let mut rounds = Vec::with_capacity(config.n_iterations);
        let mut z = vec![0.0; n];
        let mut w = vec![0.0; n];
        for _ in 0..config.n_iterations {
            let mut stumps = [Stump {
                feature: None,
                threshold: 0.0,
                left: 0.0,
                right: 0.0,
            }; J];
            for (j, stump) in stumps.iter_mut().enumerate() {
                for i in 0..n {
                    let p = probs[i][j];
                    let y = if data.labels[i] == j { 1.0 } else { 0.0 };
                    let pq = p * (1.0 - p);
                    w[i] = pq.max(1e-24);
                    z[i] = ((y - p) / w[i]).clamp(-Z_MAX, Z_MAX);
                }
                *stump = Stump::fit(&data.columns, &order, &z, &w);
            }
            for i in 0..n {
                let row = data.row(i);
                let step = symmetric_step(&stumps, &row);
                for j in 0..J {
                    scores[i][j] += step[j];
                }
                probs[i] = softmax(&scores[i]);
            }
            rounds.push(stumps);
        }
        Ok(LogitBoost { rounds })
    }

    pub fn n_iterations(&self) -> usize {
        self.rounds.len()
    }

    pub fn scores(&self, row: &[f64]) -> [f64; J] {
        let mut s = [0.0; J];
        for stumps in &self.rounds {
            let step = symmetric_step(stumps, row);
            for j in 0..J {
                s[j] += step[j];
            }
        }
        s
    }

    pub fn predict_proba(&self, row: &[f64]) -> [f64; J] {
        softmax(&self.scores(row))
    }
}

/// `(J-1)/J * (f_j - mean_k f_k)`: the per-class increments sum to zero.
fn symmetric_step(stumps: &[Stump; J], row: &[f64]) -> [f64; J] {
    let f = stumps.map(|s| s.eval(row));
    let mean = f.iter().sum::<f64>() / J as f64;
    let scale = (J - 1) as f64 / J as f64;
    f.map(|v| scale * (v - mean))
}

fn softmax(s: &[f64; J]) -> [f64; J] {
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e = s.map(|v| (v - max).exp());
    let total: f64 = e.iter().sum();
    e.map(|v| v / total)
}
