//! CART classification trees with Gini impurity, as grown inside a forest.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::data::TrainingSet;
use crate::label::Label;

const LEAF: i32 = -1;

/// Flat node arrays. A node with `feature == -1` is a leaf whose class is
/// stored in `class`; otherwise rows with `x[feature] <= threshold` go to
/// `children[0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    feature: Vec<i32>,
    threshold: Vec<f64>,
    children: Vec<[u32; 2]>,
    class: Vec<u8>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct GrowParams {
    pub m_try: usize,
    pub min_leaf: usize,
}

struct Split {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

impl Tree {
    pub fn n_nodes(&self) -> usize {
        self.feature.len()
    }

    pub fn depth(&self) -> usize {
        fn walk(t: &Tree, node: usize) -> usize {
            if t.feature[node] == LEAF {
                0
            } else {
                1 + walk(t, t.children[node][0] as usize).max(walk(t, t.children[node][1] as usize))
            }
        }
        walk(self, 0)
    }

    pub fn predict(&self, row: &[f64]) -> usize {
        let mut node = 0;
        loop {
            let f = self.feature[node];
            if f == LEAF {
                return self.class[node] as usize;
            }
            let side = usize::from(row[f as usize] > self.threshold[node]);
            node = self.children[node][side] as usize;
        }
    }

    /// Grow a tree on the rows listed in `sample` (duplicates allowed).
    /// Gini decreases are added to `importance`, weighted by node size.
    pub(crate) fn grow<R: Rng>(
        data: &TrainingSet,
        sample: Vec<usize>,
        params: GrowParams,
        rng: &mut R,
        importance: &mut [f64],
    ) -> Tree {
        let mut tree = Tree {
            feature: Vec::new(),
            threshold: Vec::new(),
            children: Vec::new(),
            class: Vec::new(),
        };
        let mut stack = vec![(tree.push_leaf(0), sample)];
        let mut buf = Vec::new();
        while let Some((node, rows)) = stack.pop() {
            let counts = class_counts(data, &rows);
            tree.class[node] = majority(&counts) as u8;
            if counts.iter().filter(|&&c| c > 0).count() < 2 || rows.len() < 2 * params.min_leaf {
                continue;
            }
            let Some(split) = best_split(data, &rows, &counts, params, rng, &mut buf) else {
                continue;
            };
            importance[split.feature] += split.decrease;
            let col = &data.columns[split.feature];
            let (left, right): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| col[i] <= split.threshold);
            let l = tree.push_leaf(0);
            let r = tree.push_leaf(0);
            tree.feature[node] = split.feature as i32;
            tree.threshold[node] = split.threshold;
            tree.children[node] = [l as u32, r as u32];
            // Right first so the left subtree is numbered first.
            stack.push((r, right));
            stack.push((l, left));
        }
        tree
    }

    fn push_leaf(&mut self, class: u8) -> usize {
        self.feature.push(LEAF);
        self.threshold.push(0.0);
        self.children.push([0, 0]);
        self.class.push(class);
        self.feature.len() - 1
    }
}

fn class_counts(data: &TrainingSet, rows: &[usize]) -> [usize; Label::COUNT] {
    let mut c = [0; Label::COUNT];
    for &i in rows {
        c[data.labels[i]] += 1;
    }
    c
}

fn majority(counts: &[usize; Label::COUNT]) -> usize {
    let mut best = 0;
    for k in 1..Label::COUNT {
        if counts[k] > counts[best] {
            best = k;
        }
    }
    best
}

/// Sum of squared class counts over node size. Maximizing the children's
/// sum minimizes their size-weighted Gini impurity.
fn purity(counts: &[usize; Label::COUNT], n: usize) -> f64 {
    counts.iter().map(|&c| (c * c) as f64).sum::<f64>() / n as f64
}

fn best_split<R: Rng>(
    data: &TrainingSet,
    rows: &[usize],
    counts: &[usize; Label::COUNT],
    params: GrowParams,
    rng: &mut R,
    buf: &mut Vec<(f64, usize)>,
) -> Option<Split> {
    let n = rows.len();
    let parent = purity(counts, n);
    let mut best: Option<Split> = None;
    for f in index::sample(rng, data.n_features(), params.m_try).into_iter() {
        let col = &data.columns[f];
        buf.clear();
        buf.extend(rows.iter().map(|&i| (col[i], data.labels[i])));
        buf.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut left = [0usize; Label::COUNT];
        for i in 0..n - 1 {
            left[buf[i].1] += 1;
            let (lo, hi) = (buf[i].0, buf[i + 1].0);
            let nl = i + 1;
            if lo == hi || nl < params.min_leaf || n - nl < params.min_leaf {
                continue;
            }
            let mut right = *counts;
            for k in 0..Label::COUNT {
                right[k] -= left[k];
            }
            let decrease = purity(&left, nl) + purity(&right, n - nl) - parent;
            if decrease > 1e-12 && best.as_ref().is_none_or(|b| decrease > b.decrease) {
                let mid = lo + (hi - lo) / 2.0;
                best = Some(Split {
                    feature: f,
                    threshold: if mid < hi { mid } else { lo },
                    decrease,
                });
            }
        }
    }
    best
}
