//! Two-sided keyword-routed models: the left model handles commits whose
//! message contains a vocabulary keyword, the right model everything else.

use serde::{Deserialize, Serialize};

use super::metrics::EvalReport;
use super::model::{Binding, LearnerConfig, TrainedModel};
use crate::dataset::{vertical_split, Dataset, FeatureGroup, KeywordVocabulary, LabeledSample};
use crate::error::{Error, Result};
use crate::label::{argmax, Label};

/// Which side of a compound model made a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `Routed` asks only the side chosen by the keyword rule. `Combined`
/// consults both sides and sums their class probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoteMode {
    Routed,
    Combined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundSpec {
    pub left_group: FeatureGroup,
    pub left: LearnerConfig,
    pub right_group: FeatureGroup,
    pub right: LearnerConfig,
}

/// The 16 ordered (left, right) feature-group pairs.
pub fn compound_pairs() -> Vec<(FeatureGroup, FeatureGroup)> {
    FeatureGroup::ALL
        .iter()
        .flat_map(|&l| FeatureGroup::ALL.iter().map(move |&r| (l, r)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundModel {
    pub left_group: FeatureGroup,
    pub right_group: FeatureGroup,
    pub left: TrainedModel,
    pub right: TrainedModel,
    pub vocabulary: KeywordVocabulary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundPrediction {
    pub label: Label,
    /// Class probabilities. In combined mode these are the summed votes
    /// divided by two, so they still sum to one.
    pub probabilities: [f64; Label::COUNT],
    /// Side chosen by routing; `None` in combined mode.
    pub side: Option<Side>,
}

fn message_of(sample: &LabeledSample, row: usize) -> Result<&str> {
    sample
        .message
        .as_deref()
        .ok_or_else(|| Error::invalid(format!("row {row} has no commit message")))
}

pub fn train_compound(spec: &CompoundSpec, vocabulary: &KeywordVocabulary, train: &Dataset) -> Result<CompoundModel> {
    for (i, r) in train.rows().iter().enumerate() {
        message_of(r, i)?;
    }
    let left = spec.left.train(&vertical_split(train, spec.left_group)?)?;
    let right = spec.right.train(&vertical_split(train, spec.right_group)?)?;
    Ok(CompoundModel {
        left_group: spec.left_group,
        right_group: spec.right_group,
        left,
        right,
        vocabulary: vocabulary.clone(),
    })
}

/// Both sides' column positions in one dataset.
#[derive(Debug, Clone)]
pub struct CompoundBinding {
    left: Binding,
    right: Binding,
}

impl CompoundModel {
    pub fn routes_left(&self, message: &str) -> bool {
        self.vocabulary.matches(message)
    }

    pub fn bind(&self, dataset: &Dataset) -> Result<CompoundBinding> {
        Ok(CompoundBinding {
            left: self.left.bind(dataset)?,
            right: self.right.bind(dataset)?,
        })
    }

    pub fn predict_sample(
        &self,
        binding: &CompoundBinding,
        sample: &LabeledSample,
        mode: VoteMode,
    ) -> Result<CompoundPrediction> {
        match mode {
            VoteMode::Routed => {
                let message = sample
                    .message
                    .as_deref()
                    .ok_or_else(|| Error::invalid("sample has no commit message"))?;
                let (side, model, b) = if self.routes_left(message) {
                    (Side::Left, &self.left, &binding.left)
                } else {
                    (Side::Right, &self.right, &binding.right)
                };
                let row = b.gather(sample);
                Ok(CompoundPrediction {
                    label: model.predict(&row),
                    probabilities: model.predict_proba(&row),
                    side: Some(side),
                })
            }
            VoteMode::Combined => {
                let l = self.left.predict_proba(&binding.left.gather(sample));
                let r = self.right.predict_proba(&binding.right.gather(sample));
                let sum: [f64; Label::COUNT] = std::array::from_fn(|k| l[k] + r[k]);
                Ok(CompoundPrediction {
                    label: Label::ALL[argmax(&sum)],
                    probabilities: sum.map(|v| v / 2.0),
                    side: None,
                })
            }
        }
    }

    pub fn predict_dataset(&self, dataset: &Dataset, mode: VoteMode) -> Result<Vec<CompoundPrediction>> {
        let b = self.bind(dataset)?;
        dataset
            .rows()
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if mode == VoteMode::Routed {
                    message_of(r, i)?;
                }
                self.predict_sample(&b, r, mode)
            })
            .collect()
    }
}

pub fn evaluate_compound(model: &CompoundModel, data: &Dataset, mode: VoteMode) -> Result<EvalReport> {
    if data.is_empty() {
        return Err(Error::invalid("evaluation data is empty"));
    }
    let truth = data.labels()?;
    let predicted: Vec<Label> = model.predict_dataset(data, mode)?.into_iter().map(|p| p.label).collect();
    EvalReport::from_predictions(&truth, &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Column, ColumnRole};
    use crate::learn::forest::ForestConfig;

    /// Keyword column `kw_fix` and size column `size`; label `c` iff the
    /// message says "fix", else `a` for small and `p` for large sizes.
    fn data() -> Dataset {
        let rows = (0..30)
            .map(|i| {
                let fix = i % 3 == 0;
                let size = (i % 5) as f64;
                let label = if fix {
                    Label::Corrective
                } else if size < 2.5 {
                    Label::Adaptive
                } else {
                    Label::Perfective
                };
                let mut s = LabeledSample::new(vec![f64::from(u8::from(fix)), size], Some(label));
                s.sha1 = Some(format!("{i}"));
                s.message = Some(if fix { "Fix NPE in parser".into() } else { "update docs".into() });
                s
            })
            .collect();
        Dataset::new(
            vec![Column::new("kw_fix", ColumnRole::Keyword), Column::new("size", ColumnRole::Size)],
            rows,
            "t",
        )
        .unwrap()
    }

    fn forest() -> LearnerConfig {
        LearnerConfig::Forest(ForestConfig {
            n_trees: 20,
            ..Default::default()
        })
    }

    fn spec(l: FeatureGroup, r: FeatureGroup) -> CompoundSpec {
        CompoundSpec {
            left_group: l,
            left: forest(),
            right_group: r,
            right: forest(),
        }
    }

    #[test]
    fn sixteen_ordered_pairs() {
        let pairs = compound_pairs();
        assert_eq!(pairs.len(), 16);
        assert!(pairs.contains(&(FeatureGroup::Density, FeatureGroup::Combined)));
        assert!(pairs.contains(&(FeatureGroup::Combined, FeatureGroup::Density)));
    }

    #[test]
    fn routing_by_keyword() {
        let vocab = KeywordVocabulary::new(["fix"]).unwrap();
        let m = train_compound(&spec(FeatureGroup::Keywords, FeatureGroup::Density), &vocab, &data()).unwrap();
        assert!(m.routes_left("fix NPE in parser"));
        assert!(!m.routes_left("update docs"));
        assert_eq!(m.left.features, vec!["kw_fix"]);
        assert_eq!(m.right.features, vec!["size"]);
        let preds = m.predict_dataset(&data(), VoteMode::Routed).unwrap();
        assert_eq!(preds[0].side, Some(Side::Left));
        assert_eq!(preds[1].side, Some(Side::Right));
        let r = evaluate_compound(&m, &data(), VoteMode::Routed).unwrap();
        assert_eq!(r.accuracy_total, 1.0);
    }

    #[test]
    fn same_group_both_sides() {
        let vocab = KeywordVocabulary::new(["fix"]).unwrap();
        let m = train_compound(&spec(FeatureGroup::Keywords, FeatureGroup::Keywords), &vocab, &data()).unwrap();
        assert_eq!(m.left, m.right);
    }

    #[test]
    fn combined_votes_are_summed() {
        let vocab = KeywordVocabulary::new(["fix"]).unwrap();
        let m = train_compound(&spec(FeatureGroup::Density, FeatureGroup::Combined), &vocab, &data()).unwrap();
        assert_eq!(m.right.features, vec!["kw_fix", "size"]);
        let ds = data();
        let b = m.bind(&ds).unwrap();
        for r in ds.rows() {
            let p = m.predict_sample(&b, r, VoteMode::Combined).unwrap();
            let l = m.left.predict_proba(&[r.features[1]]);
            let rr = m.right.predict_proba(&r.features);
            let sum = [l[0] + rr[0], l[1] + rr[1], l[2] + rr[2]];
            assert_eq!(p.label, Label::ALL[argmax(&sum)]);
            assert!((p.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert_eq!(p.side, None);
        }
    }

    #[test]
    fn vote_sum_example() {
        use crate::learn::model::{ModelParams, ZeroR};
        let fixed = |priors| TrainedModel {
            features: vec!["size".into()],
            classes: Label::ALL.to_vec(),
            params: ModelParams::Zeror(ZeroR { priors }),
        };
        let m = CompoundModel {
            left_group: FeatureGroup::Density,
            right_group: FeatureGroup::Density,
            left: fixed([0.5, 0.3, 0.2]),
            right: fixed([0.1, 0.6, 0.3]),
            vocabulary: KeywordVocabulary::new(["fix"]).unwrap(),
        };
        let ds = data();
        let b = m.bind(&ds).unwrap();
        let p = m.predict_sample(&b, &ds.rows()[0], VoteMode::Combined).unwrap();
        assert_eq!(p.label, Label::Corrective);
        let routed = m.predict_sample(&b, &ds.rows()[0], VoteMode::Routed).unwrap();
        assert_eq!(routed.label, Label::Adaptive);
    }

    #[test]
    fn missing_message_is_rejected() {
        let ds = data();
        let stripped = ds.filter_rows(|_| true);
        let rows: Vec<LabeledSample> = stripped
            .rows()
            .iter()
            .map(|r| LabeledSample { message: None, ..r.clone() })
            .collect();
        let ds2 = Dataset::new(ds.columns().to_vec(), rows, "t").unwrap();
        let vocab = KeywordVocabulary::new(["fix"]).unwrap();
        let err = train_compound(&spec(FeatureGroup::Keywords, FeatureGroup::Density), &vocab, &ds2);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }
}
