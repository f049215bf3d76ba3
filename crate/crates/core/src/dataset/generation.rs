use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::{Column, ColumnRole, Dataset, LabeledSample};
use crate::error::{Error, Result};
use crate::miner::{GenerationChain, Generations, SIZE_FEATURE_COLUMNS};

/// Which features the principal commit carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// Keywords and code changes.
    A,
    /// Size and density only.
    B,
    /// A and B together.
    C,
    /// C without keywords.
    D,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::A, Variant::B, Variant::C, Variant::D];

    fn principal_role(self, role: ColumnRole) -> bool {
        match self {
            Variant::A => matches!(role, ColumnRole::Keyword | ColumnRole::Change),
            Variant::B => role == ColumnRole::Size,
            Variant::C => role.is_feature(),
            Variant::D => matches!(role, ColumnRole::Change | ColumnRole::Size),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Variant::A),
            "B" => Ok(Variant::B),
            "C" => Ok(Variant::C),
            "D" => Ok(Variant::D),
            other => Err(Error::invalid(format!("unknown variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantSpec {
    pub variant: Variant,
    pub generations: Generations,
}

#[derive(Debug, Clone)]
pub struct GenerationDataset {
    pub dataset: Dataset,
    /// Principal SHA1s left out, with the reason.
    pub skipped: Vec<(String, String)>,
}

/// One row per chain: the principal's columns selected by the variant, then
/// the size features of each parent generation suffixed `_gen<i>`.
///
/// Chains longer than the requested depth are truncated; shorter ones and
/// chains whose principal is not in `merged` are skipped.
pub fn build_generation_dataset(spec: VariantSpec, chains: &[GenerationChain], merged: &Dataset) -> Result<GenerationDataset> {
    let g = spec.generations.get();
    let principal_idx: Vec<usize> = merged
        .columns()
        .iter()
        .enumerate()
        .filter(|(_, c)| spec.variant.principal_role(c.role))
        .map(|(j, _)| j)
        .collect();
    if principal_idx.is_empty() {
        return Err(Error::EmptySelection(format!(
            "variant {} selects no principal columns",
            spec.variant
        )));
    }

    let mut columns: Vec<Column> = principal_idx.iter().map(|&j| merged.columns()[j].clone()).collect();
    for i in 1..=g {
        columns.extend(
            SIZE_FEATURE_COLUMNS
                .iter()
                .map(|n| Column::new(format!("{n}_gen{i}"), ColumnRole::Size)),
        );
    }

    let by_sha: HashMap<&str, &LabeledSample> = merged
        .rows()
        .iter()
        .filter_map(|r| r.sha1.as_deref().map(|s| (s, r)))
        .collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for chain in chains {
        let sha = chain.principal.sha1.as_str();
        let Some(row) = by_sha.get(sha) else {
            skipped.push((sha.to_string(), "principal not in dataset".to_string()));
            continue;
        };
        if chain.parents.len() < g {
            skipped.push((sha.to_string(), format!("chain has {} of {g} parents", chain.parents.len())));
            continue;
        }
        let mut features: Vec<f64> = principal_idx.iter().map(|&j| row.features[j]).collect();
        for parent in &chain.parents[..g] {
            features.extend(parent.feature_values());
        }
        rows.push(LabeledSample {
            features,
            ..(*row).clone()
        });
    }
    let dataset = Dataset::new(
        columns,
        rows,
        format!("{} | variant {} with {g} parent generations", merged.provenance, spec.variant),
    )?;
    Ok(GenerationDataset { dataset, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::miner::{build_generation_chain, CommitSizeRecord, RecordStore};

    fn history(n: usize) -> Vec<CommitSizeRecord> {
        (0..n)
            .map(|i| {
                let mut r = CommitSizeRecord::empty(format!("c{i}"), (i > 0).then(|| format!("c{}", i - 1)), "p", 0);
                r.lines_added_by_added.gross = i as u64;
                r
            })
            .collect()
    }

    fn merged(shas: &[&str]) -> Dataset {
        let columns = vec![
            Column::new("kw_fix", ColumnRole::Keyword),
            Column::new("chg", ColumnRole::Change),
            Column::new("density", ColumnRole::Size),
        ];
        let rows = shas
            .iter()
            .map(|s| LabeledSample {
                sha1: Some(s.to_string()),
                project: None,
                message: None,
                features: vec![1.0, 2.0, 3.0],
                label: Some(Label::Adaptive),
            })
            .collect();
        Dataset::new(columns, rows, "m").unwrap()
    }

    fn spec(variant: Variant, g: usize) -> VariantSpec {
        VariantSpec {
            variant,
            generations: Generations::try_from(g).unwrap(),
        }
    }

    fn chains(store: &RecordStore, shas: &[&str], g: usize) -> Vec<GenerationChain> {
        shas.iter()
            .filter_map(|s| build_generation_chain(store, s, Generations::try_from(g).unwrap()).ok())
            .collect()
    }

    #[test]
    fn variant_b_one_generation() {
        let store = RecordStore::new(history(5));
        let out = build_generation_dataset(spec(Variant::B, 1), &chains(&store, &["c4"], 1), &merged(&["c4"])).unwrap();
        let names = out.dataset.feature_names();
        assert_eq!(names.len(), 1 + 22);
        assert_eq!(names[0], "density");
        assert!(names[1..].iter().all(|n| n.ends_with("_gen1")));
        // parent c3 has 3 lines added by added files
        let j = out.dataset.column_index("lines_added_by_added_g_gen1").unwrap();
        assert_eq!(out.dataset.rows()[0].features[j], 3.0);
    }

    #[test]
    fn variant_d_two_generations_has_no_keywords() {
        let store = RecordStore::new(history(5));
        let out = build_generation_dataset(spec(Variant::D, 2), &chains(&store, &["c4"], 2), &merged(&["c4"])).unwrap();
        let d = &out.dataset;
        assert!(d.columns().iter().all(|c| c.role != ColumnRole::Keyword));
        assert_eq!(d.columns().iter().filter(|c| c.name.contains("_gen")).count(), 44);
        assert_eq!(d.n_features(), 2 + 44);
    }

    #[test]
    fn short_chain_is_excluded() {
        let store = RecordStore::new(history(4));
        let three = chains(&store, &["c3"], 3);
        assert_eq!(three.len(), 1);
        let out = build_generation_dataset(spec(Variant::C, 8), &three, &merged(&["c3"])).unwrap();
        assert!(out.dataset.is_empty());
        assert_eq!(out.skipped.len(), 1);
    }

    #[test]
    fn unknown_principal_is_skipped() {
        let store = RecordStore::new(history(4));
        let out = build_generation_dataset(spec(Variant::A, 1), &chains(&store, &["c3"], 1), &merged(&["c1"])).unwrap();
        assert!(out.dataset.is_empty());
        assert_eq!(out.skipped[0].0, "c3");
    }
}
