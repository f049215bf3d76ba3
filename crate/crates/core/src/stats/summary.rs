use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::miner::CommitSizeRecord;

/// The four notions of commit size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeMeasure {
    FilesGross,
    FilesNet,
    LocGross,
    LocNet,
}

impl SizeMeasure {
    pub const ALL: [SizeMeasure; 4] = [
        SizeMeasure::FilesGross,
        SizeMeasure::FilesNet,
        SizeMeasure::LocGross,
        SizeMeasure::LocNet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SizeMeasure::FilesGross => "files_gross",
            SizeMeasure::FilesNet => "files_net",
            SizeMeasure::LocGross => "loc_gross",
            SizeMeasure::LocNet => "loc_net",
        }
    }
}

impl fmt::Display for SizeMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SizeMeasure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SizeMeasure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown size measure {s:?}")))
    }
}

/// Per-commit sizes used by the descriptive statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeObservation {
    pub label: Option<Label>,
    pub files_gross: f64,
    pub files_net: f64,
    pub loc_gross: f64,
    pub loc_net: f64,
    pub density: f64,
}

impl SizeObservation {
    pub fn from_record(record: &CommitSizeRecord, label: Option<Label>) -> SizeObservation {
        SizeObservation {
            label,
            files_gross: record.gross_files() as f64,
            files_net: record.net_files() as f64,
            loc_gross: record.gross_lines() as f64,
            loc_net: record.net_lines() as f64,
            density: record.density,
        }
    }

    pub fn get(&self, m: SizeMeasure) -> f64 {
        match m {
            SizeMeasure::FilesGross => self.files_gross,
            SizeMeasure::FilesNet => self.files_net,
            SizeMeasure::LocGross => self.loc_gross,
            SizeMeasure::LocNet => self.loc_net,
        }
    }
}

/// Size observations from a table carrying the mined size columns.
pub fn observations_from_dataset(dataset: &Dataset) -> Result<Vec<SizeObservation>> {
    let sum_of = |prefix: &str, suffix: &str| -> Result<Vec<usize>> {
        let idx: Vec<usize> = dataset
            .columns()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.name.starts_with(prefix) && c.name.ends_with(suffix))
            .map(|(j, _)| j)
            .collect();
        let expected = if prefix == "files_" { 4 } else { 6 };
        if idx.len() != expected {
            return Err(Error::Schema(format!(
                "expected {expected} {prefix}*{suffix} columns, found {}",
                idx.len()
            )));
        }
        Ok(idx)
    };
    let files_g = sum_of("files_", "_g")?;
    let files_n = sum_of("files_", "_n")?;
    let lines_g = sum_of("lines_", "_g")?;
    let lines_n = sum_of("lines_", "_n")?;
    let density = dataset
        .column_index("density")
        .ok_or_else(|| Error::Schema("missing column \"density\"".into()))?;
    let total = |f: &[f64], idx: &[usize]| idx.iter().map(|&j| f[j]).sum::<f64>();
    Ok(dataset
        .rows()
        .iter()
        .map(|r| SizeObservation {
            label: r.label,
            files_gross: total(&r.features, &files_g),
            files_net: total(&r.features, &files_n),
            loc_gross: total(&r.features, &lines_g),
            loc_net: total(&r.features, &lines_n),
            density: r.features[density],
        })
        .collect())
}

/// Share of non-merge commits whose density is exactly 1. Zero for an empty
/// input.
pub fn density_one_share(records: &[CommitSizeRecord]) -> f64 {
    share_of_ones(records.iter().filter(|r| !r.is_merge).map(|r| r.density))
}

pub(crate) fn share_of_ones(densities: impl Iterator<Item = f64>) -> f64 {
    let (ones, n) = densities.fold((0usize, 0usize), |(o, n), d| (o + usize::from(d == 1.0), n + 1));
    if n == 0 {
        0.0
    } else {
        ones as f64 / n as f64
    }
}

/// Median with the two middle values averaged for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

/// Grouping of a summary row: one label or all observations. Serialized as
/// `a`, `c`, `p` or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Group {
    Label(Label),
    All,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Label(l) => write!(f, "{l}"),
            Group::All => f.write_str("all"),
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            Ok(Group::All)
        } else {
            s.parse().map(Group::Label)
        }
    }
}

impl From<Group> for String {
    fn from(g: Group) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for Group {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub measure: SizeMeasure,
    pub group: Group,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

/// Mean, median, min and max per size measure, for each label present and
/// for all observations pooled.
pub fn summary_stats(observations: &[SizeObservation]) -> Vec<SummaryRow> {
    let mut groups: Vec<Group> = Label::ALL
        .iter()
        .filter(|&&l| observations.iter().any(|o| o.label == Some(l)))
        .map(|&l| Group::Label(l))
        .collect();
    groups.push(Group::All);
    let mut out = Vec::new();
    for m in SizeMeasure::ALL {
        for &g in &groups {
            let v: Vec<f64> = observations
                .iter()
                .filter(|o| g == Group::All || Some(g) == o.label.map(Group::Label))
                .map(|o| o.get(m))
                .collect();
            let Some(med) = median(&v) else { continue };
            out.push(SummaryRow {
                measure: m,
                group: g,
                n: v.len(),
                mean: v.iter().sum::<f64>() / v.len() as f64,
                median: med,
                min: v.iter().copied().fold(f64::INFINITY, f64::min),
                max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            });
        }
    }
    out
}

/// Half-open size interval `lower <= x < upper`; a missing bound is open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizePredicate {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl SizePredicate {
    pub fn new(lower: Option<f64>, upper: Option<f64>) -> SizePredicate {
        SizePredicate { lower, upper }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower.is_none_or(|l| x >= l) && self.upper.is_none_or(|u| x < u)
    }

    /// `x<1`, `1<=x<2` and `2<=x<5`.
    pub fn defaults() -> Vec<SizePredicate> {
        vec![
            SizePredicate::new(None, Some(1.0)),
            SizePredicate::new(Some(1.0), Some(2.0)),
            SizePredicate::new(Some(2.0), Some(5.0)),
        ]
    }
}

impl fmt::Display for SizePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lower, self.upper) {
            (None, None) => f.write_str("any"),
            (None, Some(u)) => write!(f, "x<{u}"),
            (Some(l), None) => write!(f, "x>={l}"),
            (Some(l), Some(u)) => write!(f, "{l}<=x<{u}"),
        }
    }
}

impl FromStr for SizePredicate {
    type Err = Error;

    /// Parses the forms produced by `Display`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad size predicate {s:?}")))
        };
        if t == "any" {
            return Ok(SizePredicate::new(None, None));
        }
        if let Some(u) = t.strip_prefix("x<") {
            return Ok(SizePredicate::new(None, Some(num(u)?)));
        }
        if let Some(l) = t.strip_prefix("x>=") {
            return Ok(SizePredicate::new(Some(num(l)?), None));
        }
        if let Some((l, u)) = t.split_once("<=x<") {
            return Ok(SizePredicate::new(Some(num(l)?), Some(num(u)?)));
        }
        Err(Error::invalid(format!("bad size predicate {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalRow {
    pub label: Label,
    pub predicate: SizePredicate,
    /// Observations satisfying the predicate.
    pub support: usize,
    /// Observations with this label satisfying the predicate.
    pub count: usize,
    /// Observations with this label.
    pub label_total: usize,
    /// `count / support`; `None` when the predicate has no support.
    pub p_label_given_predicate: Option<f64>,
    /// `count / label_total`; `None` when the label does not occur.
    pub p_predicate_given_label: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalProbabilityTable {
    pub measure: SizeMeasure,
    pub rows: Vec<ConditionalRow>,
}

/// Label/size-interval probabilities in both conditioning directions, one
/// row per (label, predicate) in label order.
pub fn conditional_probability_table(
    observations: &[SizeObservation],
    measure: SizeMeasure,
    predicates: &[SizePredicate],
) -> Result<ConditionalProbabilityTable> {
    let labels: Vec<Label> = observations
        .iter()
        .enumerate()
        .map(|(i, o)| o.label.ok_or_else(|| Error::invalid(format!("observation {i} has no label"))))
        .collect::<Result<_>>()?;
    let ratio = |a: usize, b: usize| (b > 0).then(|| a as f64 / b as f64);
    let mut rows = Vec::new();
    for label in Label::ALL {
        let label_total = labels.iter().filter(|&&l| l == label).count();
        for &predicate in predicates {
            let mut support = 0;
            let mut count = 0;
            for (o, &l) in observations.iter().zip(&labels) {
                if predicate.contains(o.get(measure)) {
                    support += 1;
                    count += usize::from(l == label);
                }
            }
            rows.push(ConditionalRow {
                label,
                predicate,
                support,
                count,
                label_total,
                p_label_given_predicate: ratio(count, support),
                p_predicate_given_label: ratio(count, label_total),
            });
        }
    }
    Ok(ConditionalProbabilityTable { measure, rows })
}
