use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ecdf::{Ecdf, QuantilePoint, EIGHTHS};
use super::summary::{
    conditional_probability_table, share_of_ones, summary_stats, ConditionalProbabilityTable, SizeMeasure,
    SizeObservation, SizePredicate, SummaryRow,
};
use crate::dataset::pearson;
use crate::error::{Error, Result};

pub const ECDF_DENSITY_CSV: &str = "ecdf_density.csv";
pub const COND_PROB_CSV: &str = "cond_prob.csv";
pub const SUMMARY_BY_LABEL_CSV: &str = "summary_by_label.csv";
pub const STATS_JSON: &str = "stats.json";

/// Everything the `stats` command reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n: usize,
    pub n_labeled: usize,
    pub density_one_share: f64,
    /// Density ECDF evaluated at 0.5.
    pub density_ecdf_at_half: f64,
    pub density_quantiles: Vec<QuantilePoint>,
    pub loc_gross_quantiles: Vec<QuantilePoint>,
    pub loc_net_quantiles: Vec<QuantilePoint>,
    /// Pearson correlation of gross and net file counts.
    pub corr_files_gross_net: Option<f64>,
    /// Pearson correlation of gross and net line counts.
    pub corr_loc_gross_net: Option<f64>,
    pub summary: Vec<SummaryRow>,
    /// Present only when every observation is labeled.
    pub conditional: Vec<ConditionalProbabilityTable>,
}

fn column(obs: &[SizeObservation], f: impl Fn(&SizeObservation) -> f64) -> Vec<f64> {
    obs.iter().map(f).collect()
}

/// Density ECDF, size quantiles, summaries and, for fully labeled input,
/// conditional probability tables.
pub fn stats_report(observations: &[SizeObservation], predicates: &[SizePredicate]) -> Result<StatsReport> {
    if observations.is_empty() {
        return Err(Error::invalid("no observations"));
    }
    let density = Ecdf::new(&column(observations, |o| o.density))?;
    let loc_gross = column(observations, |o| o.loc_gross);
    let loc_net = column(observations, |o| o.loc_net);
    let n_labeled = observations.iter().filter(|o| o.label.is_some()).count();
    let conditional = if n_labeled == observations.len() {
        SizeMeasure::ALL
            .iter()
            .map(|&m| conditional_probability_table(observations, m, predicates))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let mut ps = vec![0.1];
    ps.extend(EIGHTHS);
    Ok(StatsReport {
        n: observations.len(),
        n_labeled,
        density_one_share: share_of_ones(observations.iter().map(|o| o.density)),
        density_ecdf_at_half: density.eval(0.5),
        density_quantiles: density.quantiles(&ps),
        loc_gross_quantiles: Ecdf::new(&loc_gross)?.quantiles(&ps),
        loc_net_quantiles: Ecdf::new(&loc_net)?.quantiles(&ps),
        corr_files_gross_net: pearson(
            &column(observations, |o| o.files_gross),
            &column(observations, |o| o.files_net),
        ),
        corr_loc_gross_net: pearson(&loc_gross, &loc_net),
        summary: summary_stats(observations),
        conditional,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Write the tidy CSVs and the JSON summary into `dir`.
pub fn write_stats_bundle(dir: &Path, observations: &[SizeObservation], report: &StatsReport) -> Result<()> {
    fs::create_dir_all(dir)?;

    let density = Ecdf::new(&column(observations, |o| o.density))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join(ECDF_DENSITY_CSV))?;
    w.write_record(["density", "ecdf"])?;
    for (x, f) in density.steps() {
        w.write_record([x.to_string(), f.to_string()])?;
    }
    w.flush()?;

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join(COND_PROB_CSV))?;
    w.write_record([
        "measure",
        "label",
        "predicate",
        "support",
        "count",
        "label_total",
        "p_label_given_predicate",
        "p_predicate_given_label",
    ])?;
    for t in &report.conditional {
        for r in &t.rows {
            w.write_record([
                t.measure.to_string(),
                r.label.to_string(),
                r.predicate.to_string(),
                r.support.to_string(),
                r.count.to_string(),
                r.label_total.to_string(),
                opt(r.p_label_given_predicate),
                opt(r.p_predicate_given_label),
            ])?;
        }
    }
    w.flush()?;

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(dir.join(SUMMARY_BY_LABEL_CSV))?;
    w.write_record(["measure", "group", "statistic", "value"])?;
    for r in &report.summary {
        let stats = [
            ("n", r.n as f64),
            ("mean", r.mean),
            ("median", r.median),
            ("min", r.min),
            ("max", r.max),
        ];
        for (name, v) in stats {
            w.write_record([r.measure.to_string(), r.group.to_string(), name.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;

    fs::write(dir.join(STATS_JSON), serde_json::to_string_pretty(report)? + "\n")?;
    Ok(())
}
