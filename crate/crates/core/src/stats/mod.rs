//! Descriptive statistics over commit sizes and the effort/productivity
//! formulas.

mod ecdf;
mod effort;
mod report;
mod summary;

pub use ecdf::{Ecdf, QuantilePoint, EIGHTHS};
pub use effort::{effort_metrics, EffortInputs, EffortMetrics};
pub use report::{
    stats_report, write_stats_bundle, StatsReport, COND_PROB_CSV, ECDF_DENSITY_CSV, STATS_JSON, SUMMARY_BY_LABEL_CSV,
};
pub use summary::{
    conditional_probability_table, density_one_share, median, observations_from_dataset, summary_stats,
    ConditionalProbabilityTable, ConditionalRow, Group, SizeMeasure, SizeObservation, SizePredicate, SummaryRow,
};
