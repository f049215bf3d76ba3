use std::fs;
use std::path::PathBuf;

use commit_density::dataset::{read_dataset_csv, schema_path};
use commit_density::miner::read_records_csv;
use commit_density::stats::{observations_from_dataset, stats_report, write_stats_bundle, SizeObservation, SizePredicate};
use serde_json::json;

use crate::config::{existing, usage, Context};
use crate::output::emit;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// A dataset CSV with its schema sidecar, or a records CSV from `extract`.
    #[arg(long)]
    pub input: PathBuf,
    /// Size predicates for the conditional tables, e.g. "x<1" "1<=x<2".
    #[arg(long, value_delimiter = ';')]
    pub predicates: Vec<String>,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let input = existing(&args.input, "input")?;
    let observations: Vec<SizeObservation> = if schema_path(&input).exists() {
        observations_from_dataset(&read_dataset_csv(&input)?)?
    } else {
        read_records_csv(fs::File::open(&input)?)?
            .iter()
            .filter(|r| !r.is_merge)
            .map(|r| SizeObservation::from_record(r, None))
            .collect()
    };
    let predicates = if args.predicates.is_empty() {
        SizePredicate::defaults()
    } else {
        args.predicates
            .iter()
            .map(|p| p.parse::<SizePredicate>())
            .collect::<Result<_, _>>()
            .map_err(|e| usage(e.to_string()))?
    };
    let report = stats_report(&observations, &predicates)?;
    let dir = ctx.out_dir()?;
    write_stats_bundle(&dir, &observations, &report)?;
    emit(json!({
        "command": "stats",
        "n": report.n,
        "n_labeled": report.n_labeled,
        "density_one_share": report.density_one_share,
        "density_ecdf_at_half": report.density_ecdf_at_half,
        "dir": dir,
    }))
}
