use std::fs;
use std::path::PathBuf;

use commit_density::dataset::{
    add_keyword_features, build_generation_dataset, correlation_filter, load_labeled_csv, merge_on_sha,
    variance_filter, write_dataset_csv, NearZeroRule, Variant, VariantSpec,
};
use commit_density::miner::{build_generation_chain, read_records_csv, Generations, RecordStore};
use commit_density::Dataset;
use log::info;
use serde_json::json;

use crate::config::{existing, usage, Context};
use crate::output::emit;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Labeled commits CSV.
    #[arg(long)]
    pub labeled: PathBuf,
    /// Column mapping TOML for the labeled CSV.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    /// Records CSV written by `extract`.
    #[arg(long)]
    pub mined: PathBuf,
    /// Keyword vocabulary; adds `kw_` indicator columns computed from messages.
    #[arg(long)]
    pub keywords: Option<PathBuf>,
    /// Build a generation dataset of this variant (A, B, C or D).
    #[arg(long, requires = "generations")]
    pub variant: Option<Variant>,
    /// Parent generations for `--variant`.
    #[arg(long, requires = "variant")]
    pub generations: Option<usize>,
    /// Drop features correlated above this cutoff (typically 0.75).
    #[arg(long)]
    pub drop_correlated: Option<f64>,
    /// Drop near-zero-variance features (constant ones are always dropped
    /// when this is set).
    #[arg(long)]
    pub drop_near_zero: bool,
    /// Output file name inside the output directory.
    #[arg(long, default_value = "dataset.csv")]
    pub name: String,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let mapping = ctx.mapping(args.mapping.as_deref())?;
    let loaded = load_labeled_csv(&existing(&args.labeled, "labeled CSV")?, &mapping)?;
    for r in &loaded.report.rejected {
        log::warn!("{}: line {}: {}", args.labeled.display(), r.line, r.reason);
    }
    let mut labeled = loaded.dataset;
    if let Some(vocab) = ctx.vocabulary(args.keywords.as_deref())? {
        labeled = add_keyword_features(&labeled, &vocab)?;
    }
    let records = read_records_csv(fs::File::open(existing(&args.mined, "mined records CSV")?)?)?;
    let mined = Dataset::from_records(&records)?;
    let mut data = merge_on_sha(&labeled, &mined)?;
    info!("{} labeled rows, {} merged", labeled.len(), data.len());

    let mut skipped = 0;
    if let (Some(variant), Some(g)) = (args.variant, args.generations) {
        let generations = Generations::try_from(g).map_err(|e| usage(e.to_string()))?;
        let shas: Vec<String> = data.rows().iter().filter_map(|r| r.sha1.clone()).collect();
        let store = RecordStore::new(records).with_labeled(shas.iter().cloned());
        let chains: Vec<_> = shas
            .iter()
            .filter_map(|s| build_generation_chain(&store, s, generations).ok())
            .collect();
        let built = build_generation_dataset(VariantSpec { variant, generations }, &chains, &data)?;
        skipped = shas.len() - built.dataset.len();
        data = built.dataset;
    }

    let mut dropped = Vec::new();
    if args.drop_near_zero {
        let (kept, removed) = variance_filter(&data, &NearZeroRule::default());
        data = kept;
        dropped.extend(removed);
    }
    if let Some(cutoff) = args.drop_correlated {
        if !(0.0..=1.0).contains(&cutoff) {
            return Err(usage(format!("--drop-correlated {cutoff} is outside [0, 1]")));
        }
        let filter = correlation_filter(&data, cutoff);
        data = data.select(&filter.kept)?;
        dropped.extend(filter.removed);
    }

    let path = ctx.out_file(&args.name)?;
    write_dataset_csv(&path, &data)?;
    emit(json!({
        "command": "merge",
        "rows": data.len(),
        "features": data.n_features(),
        "rejected": loaded.report.rejected.len(),
        "duplicates_dropped": loaded.report.duplicates_dropped,
        "chains_skipped": skipped,
        "dropped_features": dropped,
        "path": path,
    }))
}
