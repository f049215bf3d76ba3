use std::path::PathBuf;

use commit_density::dataset::vertical_split;
use commit_density::learn::{rfe, Model, RfePlan};
use commit_density::FeatureGroup;
use serde_json::json;

use super::{load_dataset, LearnerArgs, LearnerKind};
use crate::config::Context;
use crate::output::{csv_writer, emit, write_json};

pub const RFE_PROFILE_CSV: &str = "rfe_profile.csv";
pub const RFE_JSON: &str = "rfe.json";
pub const RFE_MODEL_JSON: &str = "rfe_model.json";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Dataset CSV (with schema sidecar) from `merge`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value = "combined")]
    pub group: FeatureGroup,
    /// Candidate subset sizes, ascending (default: 1..=p).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Learner refit on each subset.
    #[arg(long, value_enum, default_value = "forest")]
    pub learner: LearnerKind,
    #[command(flatten)]
    pub hyper: LearnerArgs,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let data = vertical_split(&load_dataset(&args.data)?, args.group)?;
    let sizes = if args.sizes.is_empty() {
        (1..=data.n_features()).collect()
    } else {
        args.sizes.clone()
    };
    let learner = args.hyper.build(ctx, args.learner, ctx.seed_for("rfe-learner")?);
    let cv = ctx.cv_plan(args.k, args.repeats, "rfe")?;
    let mut plan = RfePlan::new(sizes, cv, learner);
    plan.ranker.seed = ctx.seed_for("rfe-ranker")?;
    let result = rfe(&data, &plan)?;

    let profile = ctx.out_file(RFE_PROFILE_CSV)?;
    let mut w = csv_writer(&profile)?;
    w.write_record(["size", "accuracy", "kappa", "accuracy_sd", "selected"])?;
    for step in &result.profile {
        w.write_record([
            step.size.to_string(),
            step.report.accuracy_total.to_string(),
            step.report.kappa.map_or_else(|| "NA".to_string(), |k| k.to_string()),
            step.report.sd_fold_accuracy().map_or_else(|| "NA".to_string(), |s| s.to_string()),
            (step.size == result.champion_size).to_string(),
        ])?;
    }
    w.flush()?;

    let model_path = ctx.out_file(RFE_MODEL_JSON)?;
    Model::Single(result.model.clone()).save(&model_path)?;
    write_json(
        &ctx.out_file(RFE_JSON)?,
        &json!({
            "plan": plan,
            "champion_size": result.champion_size,
            "champion_features": result.champion_features,
            "selection_counts": result.selection_counts,
            "profile": result.profile,
        }),
    )?;
    let champion = result.champion_report();
    emit(json!({
        "command": "rfe",
        "champion_size": result.champion_size,
        "champion_features": result.champion_features,
        "accuracy": champion.accuracy_total,
        "kappa": champion.kappa,
        "profile": profile,
        "model": model_path,
    }))
}
