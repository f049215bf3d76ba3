use std::path::PathBuf;

use commit_density::dataset::{add_keyword_features, KeywordVocabulary};
use commit_density::learn::{Model, VoteMode};
use commit_density::miner::{walk_repo, WalkOptions};
use commit_density::{Dataset, Label, LabeledSample};
use serde_json::json;

use super::train::Vote;
use crate::config::{existing, usage, Context};
use crate::output::{csv_writer, emit};

pub const PREDICTIONS_CSV: &str = "predictions.csv";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Model JSON written by `train` or `rfe`.
    #[arg(long)]
    pub model: PathBuf,
    /// Repository whose commits are labeled.
    #[arg(long)]
    pub repo: Option<PathBuf>,
    /// Revision to start from (default: HEAD).
    #[arg(long)]
    pub branch: Option<String>,
    /// Label only the most recent N first-parent commits.
    #[arg(long)]
    pub max_commits: Option<usize>,
    #[arg(long)]
    pub project: Option<String>,
    /// Language profile set (TOML or JSON).
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Keyword vocabulary for single models that use `kw_` features.
    #[arg(long)]
    pub keywords: Option<PathBuf>,
    /// Vote mode for compound models.
    #[arg(long, value_enum, default_value = "routed")]
    pub vote: Vote,
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let model = Model::load(&existing(&args.model, "model")?)?;
    let repo = match &args.repo {
        Some(r) => existing(r, "repository")?,
        None => match ctx.config.repos.as_slice() {
            [r] => r.clone(),
            _ => return Err(usage("pass --repo (the config must list exactly one repository otherwise)")),
        },
    };
    let profiles = ctx.profiles(args.profiles.as_deref())?;
    let opts = WalkOptions {
        branch: args.branch.clone(),
        max_commits: args.max_commits,
        project: args.project.clone(),
    };
    let walked = walk_repo(&repo, &opts, &profiles)?;
    let commits: Vec<_> = walked.commits.iter().filter(|c| !c.record.is_merge).collect();
    let sized = Dataset::from_records(&walked.records())?;
    let rows: Vec<LabeledSample> = sized
        .rows()
        .iter()
        .zip(&commits)
        .map(|(r, c)| LabeledSample {
            message: Some(c.message.clone()),
            ..r.clone()
        })
        .collect();
    let data = Dataset::new(sized.columns().to_vec(), rows, format!("mined {}", repo.display()))?;

    let vocab = match &model {
        Model::Compound(m) => m.vocabulary.clone(),
        Model::Single(_) => ctx
            .vocabulary(args.keywords.as_deref())?
            .unwrap_or_else(KeywordVocabulary::default),
    };
    let data = add_keyword_features(&data, &vocab)?;

    let predictions: Vec<(Label, [f64; Label::COUNT], Option<String>)> = match &model {
        Model::Single(m) => {
            let probs = m.predict_proba_dataset(&data)?;
            m.predict_dataset(&data)?
                .into_iter()
                .zip(probs)
                .map(|(l, p)| (l, p, None))
                .collect()
        }
        Model::Compound(m) => m
            .predict_dataset(&data, VoteMode::from(args.vote))?
            .into_iter()
            .map(|p| {
                let side = p.side.map(|s| serde_json::to_value(s).unwrap().as_str().unwrap().to_string());
                (p.label, p.probabilities, side)
            })
            .collect(),
    };

    let path = ctx.out_file(PREDICTIONS_CSV)?;
    let mut w = csv_writer(&path)?;
    w.write_record(["sha1", "project", "predicted", "p_a", "p_c", "p_p", "side"])?;
    let mut counts = [0usize; Label::COUNT];
    for (row, (label, p, side)) in data.rows().iter().zip(&predictions) {
        counts[label.index()] += 1;
        w.write_record([
            row.sha1.clone().unwrap_or_default(),
            row.project.clone().unwrap_or_default(),
            label.to_string(),
            p[0].to_string(),
            p[1].to_string(),
            p[2].to_string(),
            side.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    emit(json!({
        "command": "predict",
        "model_type": model.kind(),
        "commits": predictions.len(),
        "merges_skipped": walked.commits.len() - commits.len(),
        "counts": {"a": counts[0], "c": counts[1], "p": counts[2]},
        "path": path,
    }))
}
