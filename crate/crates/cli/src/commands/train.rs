use std::path::PathBuf;

use clap::ValueEnum;
use commit_density::dataset::{split, vertical_split, SplitPlan};
use commit_density::learn::{
    cross_validate, evaluate, evaluate_compound, train_compound, CompoundSpec, EvalReport, LearnerConfig, Model,
    VoteMode,
};
use commit_density::{Dataset, FeatureGroup};
use serde::Serialize;
use serde_json::json;

use super::{load_dataset, LearnerArgs, LearnerKind};
use crate::config::{usage, Context};
use crate::output::{emit, write_json};

pub const MODEL_JSON: &str = "model.json";
pub const TRAIN_REPORT_JSON: &str = "train_report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelType {
    Zeror,
    Forest,
    Logitboost,
    Compound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Vote {
    Routed,
    Combined,
}

impl From<Vote> for VoteMode {
    fn from(v: Vote) -> VoteMode {
        match v {
            Vote::Routed => VoteMode::Routed,
            Vote::Combined => VoteMode::Combined,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Dataset CSV (with schema sidecar) from `merge`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub model_type: ModelType,
    /// Feature group for single models.
    #[arg(long, default_value = "combined")]
    pub group: FeatureGroup,
    /// Left feature group of a compound model.
    #[arg(long, default_value = "keywords")]
    pub left: FeatureGroup,
    /// Right feature group of a compound model.
    #[arg(long, default_value = "combined")]
    pub right: FeatureGroup,
    /// Learner on both sides of a compound model.
    #[arg(long, value_enum, default_value = "forest")]
    pub learner: LearnerKind,
    /// How a compound model combines its sides when scored.
    #[arg(long, value_enum, default_value = "routed")]
    pub vote: Vote,
    /// Keyword vocabulary for compound routing.
    #[arg(long)]
    pub keywords: Option<PathBuf>,
    /// Hold out this fraction of rows (stratified) and score the model on it.
    #[arg(long)]
    pub holdout: Option<f64>,
    /// Also run repeated k-fold cross-validation on the training rows.
    #[arg(long)]
    pub cv: bool,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[command(flatten)]
    pub hyper: LearnerArgs,
}

#[derive(Debug, Serialize)]
struct TrainReport {
    model_type: &'static str,
    learner: LearnerConfig,
    features: Vec<String>,
    n_train: usize,
    n_test: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    vote: Option<VoteMode>,
    /// Resubstitution performance on the training rows.
    training: EvalReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    holdout: Option<EvalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_validation: Option<EvalReport>,
}

fn learner(ctx: &Context, args: &Args, kind: LearnerKind, component: &str) -> anyhow::Result<LearnerConfig> {
    let seed = match kind {
        LearnerKind::Forest => ctx.seed_for(component)?,
        _ => ctx.seed_or_zero(component),
    };
    Ok(args.hyper.build(ctx, kind, seed))
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let data = load_dataset(&args.data)?;
    let (train, test) = match args.holdout.or(ctx.config.split.train_fraction.map(|f| 1.0 - f)) {
        Some(h) => {
            if !(h > 0.0 && h < 1.0) {
                return Err(usage(format!("holdout fraction {h} must lie strictly between 0 and 1")));
            }
            let plan = SplitPlan {
                train_fraction: 1.0 - h,
                stratified: ctx.config.split.stratified.unwrap_or(true),
                seed: ctx.seed_for("split")?,
            };
            let (a, b) = split(&data, &plan)?;
            (a, Some(b))
        }
        None => (data, None),
    };

    let (model, report) = match args.model_type {
        ModelType::Compound => {
            if args.cv {
                return Err(usage("--cv is not available for compound models"));
            }
            let vocab = ctx.vocabulary(args.keywords.as_deref())?.unwrap_or_default();
            let spec = CompoundSpec {
                left_group: args.left,
                left: learner(ctx, &args, args.learner, "train-left")?,
                right_group: args.right,
                right: learner(ctx, &args, args.learner, "train-right")?,
            };
            let model = train_compound(&spec, &vocab, &train)?;
            let mode = VoteMode::from(args.vote);
            let mut features = model.left.features.clone();
            features.extend(model.right.features.iter().filter(|f| !model.left.features.contains(f)).cloned());
            let report = TrainReport {
                model_type: "compound",
                learner: spec.left.clone(),
                features,
                n_train: train.len(),
                n_test: test.as_ref().map_or(0, Dataset::len),
                vote: Some(mode),
                training: evaluate_compound(&model, &train, mode)?,
                holdout: test.as_ref().map(|t| evaluate_compound(&model, t, mode)).transpose()?,
                cross_validation: None,
            };
            (Model::Compound(model), report)
        }
        single => {
            let kind = match single {
                ModelType::Zeror => LearnerKind::Zeror,
                ModelType::Forest => LearnerKind::Forest,
                _ => LearnerKind::Logitboost,
            };
            let cfg = learner(ctx, &args, kind, "train")?;
            let view = vertical_split(&train, args.group)?;
            let model = cfg.train(&view)?;
            let cross_validation = if args.cv {
                let plan = ctx.cv_plan(args.k, args.repeats, "cv")?;
                Some(cross_validate(&view, &cfg, &plan)?)
            } else {
                None
            };
            let report = TrainReport {
                model_type: cfg.name(),
                learner: cfg.clone(),
                features: model.features.clone(),
                n_train: train.len(),
                n_test: test.as_ref().map_or(0, Dataset::len),
                vote: None,
                training: evaluate(&model, &view)?,
                holdout: test.as_ref().map(|t| evaluate(&model, t)).transpose()?,
                cross_validation,
            };
            (Model::Single(model), report)
        }
    };

    let model_path = ctx.out_file(MODEL_JSON)?;
    model.save(&model_path)?;
    write_json(&ctx.out_file(TRAIN_REPORT_JSON)?, &report)?;
    let score = report.holdout.as_ref().or(report.cross_validation.as_ref()).unwrap_or(&report.training);
    emit(json!({
        "command": "train",
        "model_type": report.model_type,
        "n_train": report.n_train,
        "n_test": report.n_test,
        "accuracy": score.accuracy_total,
        "kappa": score.kappa,
        "model": model_path,
    }))
}

