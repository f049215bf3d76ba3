use std::path::{Path, PathBuf};

use commit_density::learn::{confusion_from, evaluate, evaluate_compound, EvalReport, Model};
use commit_density::Label;
use serde_json::json;

use super::load_dataset;
use super::train::Vote;
use crate::config::{existing, usage, Context};
use crate::output::{csv_writer, emit, write_json};

pub const CONFUSION_CSV: &str = "confusion.csv";
pub const EVAL_REPORT_JSON: &str = "eval_report.json";

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Model JSON written by `train` or `rfe`.
    #[arg(long, requires = "data", conflicts_with = "predictions")]
    pub model: Option<PathBuf>,
    /// Labeled dataset CSV to score the model on.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// CSV with `label` and `predicted` columns.
    #[arg(long, required_unless_present = "model")]
    pub predictions: Option<PathBuf>,
    /// Vote mode for compound models.
    #[arg(long, value_enum, default_value = "routed")]
    pub vote: Vote,
}

fn read_predictions(path: &Path) -> anyhow::Result<(Vec<Label>, Vec<Label>)> {
    let mut rdr = csv::Reader::from_path(existing(path, "predictions CSV")?)?;
    let header = rdr.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| usage(format!("{} has no `{name}` column", path.display())))
    };
    let (li, pi) = (col("label")?, col("predicted")?);
    let (mut truth, mut pred) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |j: usize| -> anyhow::Result<Label> {
            let raw = rec.get(j).unwrap_or("");
            raw.parse()
                .map_err(|e| anyhow::anyhow!("{} line {}: {e}", path.display(), i + 2))
        };
        truth.push(parse(li)?);
        pred.push(parse(pi)?);
    }
    Ok((truth, pred))
}

pub fn write_confusion(path: &Path, report: &EvalReport) -> anyhow::Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["label", "a", "c", "p"])?;
    for (l, row) in Label::ALL.iter().zip(report.confusion.iter()) {
        w.write_record([l.to_string(), row[0].to_string(), row[1].to_string(), row[2].to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let report = match (&args.model, &args.predictions) {
        (Some(model), _) => {
            let data = load_dataset(args.data.as_deref().expect("clap requires --data"))?;
            match Model::load(&existing(model, "model")?)? {
                Model::Single(m) => evaluate(&m, &data)?,
                Model::Compound(m) => evaluate_compound(&m, &data, args.vote.into())?,
            }
        }
        (None, Some(p)) => {
            let (truth, pred) = read_predictions(p)?;
            if truth.is_empty() {
                return Err(anyhow::anyhow!("{} has no rows", p.display()));
            }
            EvalReport::from_confusion(confusion_from(&truth, &pred))?
        }
        (None, None) => return Err(usage("pass --model with --data, or --predictions")),
    };
    let confusion = ctx.out_file(CONFUSION_CSV)?;
    write_confusion(&confusion, &report)?;
    write_json(&ctx.out_file(EVAL_REPORT_JSON)?, &report)?;
    emit(json!({
        "command": "evaluate",
        "n": report.n,
        "accuracy": report.accuracy_total,
        "accuracy_random": report.accuracy_random,
        "kappa": report.kappa,
        "confusion": confusion,
    }))
}
