use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use commit_density::miner::{
    build_generation_chain, walk_repo, write_records_csv, Generations, RecordStore, WalkOptions,
};
use serde_json::json;

use crate::config::{existing, usage, Context};
use crate::output::{csv_writer, emit};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Repository to mine (default: the `repos` listed in the config).
    #[arg(long)]
    pub repo: Option<PathBuf>,
    /// Project name written into each record (default: directory name).
    #[arg(long)]
    pub project: Option<String>,
    /// Revision to start from (default: HEAD).
    #[arg(long)]
    pub branch: Option<String>,
    /// Keep only the most recent N first-parent commits.
    #[arg(long)]
    pub max_commits: Option<usize>,
    /// Language profile set (TOML or JSON).
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Also write generation chain tables for these depths, e.g. 1,2,3,5,8.
    #[arg(long, value_delimiter = ',')]
    pub generations: Vec<usize>,
}

fn chain_table(path: &Path, store: &RecordStore, principals: &[String], g: Generations) -> anyhow::Result<usize> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["principal".to_string(), "g".to_string()];
    header.extend((1..=g.get()).map(|i| format!("parent_{i}")));
    w.write_record(&header)?;
    let mut rows = 0;
    for sha in principals {
        if let Ok(chain) = build_generation_chain(store, sha, g) {
            let mut rec = vec![sha.clone(), g.to_string()];
            rec.extend(chain.parents.iter().map(|p| p.sha1.clone()));
            w.write_record(&rec)?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(rows)
}

pub fn run(ctx: &Context, args: Args) -> anyhow::Result<()> {
    let repos: Vec<PathBuf> = match &args.repo {
        Some(r) => vec![existing(r, "repository")?],
        None if !ctx.config.repos.is_empty() => ctx.config.repos.clone(),
        None => return Err(usage("no repository given (--repo or `repos` in the config)")),
    };
    if args.project.is_some() && repos.len() > 1 {
        return Err(usage("--project needs a single repository"));
    }
    let generations = args
        .generations
        .iter()
        .map(|&g| Generations::try_from(g))
        .collect::<Result<BTreeSet<_>, _>>()
        .map_err(|e| usage(e.to_string()))?;
    let profiles = ctx.profiles(args.profiles.as_deref())?;

    let mut records = Vec::new();
    let mut skipped_files = 0;
    for repo in &repos {
        let opts = WalkOptions {
            branch: args.branch.clone(),
            max_commits: args.max_commits,
            project: args.project.clone(),
        };
        let walked = walk_repo(repo, &opts, &profiles)?;
        skipped_files += walked.skipped_files;
        records.extend(walked.records());
    }

    // `--out x.csv` names the file; any other value is a directory.
    let (dir, file) = match ctx.out.extension() {
        Some(ext) if ext == "csv" => {
            let dir = ctx.out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            (dir.to_path_buf(), ctx.out.clone())
        }
        _ => (ctx.out.clone(), ctx.out.join("commits.csv")),
    };
    fs::create_dir_all(&dir)?;
    write_records_csv(fs::File::create(&file)?, &records)?;

    let principals: Vec<String> = records.iter().map(|r| r.sha1.clone()).collect();
    let store = RecordStore::new(records.iter().cloned());
    let mut chains = Vec::new();
    for g in generations {
        let path = dir.join(format!("chains_g{g}.csv"));
        let rows = chain_table(&path, &store, &principals, g)?;
        chains.push(json!({"generations": g.get(), "path": path, "rows": rows}));
    }
    emit(json!({
        "command": "extract",
        "records": records.len(),
        "merges": records.iter().filter(|r| r.is_merge).count(),
        "skipped_files": skipped_files,
        "path": file,
        "chains": chains,
    }))
}
