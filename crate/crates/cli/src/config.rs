use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use commit_density::dataset::{ColumnMapping, KeywordVocabulary};
use commit_density::learn::{CvPlan, LearnerConfig};
use commit_density::{seed, ProfileSet};
use serde::Deserialize;

/// Bad invocation or configuration; exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Fail with a usage error unless `path` exists.
pub fn existing(path: &Path, what: &str) -> anyhow::Result<PathBuf> {
    if path.exists() {
        Ok(path.to_path_buf())
    } else {
        Err(usage(format!("{what} {} does not exist", path.display())))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSection {
    pub train_fraction: Option<f64>,
    pub stratified: Option<bool>,
}

/// Contents of the `--config` TOML file. Relative paths are resolved
/// against the file's directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub repos: Vec<PathBuf>,
    pub profiles: Option<PathBuf>,
    pub keywords: Option<PathBuf>,
    pub mapping: Option<PathBuf>,
    pub cv: Option<CvPlan>,
    pub learner: Option<LearnerConfig>,
    pub split: SplitSection,
}

impl RunConfig {
    fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        cfg.repos.iter_mut().for_each(fix);
        cfg.out.iter_mut().for_each(fix);
        cfg.profiles.iter_mut().for_each(fix);
        cfg.keywords.iter_mut().for_each(fix);
        cfg.mapping.iter_mut().for_each(fix);
        Ok(cfg)
    }

    fn validate(&self) -> anyhow::Result<()> {
        for r in &self.repos {
            existing(r, "repository")?;
        }
        for (p, what) in [
            (&self.profiles, "profile set"),
            (&self.keywords, "keyword vocabulary"),
            (&self.mapping, "column mapping"),
        ] {
            if let Some(p) = p {
                existing(p, what)?;
            }
        }
        if self.jobs == Some(0) {
            return Err(usage("jobs must be at least 1"));
        }
        Ok(())
    }
}

/// Settings shared by all subcommands: command-line flags over the config
/// file over defaults.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    seed: Option<u64>,
    pub jobs: usize,
    pub out: PathBuf,
}

impl Context {
    pub fn resolve(
        config_path: Option<&Path>,
        seed: Option<u64>,
        jobs: Option<usize>,
        out: Option<PathBuf>,
    ) -> anyhow::Result<Context> {
        let config = match config_path {
            Some(p) => RunConfig::load(&existing(p, "config file")?)?,
            None => RunConfig::default(),
        };
        config.validate()?;
        let jobs = jobs
            .or(config.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            return Err(usage("--jobs must be at least 1"));
        }
        Ok(Context {
            seed: seed.or(config.seed),
            out: out.or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from(".")),
            jobs,
            config,
        })
    }

    /// Seed for one named component, derived from the base seed.
    pub fn seed_for(&self, component: &str) -> anyhow::Result<u64> {
        let base = self
            .seed
            .ok_or_else(|| usage("this command is stochastic: pass --seed or set `seed` in the config"))?;
        Ok(seed::derive(base, &[seed::tag(component)]))
    }

    /// Like `seed_for`, for steps whose result does not depend on the seed.
    pub fn seed_or_zero(&self, component: &str) -> u64 {
        self.seed.map_or(0, |base| seed::derive(base, &[seed::tag(component)]))
    }

    pub fn out_dir(&self) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.out)?;
        Ok(self.out.clone())
    }

    pub fn out_file(&self, name: &str) -> anyhow::Result<PathBuf> {
        Ok(self.out_dir()?.join(name))
    }

    pub fn profiles(&self, flag: Option<&Path>) -> anyhow::Result<ProfileSet> {
        match flag.or(self.config.profiles.as_deref()) {
            Some(p) => Ok(ProfileSet::load(&existing(p, "profile set")?)?),
            None => Ok(ProfileSet::default()),
        }
    }

    pub fn vocabulary(&self, flag: Option<&Path>) -> anyhow::Result<Option<KeywordVocabulary>> {
        match flag.or(self.config.keywords.as_deref()) {
            Some(p) => Ok(Some(KeywordVocabulary::load(&existing(p, "keyword vocabulary")?)?)),
            None => Ok(None),
        }
    }

    pub fn mapping(&self, flag: Option<&Path>) -> anyhow::Result<ColumnMapping> {
        let path = flag
            .or(self.config.mapping.as_deref())
            .ok_or_else(|| usage("a column mapping is required (--mapping or `mapping` in the config)"))?;
        let text = fs::read_to_string(existing(path, "column mapping")?)?;
        Ok(ColumnMapping::from_toml_str(&text)?)
    }

    /// CV plan from the config with command-line overrides and a derived seed.
    pub fn cv_plan(&self, k: Option<usize>, repeats: Option<usize>, component: &str) -> anyhow::Result<CvPlan> {
        let mut plan = self.config.cv.clone().unwrap_or_default();
        if let Some(k) = k {
            plan.k = k;
        }
        if let Some(r) = repeats {
            plan.repeats = r;
        }
        plan.seed = self.seed_for(component)?;
        Ok(plan)
    }
}
