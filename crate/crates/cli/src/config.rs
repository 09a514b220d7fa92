use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use serde::Deserialize;
use wkdyn::Schedule;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    #[default]
    DefaultMinimal,
    Explicit,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    ladder: LadderSection,
    #[serde(default)]
    output: OutputSection,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct LadderSection {
    #[serde(default)]
    policy: Policy,
    schedule_file: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    format: Option<Format>,
    precision: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    threads: Option<usize>,
}

/// Resolved settings for one invocation.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub schedule: Schedule,
    pub format: Format,
    /// Digits of the extra decimal column; presentation only.
    pub precision: Option<usize>,
    /// 0 leaves the pool size to rayon.
    pub threads: usize,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let file: FileConfig = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let schedule = match (file.ladder.policy, file.ladder.schedule_file) {
            (Policy::DefaultMinimal, None) => Schedule::DefaultMinimal,
            (Policy::DefaultMinimal, Some(_)) => bail!("schedule_file needs policy = \"explicit\""),
            (Policy::Explicit, None) => bail!("policy = \"explicit\" needs schedule_file"),
            (Policy::Explicit, Some(f)) => {
                let f = if f.is_relative() { path.parent().unwrap_or(Path::new(".")).join(f) } else { f };
                load_schedule(&f)?
            }
        };
        Ok(RunConfig {
            schedule,
            format: file.output.format.unwrap_or_default(),
            precision: file.output.precision,
            threads: file.run.threads.unwrap_or(0),
        })
    }
}

/// One `L[n]` per line starting at `n = 1`; blank lines and `#` comments
/// are skipped. Validated against `L[n] >= p[n-1]^2`.
pub fn load_schedule(path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path).with_context(|| format!("reading schedule {}", path.display()))?;
    let mut ls = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let l: BigInt = line
            .parse()
            .map_err(|_| wkdyn::Error::Parse { line: i + 1, msg: format!("not an integer: {line:?}") })?;
        ls.push(l);
    }
    if ls.is_empty() {
        bail!("schedule {} lists no levels", path.display());
    }
    let schedule = Schedule::Explicit(ls);
    schedule.validate()?;
    Ok(schedule)
}
