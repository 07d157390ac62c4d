//! Run configuration shared by the commands.

use crate::CliError;
use fpx_core::todd_coxeter::Strategy;
use std::path::PathBuf;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_cosets: usize,
    pub max_index: usize,
    pub node_budget: u64,
    pub time_budget: Option<Duration>,
    pub threads: usize,
    pub strategy: Strategy,
    pub cache_dir: Option<PathBuf>,
    pub checkpoint_path: Option<PathBuf>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_cosets: 10_000_000,
            max_index: 2,
            node_budget: u64::MAX,
            time_budget: None,
            threads: 1,
            strategy: Strategy::Hlt,
            cache_dir: None,
            checkpoint_path: None,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_cosets == 0 {
            return Err(CliError::Config("max_cosets must be positive".into()));
        }
        if self.max_index == 0 {
            return Err(CliError::Config("max_index must be positive".into()));
        }
        if self.node_budget == 0 {
            return Err(CliError::Config("node budget must be positive".into()));
        }
        if self.time_budget == Some(Duration::ZERO) {
            return Err(CliError::Config("time budget must be positive".into()));
        }
        Ok(())
    }

    /// Cache directory: explicit flag first, then FPX_CACHE_DIR.
    pub fn effective_cache_dir(&self) -> Option<PathBuf> {
        if let Some(d) = &self.cache_dir {
            return Some(d.clone());
        }
        std::env::var_os("FPX_CACHE_DIR").map(PathBuf::from)
    }
}

/// Parse a duration of the form `90`, `90s`, `30m` or `12h`.
pub fn parse_duration(s: &str) -> Result<Duration, String> {
    let s = s.trim();
    let (num, mult) = match s.chars().last() {
        Some('s') => (&s[..s.len() - 1], 1),
        Some('m') => (&s[..s.len() - 1], 60),
        Some('h') => (&s[..s.len() - 1], 3600),
        Some(c) if c.is_ascii_digit() => (s, 1),
        _ => return Err(format!("bad duration `{}`", s)),
    };
    num.parse::<u64>()
        .map(|n| Duration::from_secs(n * mult))
        .map_err(|e| format!("bad duration `{}`: {}", s, e))
}

/// Parse a strategy name.
pub fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "hlt" => Ok(Strategy::Hlt),
        "felsch" => Ok(Strategy::Felsch),
        _ => Err(format!("unknown strategy `{}` (hlt, felsch)", s)),
    }
}
