//! Run configuration: JSON file, then flags, then defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use entorder::measures::{MeasureId, OptimizerConfig};
use entorder::ordering::DEFAULT_DELTA;
use entorder::rng::SeedSpec;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "ENTORDER_SEED";

/// Why a run stopped; each kind has a fixed exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, bad config values, states or measures out of domain.
    Config(String),
    /// Files that cannot be read, written or parsed.
    Io(String),
    /// `selftest` found a broken invariant.
    Selftest(usize),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Selftest(_) => 1,
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Selftest(n) => write!(f, "selftest: {n} invariant(s) failed"),
        }
    }
}

impl From<entorder::Error> for Failure {
    fn from(e: entorder::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    #[default]
    Measure,
    Scan,
    Search,
    Witness,
    Selftest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything a run needs. Every field is optional in the JSON form;
/// unknown fields are rejected.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// Family or sampler spec, e.g. `werner:0.75`.
    pub state: Option<String>,
    pub state_file: Option<PathBuf>,
    /// Scan family name, e.g. `werner`.
    pub family: Option<String>,
    /// `start:stop:step`.
    pub grid: Option<String>,
    pub sampler: Option<String>,
    pub measures: Option<Vec<MeasureId>>,
    pub optimizer: Option<OptimizerConfig>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub delta: Option<f64>,
    pub pair_cap: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub strict: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            let msg = format!("{}: {e}", path.display());
            if e.is_data() {
                Failure::Config(msg)
            } else {
                Failure::Io(msg)
            }
        })
    }

    /// Fields set in `flags` win over fields set here.
    pub fn overlay(self, flags: RunConfig) -> Self {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        pick!(
            command, state, state_file, family, grid, sampler, measures, optimizer, seed, samples, delta, pair_cap,
            format, out, threads, strict
        )
    }

    /// Seed precedence: flag or config, then `ENTORDER_SEED`, then 0.
    pub fn resolved_seed(&self) -> Result<u64, Failure> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Config(format!("{SEED_ENV}='{v}' is not a nonnegative integer"))),
            Err(_) => Ok(0),
        }
    }

    pub fn optimizer(&self) -> Result<OptimizerConfig, Failure> {
        let base = self.optimizer.unwrap_or_default();
        let seed = self.resolved_seed()?;
        let cfg = base.with_seed(SeedSpec::new(seed, base.seed.stream_index));
        cfg.check()?;
        Ok(cfg)
    }

    pub fn measures(&self) -> Vec<MeasureId> {
        self.measures.clone().unwrap_or_else(|| vec![MeasureId::FormationClosedForm, MeasureId::RelativeEntropyPPT])
    }

    /// Exactly two measures, for the ordering commands.
    pub fn measure_pair(&self) -> Result<[MeasureId; 2], Failure> {
        let m = self.measures();
        <[MeasureId; 2]>::try_from(m.as_slice())
            .map_err(|_| Failure::Config(format!("ordering commands need exactly two measures, got {}", m.len())))
    }

    pub fn delta(&self) -> Result<f64, Failure> {
        let d = self.delta.unwrap_or(DEFAULT_DELTA);
        if d.is_finite() && d >= 0.0 {
            Ok(d)
        } else {
            Err(Failure::Config(format!("delta must be a nonnegative number, got {d}")))
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

/// Parses `eof,rel_ent`.
pub fn parse_measures(s: &str) -> Result<Vec<MeasureId>, String> {
    let ids: Vec<MeasureId> = s
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.parse::<MeasureId>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if ids.is_empty() {
        return Err("no measures given".into());
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_rejected_as_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.json");
        std::fs::write(&p, r#"{"command":"search","sampels":10}"#).unwrap();
        assert!(matches!(RunConfig::load(&p), Err(Failure::Config(_))));
        std::fs::write(&p, r#"{"command":"search""#).unwrap();
        assert!(matches!(RunConfig::load(&p), Err(Failure::Io(_))));
        std::fs::write(&p, r#"{"command":"search","samples":10,"optimizer":{"restarts":2}}"#).unwrap();
        let cfg = RunConfig::load(&p).unwrap();
        assert_eq!(cfg.samples, Some(10));
        assert_eq!(cfg.optimizer.unwrap().restarts, 2);
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig { samples: Some(10), delta: Some(0.1), ..Default::default() };
        let flags = RunConfig { samples: Some(20), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!((merged.samples, merged.delta), (Some(20), Some(0.1)));
    }

    #[test]
    fn measure_lists() {
        assert_eq!(parse_measures("eof,rel_ent").unwrap().len(), 2);
        assert!(parse_measures("eof,bogus").is_err());
        let cfg = RunConfig { measures: Some(vec![MeasureId::FormationClosedForm]), ..Default::default() };
        assert!(cfg.measure_pair().is_err());
    }
}
