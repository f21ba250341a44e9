//! Configuration, cache management, suites and CSV output for the CLI.

pub mod config;
pub mod csv;
pub mod suites;

use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, LoadedConfig, RunConfig};
pub use csv::CsvTable;
pub use suites::{
    decomposition_grid, run_suite, standard_decomposition_grid, DecompositionPoint, SuiteResult,
    SUITE_NAMES,
};

use crate::arith::FactorTable;
use crate::cache::{cache_file_name, purge_cache, verify_cache, write_table};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheAction {
    Build,
    Verify,
    Purge,
}

impl std::str::FromStr for CacheAction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "build" => Ok(Self::Build),
            "verify" => Ok(Self::Verify),
            "purge" => Ok(Self::Purge),
            other => Err(Error::InvalidArgument(format!(
                "unknown cache action `{other}`; expected build, verify or purge"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheStatus {
    Built {
        path: PathBuf,
    },
    Verified {
        path: PathBuf,
        sampled: u64,
        mismatches: u64,
    },
    Purged {
        removed: usize,
    },
}

impl CacheStatus {
    pub fn ok(&self) -> bool {
        !matches!(self, Self::Verified { mismatches, .. } if *mismatches > 0)
    }
}

/// Builds, verifies or purges the spf cache for `cfg.table_limit` in `dir`.
pub fn cache_manage(action: CacheAction, cfg: &RunConfig, dir: &Path) -> Result<CacheStatus> {
    let path = dir.join(cache_file_name(cfg.table_limit));
    match action {
        CacheAction::Build => {
            let table = FactorTable::build(cfg.table_limit)?;
            std::fs::create_dir_all(dir)?;
            write_table(&path, &table)?;
            Ok(CacheStatus::Built { path })
        }
        CacheAction::Verify => {
            let v = verify_cache(&path, cfg.seed)?;
            Ok(CacheStatus::Verified {
                path: v.path,
                sampled: v.sampled,
                mismatches: v.mismatches,
            })
        }
        CacheAction::Purge => Ok(CacheStatus::Purged {
            removed: purge_cache(dir)?,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_verify_purge() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::new(50_000, vec![-4], vec![1e4]);
        assert!(matches!(
            cache_manage(CacheAction::Build, &cfg, dir.path()).unwrap(),
            CacheStatus::Built { .. }
        ));
        let v = cache_manage(CacheAction::Verify, &cfg, dir.path()).unwrap();
        assert!(v.ok());
        assert_eq!(
            v,
            CacheStatus::Verified {
                path: dir.path().join("spf_50000.bin"),
                sampled: 500,
                mismatches: 0
            }
        );
        assert_eq!(
            cache_manage(CacheAction::Purge, &cfg, dir.path()).unwrap(),
            CacheStatus::Purged { removed: 1 }
        );
        assert_eq!(
            cache_manage(CacheAction::Purge, &cfg, dir.path()).unwrap(),
            CacheStatus::Purged { removed: 0 }
        );
        assert!(cache_manage(CacheAction::Verify, &cfg, dir.path()).is_err());
    }

    #[test]
    fn parses_actions() {
        assert_eq!(
            "verify".parse::<CacheAction>().unwrap(),
            CacheAction::Verify
        );
        assert!("wipe".parse::<CacheAction>().is_err());
    }
}
