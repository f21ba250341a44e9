//! On-disk cache for [`FactorTable`].
//!
//! Layout: the magic `XSPF1\0`, the limit as a little-endian u64, then
//! `limit + 1` little-endian u32 spf entries (0 marks positions 0 and 1).

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::FactorTable;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"XSPF1\0";
pub const CACHE_DIR_ENV: &str = "EXSIEVE_CACHE_DIR";

/// Cache directory from `EXSIEVE_CACHE_DIR`, if set and non-empty.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub fn cache_file_name(limit: u64) -> String {
    format!("spf_{limit}.bin")
}

pub fn write_table(path: &Path, table: &FactorTable) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&table.limit().to_le_bytes())?;
    for &p in table.raw_spf() {
        out.write_all(&p.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<FactorTable> {
    let corrupt = |reason: String| Error::CacheCorrupt {
        path: path.to_path_buf(),
        reason,
    };
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 14 || &bytes[..6] != MAGIC {
        return Err(corrupt("bad magic".into()));
    }
    let limit = u64::from_le_bytes(bytes[6..14].try_into().unwrap());
    let expected = limit
        .checked_add(1)
        .and_then(|n| n.checked_mul(4))
        .and_then(|n| n.checked_add(14));
    if limit < 2 || expected != Some(bytes.len() as u64) {
        return Err(corrupt(format!(
            "length {} does not match limit {limit}",
            bytes.len()
        )));
    }
    let spf: Vec<u32> = bytes[14..]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if spf[0] != 0 || spf[1] != 0 {
        return Err(corrupt("sentinel positions are not zero".into()));
    }
    Ok(FactorTable::from_spf(spf))
}

/// Loads the table from `dir` when a cache file exists, otherwise builds it
/// and (when `dir` is given) writes the cache.
pub fn load_or_build(limit: u64, dir: Option<&Path>) -> Result<FactorTable> {
    let Some(dir) = dir else {
        return FactorTable::build(limit);
    };
    let path = dir.join(cache_file_name(limit));
    if path.exists() {
        return read_table(&path);
    }
    let table = FactorTable::build(limit)?;
    fs::create_dir_all(dir)?;
    write_table(&path, &table)?;
    Ok(table)
}

/// Outcome of [`verify_cache`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheVerification {
    pub path: PathBuf,
    pub sampled: u64,
    pub mismatches: u64,
}

/// Re-derives a 1% random sample of spf entries by trial division.
pub fn verify_cache(path: &Path, seed: u64) -> Result<CacheVerification> {
    let table = read_table(path)?;
    let limit = table.limit();
    let sampled = (limit / 100).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for _ in 0..sampled {
        let n = rng.gen_range(2..=limit);
        let expect = (2..)
            .take_while(|p| p * p <= n)
            .find(|p| n % p == 0)
            .unwrap_or(n);
        if table.spf(n) != Some(expect) {
            mismatches += 1;
        }
    }
    Ok(CacheVerification {
        path: path.to_path_buf(),
        sampled,
        mismatches,
    })
}

/// Removes every `spf_*.bin` file in `dir`; returns how many were removed.
pub fn purge_cache(dir: &Path) -> Result<usize> {
    if !dir.exists() {
        return Ok(0);
    }
    let mut removed = 0;
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("spf_") && name.ends_with(".bin") {
            fs::remove_file(&path)?;
            removed += 1;
        }
    }
    Ok(removed)
}
