//! Content-addressed result cache. Keys are SHA-256 hashes of the canonical
//! presentation text together with the operation name and its parameters, so
//! a cached artifact can never be served for different inputs.

use crate::CliError;
use fpx_core::low_index::{LowIndexResult, SubgroupClass};
use fpx_core::todd_coxeter::CosetTable;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::PathBuf;

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: PathBuf) -> Result<Cache, CliError> {
        fs::create_dir_all(&dir)?;
        let probe = dir.join(".writable");
        fs::write(&probe, b"ok")?;
        fs::remove_file(&probe)?;
        Ok(Cache { dir })
    }

    pub fn lookup(&self, key: &str) -> Option<String> {
        fs::read_to_string(self.dir.join(format!("{}.json", key))).ok()
    }

    pub fn store(&self, key: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}.json", key));
        let tmp = self.dir.join(format!("{}.tmp", key));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

/// Hash of length-prefixed parts; prefixing keeps distinct part lists from
/// colliding by concatenation.
pub fn content_key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{:02x}", b));
    }
    out
}

#[derive(Serialize, Deserialize)]
pub struct LowIndexArtifact {
    pub version: u32,
    pub max_index: usize,
    pub nodes: u64,
    pub complete_tables: u64,
    pub classes: Vec<ClassArtifact>,
}

#[derive(Serialize, Deserialize)]
pub struct ClassArtifact {
    pub index: usize,
    pub table_hex: String,
}

fn to_hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(2 * bytes.len());
    for b in bytes {
        s.push_str(&format!("{:02x}", b));
    }
    s
}

fn from_hex(s: &str) -> Option<Vec<u8>> {
    if !s.len().is_multiple_of(2) {
        return None;
    }
    (0..s.len() / 2)
        .map(|i| u8::from_str_radix(&s[2 * i..2 * i + 2], 16).ok())
        .collect()
}

impl LowIndexArtifact {
    pub fn pack(max_index: usize, res: &LowIndexResult) -> Result<LowIndexArtifact, CliError> {
        let mut classes = Vec::new();
        for c in &res.subgroups {
            let mut buf = Vec::new();
            c.table.write_binary(&mut buf)?;
            classes.push(ClassArtifact {
                index: c.index,
                table_hex: to_hex(&buf),
            });
        }
        Ok(LowIndexArtifact {
            version: 1,
            max_index,
            nodes: res.stats.nodes,
            complete_tables: res.stats.complete_tables,
            classes,
        })
    }

    pub fn unpack(&self) -> Result<Vec<SubgroupClass>, CliError> {
        let mut out = Vec::new();
        for c in &self.classes {
            let bytes = from_hex(&c.table_hex)
                .ok_or_else(|| CliError::Config("corrupt cache artifact".into()))?;
            let table = CosetTable::read_binary(&bytes[..])?;
            out.push(SubgroupClass {
                index: c.index,
                table,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_stable_and_distinct() {
        let a = content_key(&["x", "y"]);
        let b = content_key(&["x", "y"]);
        let c = content_key(&["xy"]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn hex_round_trips() {
        let bytes = vec![0u8, 1, 0xab, 0xff];
        assert_eq!(from_hex(&to_hex(&bytes)).unwrap(), bytes);
        assert!(from_hex("0g").is_none());
        assert!(from_hex("abc").is_none());
    }

    #[test]
    fn store_and_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().to_path_buf()).unwrap();
        let key = content_key(&["demo"]);
        assert!(cache.lookup(&key).is_none());
        cache.store(&key, "{\"v\":1}").unwrap();
        assert_eq!(cache.lookup(&key).unwrap(), "{\"v\":1}");
    }
}
