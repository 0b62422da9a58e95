//! Persistent table of exact counts.
//!
//! The on-disk form is an append-only text file with one record per line,
//! `spec-string,kind,n,count`, e.g. `nn:d=2,animal,4,439`. Records are
//! immutable: writing a different count for an existing key is an error.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::enumeration::{count_subgraphs, BigCount, EnumOptions, Kind};
use crate::error::{Error, Result};
use crate::lattice::LatticeSpec;

type Key = (LatticeSpec, Kind, usize);

fn key_string(key: &Key) -> String {
    format!("{},{},{}", key.0, key.1, key.2)
}

#[derive(Debug, Default)]
pub struct CountTable {
    path: Option<PathBuf>,
    entries: BTreeMap<Key, BigCount>,
}

impl CountTable {
    /// A table that is never written to disk.
    pub fn in_memory() -> Self {
        CountTable::default()
    }

    /// Loads `path` if it exists; new records are appended to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut table = CountTable {
            path: None,
            entries: BTreeMap::new(),
        };
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let (key, count) = parse_line(line).ok_or_else(|| Error::CacheFormat {
                    line: i + 1,
                    content: line.to_string(),
                })?;
                table.insert(key, count)?;
            }
        }
        table.path = Some(path);
        Ok(table)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, spec: &LatticeSpec, kind: Kind, n: usize) -> Option<&BigCount> {
        self.entries.get(&(*spec, kind, n))
    }

    /// Returns whether the key was new.
    fn insert(&mut self, key: Key, count: BigCount) -> Result<bool> {
        match self.entries.get(&key) {
            Some(stored) if *stored == count => Ok(false),
            Some(stored) => Err(Error::CacheConflict {
                key: key_string(&key),
                stored: stored.to_string(),
                computed: count.to_string(),
            }),
            None => {
                self.entries.insert(key, count);
                Ok(true)
            }
        }
    }

    /// Stores a count, appending it to the backing file if it is new.
    pub fn record(&mut self, spec: &LatticeSpec, kind: Kind, n: usize, count: BigCount) -> Result<()> {
        let key = (*spec, kind, n);
        let line = format!("{},{}\n", key_string(&key), count);
        if self.insert(key, count)? {
            if let Some(path) = &self.path {
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(path)?
                    .write_all(line.as_bytes())?;
            }
        }
        Ok(())
    }

    /// Counts for `0..=n_max`, enumerating only when some entry is missing.
    /// Freshly computed values are checked against anything already stored.
    pub fn counts(
        &mut self,
        spec: &LatticeSpec,
        kind: Kind,
        n_max: usize,
        opts: &EnumOptions,
    ) -> Result<Vec<BigCount>> {
        let cached: Option<Vec<BigCount>> = (0..=n_max)
            .map(|n| self.get(spec, kind, n).cloned())
            .collect();
        if let Some(v) = cached {
            return Ok(v);
        }
        self.recompute(spec, kind, n_max, opts)
    }

    /// Enumerates unconditionally and reconciles with the table.
    pub fn recompute(
        &mut self,
        spec: &LatticeSpec,
        kind: Kind,
        n_max: usize,
        opts: &EnumOptions,
    ) -> Result<Vec<BigCount>> {
        let fresh = count_subgraphs(spec, kind, n_max, opts)?;
        for (n, c) in fresh.iter().enumerate() {
            self.record(spec, kind, n, c.clone())?;
        }
        Ok(fresh)
    }

    pub fn count(&mut self, spec: &LatticeSpec, kind: Kind, n: usize, opts: &EnumOptions) -> Result<BigCount> {
        if let Some(c) = self.get(spec, kind, n) {
            return Ok(c.clone());
        }
        Ok(self.counts(spec, kind, n, opts)?.swap_remove(n))
    }
}

fn parse_line(line: &str) -> Option<(Key, BigCount)> {
    let mut parts = line.trim().split(',');
    let spec: LatticeSpec = parts.next()?.parse().ok()?;
    let kind: Kind = parts.next()?.parse().ok()?;
    let n: usize = parts.next()?.parse().ok()?;
    let count: BigCount = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some(((spec, kind, n), count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn2() -> LatticeSpec {
        LatticeSpec::nearest_neighbour(2).unwrap()
    }

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        let opts = EnumOptions::default();
        let mut t = CountTable::open(&path).unwrap();
        let first = t.counts(&nn2(), Kind::Animal, 4, &opts).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("nn:d=2,animal,0,1\n"));

        let mut again = CountTable::open(&path).unwrap();
        assert_eq!(again.len(), 5);
        assert_eq!(again.counts(&nn2(), Kind::Animal, 4, &opts).unwrap(), first);
        assert_eq!(again.recompute(&nn2(), Kind::Animal, 4, &opts).unwrap(), first);
        // No duplicate lines after an identical recomputation.
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn conflicting_record_is_rejected() {
        let mut t = CountTable::in_memory();
        t.record(&nn2(), Kind::Tree, 1, 4u32.into()).unwrap();
        t.record(&nn2(), Kind::Tree, 1, 4u32.into()).unwrap();
        let err = t.record(&nn2(), Kind::Tree, 1, 5u32.into()).unwrap_err();
        assert!(matches!(err, Error::CacheConflict { .. }));
    }

    #[test]
    fn corrupted_cache_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        fs::write(&path, "nn:d=2,tree,1,5\n").unwrap();
        let mut t = CountTable::open(&path).unwrap();
        let err = t
            .recompute(&nn2(), Kind::Tree, 2, &EnumOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::CacheConflict { .. }));

        fs::write(&path, "nn:d=2,tree,one,5\n").unwrap();
        assert!(matches!(
            CountTable::open(&path).unwrap_err(),
            Error::CacheFormat { line: 1, .. }
        ));
    }
}
