use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use log::{debug, warn};
use rayon::prelude::*;
use serde::Serialize;

use super::recursion::{compute_volume, dependencies};
use crate::error::{Error, Result};
use crate::exactpoly::VolumePolynomial;

/// Default cap on `3g − 3 + n`.
pub const DEFAULT_MAX_DIM: usize = 6;

/// Environment variable naming the on-disk cache directory.
pub const CACHE_DIR_ENV: &str = "WPVOL_CACHE_DIR";

/// Topological type `(g, n)` of a stable surface.
///
/// `n = 0` is admitted for closed surfaces of genus at least two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConfigKey {
    pub g: u32,
    pub n: usize,
}

impl ConfigKey {
    pub fn new(g: u32, n: usize) -> Result<Self> {
        if 2 * g as i64 - 2 + n as i64 > 0 {
            Ok(Self { g, n })
        } else {
            Err(Error::Unstable { g, n })
        }
    }

    pub(crate) fn unchecked(g: u32, n: usize) -> Self {
        Self { g, n }
    }

    /// Complex dimension `3g − 3 + n` of the moduli space.
    pub fn dimension(&self) -> usize {
        (3 * self.g as i64 - 3 + self.n as i64) as usize
    }

    /// `2g − 2 + n`, minus the Euler characteristic.
    pub fn complexity(&self) -> i64 {
        2 * self.g as i64 - 2 + self.n as i64
    }

    pub fn cache_file_name(&self) -> String {
        format!("vol_g{}_n{}.json", self.g, self.n)
    }

    /// All stable keys with `n ≥ 1` and `3g − 3 + n ≤ max_dim`.
    pub fn all_up_to(max_dim: usize) -> Vec<ConfigKey> {
        let mut keys = Vec::new();
        for g in 0..=(max_dim as u32 + 3) / 3 {
            for n in 1..=max_dim + 3 {
                if let Ok(k) = ConfigKey::new(g, n) {
                    if k.dimension() <= max_dim {
                        keys.push(k);
                    }
                }
            }
        }
        keys.sort_by_key(|k| (k.dimension(), k.g, k.n));
        keys
    }
}

impl fmt::Display for ConfigKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.g, self.n)
    }
}

/// What happened to a cache file while loading the table.
#[derive(Debug, Clone, PartialEq)]
pub enum CacheEvent {
    Loaded(ConfigKey),
    Written(ConfigKey),
    Corrupt { key: ConfigKey, reason: String },
}

/// Memoized volume polynomials, optionally backed by a directory of
/// `vol_g{g}_n{n}.json` files.
#[derive(Debug, Clone)]
pub struct VolumeTable {
    max_dim: usize,
    entries: BTreeMap<ConfigKey, VolumePolynomial>,
    cache_dir: Option<PathBuf>,
    events: Vec<CacheEvent>,
}

impl VolumeTable {
    pub fn new(max_dim: usize) -> Self {
        Self {
            max_dim,
            entries: BTreeMap::new(),
            cache_dir: None,
            events: Vec::new(),
        }
    }

    pub fn with_cache_dir(max_dim: usize, dir: impl Into<PathBuf>) -> Self {
        Self {
            cache_dir: Some(dir.into()),
            ..Self::new(max_dim)
        }
    }

    /// Uses `$WPVOL_CACHE_DIR` when it is set.
    pub fn from_env(max_dim: usize) -> Self {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::with_cache_dir(max_dim, dir),
            _ => Self::new(max_dim),
        }
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn events(&self) -> &[CacheEvent] {
        &self.events
    }

    pub fn get(&self, key: ConfigKey) -> Option<&VolumePolynomial> {
        self.entries.get(&key)
    }

    pub fn keys(&self) -> impl Iterator<Item = ConfigKey> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Replaces an entry without any validation (used to test that checks fail).
    #[cfg(test)]
    pub(crate) fn with_entry(mut self, key: ConfigKey, poly: VolumePolynomial) -> Self {
        self.entries.insert(key, poly);
        self
    }

    /// Returns `V_{g,n}`, computing (or loading) it and everything it depends on.
    pub fn volume(&mut self, g: u32, n: usize) -> Result<&VolumePolynomial> {
        let key = ConfigKey::new(g, n)?;
        self.ensure(key)?;
        Ok(&self.entries[&key])
    }

    pub fn ensure(&mut self, key: ConfigKey) -> Result<()> {
        if self.entries.contains_key(&key) {
            return Ok(());
        }
        let dim = key.dimension();
        if dim > self.max_dim {
            return Err(Error::DimensionCap {
                g: key.g,
                n: key.n,
                dim,
                cap: self.max_dim,
            });
        }
        for dep in dependencies(key) {
            self.ensure(dep)?;
        }
        if let Some(poly) = self.load(key) {
            self.entries.insert(key, poly);
            return Ok(());
        }
        let poly = compute_volume(key, self)?;
        self.store(key, poly)
    }

    /// Computes every `n ≥ 1` key up to the dimension cap, one dimension layer at a
    /// time; keys within a layer are independent and run in parallel.
    pub fn fill(&mut self) -> Result<()> {
        let keys = ConfigKey::all_up_to(self.max_dim);
        let max_layer = keys.iter().map(ConfigKey::dimension).max().unwrap_or(0);
        for layer in 0..=max_layer {
            let mut pending = Vec::new();
            for key in keys.iter().filter(|k| k.dimension() == layer) {
                if self.entries.contains_key(key) {
                    continue;
                }
                match self.load(*key) {
                    Some(poly) => {
                        self.entries.insert(*key, poly);
                    }
                    None => pending.push(*key),
                }
            }
            let table = &*self;
            let computed: Vec<(ConfigKey, Result<VolumePolynomial>)> = pending
                .par_iter()
                .map(|key| (*key, compute_volume(*key, table)))
                .collect();
            for (key, poly) in computed {
                self.store(key, poly?)?;
            }
        }
        Ok(())
    }

    fn store(&mut self, key: ConfigKey, poly: VolumePolynomial) -> Result<()> {
        debug!(
            "computed V_{{{},{}}} with {} monomials",
            key.g,
            key.n,
            poly.len()
        );
        if let Some(dir) = self.cache_dir.clone() {
            fs::create_dir_all(&dir)
                .map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
            let path = dir.join(key.cache_file_name());
            let tmp = dir.join(format!(".{}.tmp", key.cache_file_name()));
            fs::write(&tmp, poly.to_canonical_json())
                .and_then(|_| fs::rename(&tmp, &path))
                .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            self.events.push(CacheEvent::Written(key));
        }
        self.entries.insert(key, poly);
        Ok(())
    }

    fn load(&mut self, key: ConfigKey) -> Option<VolumePolynomial> {
        let path = self.cache_dir.as_ref()?.join(key.cache_file_name());
        let text = match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                self.corrupt(key, e.to_string());
                return None;
            }
        };
        match validate_cached(key, &text) {
            Ok(poly) => {
                self.events.push(CacheEvent::Loaded(key));
                Some(poly)
            }
            Err(reason) => {
                self.corrupt(key, reason);
                None
            }
        }
    }

    fn corrupt(&mut self, key: ConfigKey, reason: String) {
        warn!("cache entry for {key} is corrupt ({reason}); recomputing");
        self.events.push(CacheEvent::Corrupt { key, reason });
    }
}

fn validate_cached(key: ConfigKey, text: &str) -> std::result::Result<VolumePolynomial, String> {
    let poly = VolumePolynomial::from_canonical_json(text).map_err(|e| e.to_string())?;
    if poly.genus() != key.g || poly.nvars() != key.n {
        return Err(format!(
            "tag ({}, {}) does not match",
            poly.genus(),
            poly.nvars()
        ));
    }
    if !poly.is_symmetric() {
        return Err("not symmetric".into());
    }
    if !poly.respects_dimension_bound() {
        return Err("exceeds the dimension bound".into());
    }
    Ok(poly)
}

/// Every stable `(g, n)` with `n ≥ 1` and `3g − 3 + n ≤ max_dim`, using
/// `$WPVOL_CACHE_DIR` when set.
pub fn volume_table_up_to(max_dim: usize) -> Result<VolumeTable> {
    if max_dim < 1 {
        return Err(Error::Domain("max_dim must be at least 1".into()));
    }
    let mut table = VolumeTable::from_env(max_dim);
    table.fill()?;
    Ok(table)
}

/// As [`volume_table_up_to`] with an explicit cache directory.
pub fn volume_table_in(max_dim: usize, dir: impl Into<PathBuf>) -> Result<VolumeTable> {
    if max_dim < 1 {
        return Err(Error::Domain("max_dim must be at least 1".into()));
    }
    let mut table = VolumeTable::with_cache_dir(max_dim, dir);
    table.fill()?;
    Ok(table)
}
