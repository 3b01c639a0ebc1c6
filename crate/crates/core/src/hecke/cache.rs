use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use super::{HeckeAlgebra, HeckeElement};
use crate::affine_weyl::AffElem;
use crate::error::{Error, Result};

pub const CACHE_FILE: &str = "products.tsv";

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CacheStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
    pub loaded: usize,
}

/// Write-once memo of basis products `T_x T_y`.
pub struct ProductCache {
    tag: String,
    map: RwLock<HashMap<(AffElem, AffElem), Arc<HeckeElement>>>,
    fresh: RwLock<Vec<(AffElem, AffElem)>>,
    hits: AtomicU64,
    misses: AtomicU64,
    loaded: AtomicU64,
}

impl ProductCache {
    pub fn new(tag: String) -> Self {
        ProductCache {
            tag,
            map: RwLock::new(HashMap::new()),
            fresh: RwLock::new(Vec::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            loaded: AtomicU64::new(0),
        }
    }

    /// `type:params` key shared by every record of this algebra.
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn get(&self, x: &AffElem, y: &AffElem) -> Option<Arc<HeckeElement>> {
        let r = self.map.read().get(&(*x, *y)).cloned();
        if r.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        r
    }

    /// Inserts unless present; returns the stored value either way.
    pub fn insert(&self, x: AffElem, y: AffElem, h: Arc<HeckeElement>) -> Arc<HeckeElement> {
        let mut m = self.map.write();
        if let Some(old) = m.get(&(x, y)) {
            return old.clone();
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        m.insert((x, y), h.clone());
        self.fresh.write().push((x, y));
        h
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            entries: self.map.read().len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            loaded: self.loaded.load(Ordering::Relaxed) as usize,
        }
    }

    pub fn clear_memory(&self) {
        self.map.write().clear();
        self.fresh.write().clear();
    }
}

fn split_tag(tag: &str) -> (&str, &str) {
    tag.split_once(':').unwrap_or((tag, ""))
}

/// Cache directory from an explicit path or `PARAHORIC_CACHE_DIR`.
pub fn resolve_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| std::env::var_os("PARAHORIC_CACHE_DIR").map(PathBuf::from))
}

impl HeckeAlgebra {
    /// Loads records matching this algebra. Values are re-verified against
    /// the recomputed product when `verify` is set.
    pub fn load_cache(&self, dir: &Path, verify: bool) -> Result<usize> {
        let path = dir.join(CACHE_FILE);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        let (ty, param) = split_tag(self.products.tag());
        let mut n = 0;
        let mut map = self.products.map.write();
        for (lineno, line) in text.lines().enumerate() {
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 6 {
                return Err(Error::Integrity(format!("{}:{}: malformed record", path.display(), lineno + 1)));
            }
            if f[0] != ty || f[1] != param {
                continue;
            }
            let x = self.group.parse_word_record(f[3])?;
            let y = self.group.parse_word_record(f[4])?;
            let h = self.deserialize(f[5])?;
            if verify && self.right_mul_basis(&self.basis(&x), &y) != h {
                return Err(Error::Integrity(format!("{}:{}: stored product disagrees", path.display(), lineno + 1)));
            }
            if map.insert((x, y), Arc::new(h)).is_none() {
                n += 1;
            }
        }
        self.products.loaded.fetch_add(n as u64, Ordering::Relaxed);
        Ok(n)
    }

    /// Appends products computed since the last save, in a deterministic order.
    pub fn save_cache(&self, dir: &Path, cutoff: usize) -> Result<usize> {
        let mut fresh: Vec<(AffElem, AffElem)> = std::mem::take(&mut *self.products.fresh.write());
        if fresh.is_empty() {
            return Ok(0);
        }
        fs::create_dir_all(dir)?;
        let (ty, param) = split_tag(self.products.tag());
        let map = self.products.map.read();
        let mut lines: Vec<String> = fresh
            .drain(..)
            .map(|(x, y)| {
                format!(
                    "{ty}\t{param}\t{cutoff}\t{}\t{}\t{}\n",
                    self.group.word_record(&x),
                    self.group.word_record(&y),
                    self.serialize(&map[&(x, y)])
                )
            })
            .collect();
        lines.sort();
        let mut f = fs::OpenOptions::new().create(true).append(true).open(dir.join(CACHE_FILE))?;
        for l in &lines {
            f.write_all(l.as_bytes())?;
        }
        Ok(lines.len())
    }

    /// Fills the cache with `T_x T_y` for `ℓ(x) + ℓ(y) ≤ cutoff`.
    pub fn warm_cache(&self, cutoff: usize) -> usize {
        let ball = self.group.ball(cutoff);
        let lens: Vec<usize> = ball.iter().map(|x| self.group.length(x)).collect();
        let mut n = 0;
        for (x, lx) in ball.iter().zip(&lens) {
            for (y, ly) in ball.iter().zip(&lens) {
                if lx + ly <= cutoff {
                    self.basis_product(x, y);
                    n += 1;
                }
            }
        }
        n
    }
}

/// Record counts per `type` tag in a cache directory.
pub fn cache_summary(dir: &Path) -> Result<Vec<(String, String, usize)>> {
    let path = dir.join(CACHE_FILE);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut counts: std::collections::BTreeMap<(String, String), usize> = Default::default();
    for line in text.lines() {
        let mut it = line.split('\t');
        let ty = it.next().unwrap_or("").to_string();
        let p = it.next().unwrap_or("").to_string();
        *counts.entry((ty, p)).or_default() += 1;
    }
    Ok(counts.into_iter().map(|((a, b), n)| (a, b, n)).collect())
}

pub fn clear_cache(dir: &Path) -> Result<bool> {
    match fs::remove_file(dir.join(CACHE_FILE)) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(e.into()),
    }
}
