//! Persistent memo table. Only finite entries are stored, each with its step,
//! and a document is accepted only if every step checks out.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::derivation::{check_step, ReplayError, Step};
use super::engine::{Engine, MemoEntry};
use super::{BoundValue, Limits, RuleSet};

pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the cache file when no flag is given.
pub const CACHE_ENV: &str = "CONNBOUND_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheDocument {
    pub version: u32,
    pub rules: RuleSet,
    pub limits: Limits,
    pub entries: Vec<CacheEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub step: Step,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache is not valid json: {0}")]
    Format(#[from] serde_json::Error),
    #[error("cache version {found} does not match {expected}")]
    Version { found: u32, expected: u32 },
    #[error("cache was built with different rules or limits")]
    Settings,
    #[error("cache entry failed to replay: {0}")]
    Replay(#[from] ReplayError),
}

impl Engine {
    pub fn to_cache_document(&self) -> CacheDocument {
        let mut entries: Vec<CacheEntry> = self
            .memo
            .values()
            .filter_map(|e| e.step.clone())
            .map(|step| CacheEntry { step })
            .collect();
        entries.sort_by(|a, b| a.step.key.cmp(&b.step.key));
        CacheDocument {
            version: CACHE_VERSION,
            rules: *self.rules(),
            limits: *self.limits(),
            entries,
        }
    }

    /// Adds every entry of `doc` to the memo, or nothing if any check fails.
    /// Returns the number of entries accepted.
    pub fn absorb(&mut self, doc: CacheDocument) -> Result<usize, CacheError> {
        if doc.version != CACHE_VERSION {
            return Err(CacheError::Version {
                found: doc.version,
                expected: CACHE_VERSION,
            });
        }
        if doc.rules != *self.rules() || doc.limits != *self.limits() {
            return Err(CacheError::Settings);
        }
        let mut values = HashMap::new();
        for e in &doc.entries {
            if values.insert(e.step.key.clone(), e.step.value.clone()).is_some() {
                return Err(ReplayError::Duplicate(e.step.key.clone()).into());
            }
        }
        for e in &doc.entries {
            check_step(&e.step, self.rules(), self.limits(), |k| values.get(k).cloned())?;
        }
        let n = doc.entries.len();
        for e in doc.entries {
            let value = BoundValue::Finite(e.step.value.clone());
            self.memo.insert(
                e.step.key.clone(),
                MemoEntry {
                    value,
                    step: Some(e.step),
                },
            );
        }
        Ok(n)
    }

    pub fn load_cache(&mut self, path: &Path) -> Result<usize, CacheError> {
        let text = fs::read_to_string(path)?;
        let doc: CacheDocument = serde_json::from_str(&text)?;
        self.absorb(doc)
    }

    pub fn save_cache(&self, path: &Path) -> Result<(), CacheError> {
        let text = serde_json::to_string(&self.to_cache_document())?;
        fs::write(path, text)?;
        Ok(())
    }
}
