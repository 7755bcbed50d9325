//! Eigenvalue cache file: one JSON document holding lists per model and
//! solver tolerance. Unreadable or inconsistent files are discarded and
//! rebuilt.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::potential::PotentialModel;
use crate::spectrum::{EigRecord, EigenCache};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CacheFile {
    schema: u32,
    entries: Vec<EigenCache>,
}

#[derive(Debug, Clone)]
pub struct EigenStore {
    path: PathBuf,
}

/// What loading found.
#[derive(Debug, Clone, PartialEq)]
pub enum CacheState {
    Missing,
    Valid(usize),
    Corrupt(String),
}

fn consistent(e: &EigenCache) -> bool {
    e.schema == EigenCache::SCHEMA
        && e.records.iter().enumerate().all(|(i, r)| r.index == i + 1 && r.lambda.is_finite() && r.residual.is_finite())
        && e.records.windows(2).all(|w| w[1].lambda > w[0].lambda)
}

impl EigenStore {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        EigenStore { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn read(&self) -> (Vec<EigenCache>, CacheState) {
        let text = match std::fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return (Vec::new(), CacheState::Missing),
            Err(e) => return (Vec::new(), CacheState::Corrupt(e.to_string())),
        };
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(f) if f.schema == EigenCache::SCHEMA && f.entries.iter().all(consistent) => {
                let n = f.entries.len();
                (f.entries, CacheState::Valid(n))
            }
            Ok(_) => (Vec::new(), CacheState::Corrupt("inconsistent contents".into())),
            Err(e) => (Vec::new(), CacheState::Corrupt(e.to_string())),
        }
    }

    pub fn state(&self) -> CacheState {
        self.read().1
    }

    /// The first `count` records for a matching entry, if any.
    pub fn lookup(&self, model: PotentialModel, solver_tol: f64, count: usize) -> Option<Vec<EigRecord>> {
        let (entries, _) = self.read();
        entries.into_iter().find(|e| e.covers(model, solver_tol, count)).map(|e| e.records[..count].to_vec())
    }

    /// Inserts the entry unless a longer list for the same model and
    /// tolerance exists; the file is replaced atomically.
    pub fn store(&self, entry: EigenCache) -> std::io::Result<()> {
        let (mut entries, _) = self.read();
        let same = |e: &EigenCache| e.model == entry.model && e.solver_tol == entry.solver_tol;
        if entries.iter().any(|e| same(e) && e.records.len() >= entry.records.len()) {
            return Ok(());
        }
        entries.retain(|e| !same(e));
        entries.push(entry);
        entries.sort_by(|a, b| a.model.name().cmp(b.model.name()).then(a.solver_tol.total_cmp(&b.solver_tol)));
        let text = serde_json::to_string_pretty(&CacheFile { schema: EigenCache::SCHEMA, entries })?;
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let tmp = self.path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, &self.path)
    }
}
