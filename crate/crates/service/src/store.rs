//! JSON files under a data directory. Problems are keyed by the SHA-256 of
//! their canonical JSON, bases by that of their problem id and base JSON,
//! sessions by UUID.

use std::io;
use std::path::{Path, PathBuf};

use qcsp::{CompileStats, Problem, QcspBase};
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

use crate::game::SessionState;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("{kind} `{id}` not found")]
    NotFound { kind: &'static str, id: String },
    #[error("corrupt {kind} file `{id}`: {message}")]
    Corrupt { kind: &'static str, id: String, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A compiled base and where it came from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BaseRecord {
    pub problem_id: String,
    pub propagation: String,
    pub stats: StatsDoc,
    pub base: Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub recursive_calls: u64,
    pub propagation_failures: u64,
    pub nodes: usize,
    pub unshared_nodes: u64,
}

impl From<CompileStats> for StatsDoc {
    fn from(s: CompileStats) -> Self {
        StatsDoc {
            recursive_calls: s.recursive_calls,
            propagation_failures: s.propagation_failures,
            nodes: s.nodes,
            unshared_nodes: s.unshared_nodes,
        }
    }
}

impl BaseRecord {
    pub fn base(&self) -> Result<QcspBase, StoreError> {
        QcspBase::from_json(&self.base.to_string()).map_err(|e| StoreError::Corrupt {
            kind: "base",
            id: self.problem_id.clone(),
            message: e.to_string(),
        })
    }
}

pub fn content_id(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug)]
pub struct FileStore {
    root: PathBuf,
}

impl FileStore {
    pub fn open(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        for dir in ["problems", "bases", "sessions"] {
            std::fs::create_dir_all(root.join(dir))?;
        }
        Ok(FileStore { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path(&self, kind: &str, id: &str) -> PathBuf {
        self.root.join(kind).join(format!("{id}.json"))
    }

    /// Writes through a temporary file so readers never see half a record.
    fn write(&self, kind: &str, id: &str, text: &str) -> io::Result<()> {
        let path = self.path(kind, id);
        let tmp = path.with_extension(format!("{}.tmp", uuid::Uuid::new_v4()));
        std::fs::write(&tmp, text)?;
        std::fs::rename(tmp, path)
    }

    fn read(&self, kind: &'static str, id: &str) -> Result<String, StoreError> {
        // ids are hex digests or UUIDs; anything else cannot name a file of ours
        if id.is_empty() || !id.chars().all(|c| c.is_ascii_hexdigit() || c == '-') {
            return Err(StoreError::NotFound { kind, id: id.into() });
        }
        std::fs::read_to_string(self.path(kind, id)).map_err(|e| match e.kind() {
            io::ErrorKind::NotFound => StoreError::NotFound { kind, id: id.into() },
            _ => StoreError::Io(e),
        })
    }

    fn parse<T: for<'de> Deserialize<'de>>(kind: &'static str, id: &str, text: &str) -> Result<T, StoreError> {
        serde_json::from_str(text).map_err(|e| StoreError::Corrupt { kind, id: id.into(), message: e.to_string() })
    }

    pub fn put_problem(&self, p: &Problem) -> Result<String, StoreError> {
        let text = p.to_json();
        let id = content_id(&text);
        self.write("problems", &id, &text)?;
        Ok(id)
    }

    pub fn problem(&self, id: &str) -> Result<Problem, StoreError> {
        let text = self.read("problems", id)?;
        Problem::from_json(&text).map_err(|e| StoreError::Corrupt {
            kind: "problem",
            id: id.into(),
            message: e.to_string(),
        })
    }

    pub fn put_base(&self, record: &BaseRecord) -> Result<String, StoreError> {
        // the same base may come from different problems; keep them apart
        let id = content_id(&format!("{}\n{}", record.problem_id, record.base));
        let text = serde_json::to_string(record).expect("base records serialize");
        self.write("bases", &id, &text)?;
        Ok(id)
    }

    pub fn base(&self, id: &str) -> Result<BaseRecord, StoreError> {
        let text = self.read("bases", id)?;
        Self::parse("base", id, &text)
    }

    pub fn put_session(&self, s: &SessionState) -> Result<(), StoreError> {
        let text = serde_json::to_string(s).expect("sessions serialize");
        Ok(self.write("sessions", &s.id, &text)?)
    }

    pub fn session(&self, id: &str) -> Result<SessionState, StoreError> {
        let text = self.read("sessions", id)?;
        Self::parse("session", id, &text)
    }
}
