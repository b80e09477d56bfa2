//! Isogeny-class labels from the LMFDB, resolved to validated Weil
//! polynomials.
//!
//! Lookups go memory, then the on-disk cache, then the records bundled with
//! the crate, then the network. Anything fetched live is checked against the
//! polynomial decoded from the label before it is cached.

pub mod cache;
pub mod client;
pub mod codec;
pub mod record;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Duration;

pub use cache::DiskCache;
pub use client::{ClientConfig, HttpClient, DEFAULT_BASE_URL};
pub use codec::{decode_code, encode_code, label_to_polynomial, polynomial_to_label, IsogenyClassLabel};
pub use record::{ClassFixture, RemoteMetadata, SourceTag};

mod bundled {
    include!(concat!(env!("OUT_DIR"), "/bundled.rs"));
}

#[derive(Debug, thiserror::Error)]
pub enum LmfdbError {
    #[error("malformed code '{code}': {reason}")]
    MalformedCode { code: String, reason: String },
    #[error("malformed label '{label}': {reason}")]
    MalformedLabel { label: String, reason: String },
    #[error("label {label} does not decode to a Weil polynomial: {reason}")]
    WeilValidationFailed { label: String, reason: String },
    #[error("coefficients of {0} do not fit in 64 bits")]
    CoefficientOverflow(String),
    #[error("network unavailable: {0}")]
    NetworkUnavailable(String),
    #[error("remote record for {label} has coefficients {remote:?}, label decodes to {local:?}")]
    RemoteMismatch { label: String, local: Vec<i64>, remote: Vec<i64> },
    #[error("no isogeny class {0}")]
    NotFound(String),
    #[error("unexpected response: {0}")]
    Protocol(String),
    #[error("unreadable record: {0}")]
    CorruptRecord(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Clone, Debug)]
pub struct LmfdbConfig {
    pub offline: bool,
    pub cache_dir: Option<PathBuf>,
    pub client: ClientConfig,
    /// Concurrent requests in [`Resolver::fetch_many`].
    pub max_concurrency: usize,
}

impl Default for LmfdbConfig {
    fn default() -> Self {
        LmfdbConfig { offline: false, cache_dir: None, client: ClientConfig::default(), max_concurrency: 4 }
    }
}

impl LmfdbConfig {
    pub fn offline() -> Self {
        LmfdbConfig { offline: true, ..Default::default() }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.client.timeout = timeout;
        self
    }
}

/// Labels of every bundled record, sorted.
pub fn bundled_labels() -> Vec<&'static str> {
    bundled::BUNDLED.iter().map(|(label, _)| *label).collect()
}

pub fn bundled_record(label: &str) -> Option<Result<ClassFixture, LmfdbError>> {
    bundled::BUNDLED
        .iter()
        .find(|(l, _)| *l == label)
        .map(|(_, text)| ClassFixture::from_text(text))
}

pub struct Resolver {
    config: LmfdbConfig,
    memory: Mutex<HashMap<String, ClassFixture>>,
    http: OnceLock<Result<HttpClient, String>>,
}

impl Resolver {
    pub fn new(config: LmfdbConfig) -> Self {
        Resolver { config, memory: Mutex::new(HashMap::new()), http: OnceLock::new() }
    }

    pub fn config(&self) -> &LmfdbConfig {
        &self.config
    }

    fn disk(&self) -> Option<DiskCache> {
        self.config.cache_dir.as_ref().map(DiskCache::new)
    }

    pub fn fetch_class(&self, label: &str) -> Result<ClassFixture, LmfdbError> {
        let parsed: IsogenyClassLabel = label.parse()?;
        let key = parsed.to_string();
        if let Some(rec) = self.memory.lock().unwrap().get(&key) {
            return Ok(rec.clone());
        }
        let rec = self.resolve_uncached(&parsed)?;
        self.memory.lock().unwrap().insert(key, rec.clone());
        Ok(rec)
    }

    fn resolve_uncached(&self, label: &IsogenyClassLabel) -> Result<ClassFixture, LmfdbError> {
        let key = label.to_string();
        if let Some(disk) = self.disk() {
            if let Some(rec) = disk.load(label)? {
                rec.polynomial()?;
                return Ok(rec);
            }
        }
        if let Some(rec) = bundled_record(&key) {
            let rec = rec?;
            rec.polynomial()?;
            return Ok(rec);
        }
        if self.config.offline {
            return Err(LmfdbError::NetworkUnavailable(format!(
                "{key} is not cached or bundled and offline mode is on; drop --offline to query the database"
            )));
        }
        let client = self
            .http
            .get_or_init(|| HttpClient::new(self.config.client.clone()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(|e| LmfdbError::NetworkUnavailable(e.clone()))?;
        let remote = client.fetch(&key)?;
        // validate against the local decode before anything is persisted
        remote.polynomial()?;
        if let Some(disk) = self.disk() {
            disk.store(&remote)?;
        }
        Ok(remote)
    }

    /// Fetch several labels with at most `max_concurrency` in flight.
    pub fn fetch_many(&self, labels: &[&str]) -> Vec<Result<ClassFixture, LmfdbError>> {
        let workers = self.config.max_concurrency.clamp(1, labels.len().max(1));
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<Result<ClassFixture, LmfdbError>>>> =
            labels.iter().map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= labels.len() {
                        break;
                    }
                    *slots[i].lock().unwrap() = Some(self.fetch_class(labels[i]));
                });
            }
        });
        slots.into_iter().map(|s| s.into_inner().unwrap().expect("every slot filled")).collect()
    }
}

/// One-shot lookup with a fresh resolver.
pub fn fetch_class(label: &str, config: &LmfdbConfig) -> Result<ClassFixture, LmfdbError> {
    Resolver::new(config.clone()).fetch_class(label)
}
