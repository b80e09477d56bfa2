//! Blocking JSON client for the abelian-variety isogeny-class collection.

use std::time::Duration;

use serde::Deserialize;

use crate::record::{ClassFixture, RemoteMetadata, SourceTag};
use crate::LmfdbError;

pub const DEFAULT_BASE_URL: &str = "https://www.lmfdb.org/api";
pub const COLLECTION: &str = "av_fq_isog";

#[derive(Clone, Debug)]
pub struct ClientConfig {
    pub base_url: String,
    pub timeout: Duration,
    /// Retries after the first attempt, for connection failures, 429 and 5xx.
    pub retries: u32,
    pub backoff: Duration,
}

impl Default for ClientConfig {
    fn default() -> Self {
        ClientConfig {
            base_url: DEFAULT_BASE_URL.to_string(),
            timeout: Duration::from_secs(20),
            retries: 3,
            backoff: Duration::from_millis(250),
        }
    }
}

#[derive(Deserialize)]
struct Page {
    data: Vec<Row>,
}

#[derive(Deserialize)]
struct Row {
    label: String,
    poly: Vec<i64>,
    #[serde(default)]
    angle_rank: Option<u32>,
    #[serde(default)]
    p_rank: Option<u32>,
    #[serde(default)]
    galois_groups: Option<Vec<String>>,
}

pub struct HttpClient {
    config: ClientConfig,
    inner: reqwest::blocking::Client,
}

enum Attempt {
    Done(Result<ClassFixture, LmfdbError>),
    Retry(String),
}

impl HttpClient {
    pub fn new(config: ClientConfig) -> Result<Self, LmfdbError> {
        let inner = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .user_agent(concat!("abvar/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| LmfdbError::NetworkUnavailable(e.to_string()))?;
        Ok(HttpClient { config, inner })
    }

    pub fn url_for(&self, label: &str) -> String {
        format!(
            "{}/{}/?label={}&_format=json&_fields=label,poly,angle_rank,p_rank,galois_groups",
            self.config.base_url.trim_end_matches('/'),
            COLLECTION,
            label
        )
    }

    /// Raw remote record; the caller checks it against the local decode.
    pub fn fetch(&self, label: &str) -> Result<ClassFixture, LmfdbError> {
        let mut last = String::new();
        for attempt in 0..=self.config.retries {
            if attempt > 0 {
                std::thread::sleep(self.config.backoff * 2u32.saturating_pow(attempt - 1));
            }
            match self.attempt(label) {
                Attempt::Done(r) => return r,
                Attempt::Retry(why) => last = why,
            }
        }
        Err(LmfdbError::NetworkUnavailable(format!(
            "{last} (after {} attempts; use --offline to rely on bundled fixtures)",
            self.config.retries + 1
        )))
    }

    fn attempt(&self, label: &str) -> Attempt {
        let resp = match self.inner.get(self.url_for(label)).send() {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = resp.status();
        if status.is_server_error() || status.as_u16() == 429 {
            return Attempt::Retry(format!("server answered {status}"));
        }
        if status.as_u16() == 404 {
            return Attempt::Done(Err(LmfdbError::NotFound(label.to_string())));
        }
        if !status.is_success() {
            return Attempt::Done(Err(LmfdbError::Protocol(format!("server answered {status}"))));
        }
        let page: Page = match resp.json() {
            Ok(p) => p,
            Err(e) => return Attempt::Done(Err(LmfdbError::Protocol(e.to_string()))),
        };
        let Some(row) = page.data.into_iter().find(|r| r.label == label) else {
            return Attempt::Done(Err(LmfdbError::NotFound(label.to_string())));
        };
        Attempt::Done(Ok(ClassFixture {
            label: row.label,
            coefficients: row.poly,
            metadata: RemoteMetadata { angle_rank: row.angle_rank, galois_groups: row.galois_groups, p_rank: row.p_rank },
            source: SourceTag::Live,
        }))
    }
}
