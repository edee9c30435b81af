//! Machine-translation backends used by the round-trip stage.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::textproc::Lang;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BackendError {
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    #[error("backend protocol error: {0}")]
    Protocol(String),
    #[error("backend returned {got} translations for a batch of {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// A batch translator. Implementations must return exactly one output per
/// input, in input order, or fail the whole batch.
pub trait MtBackend: Send + Sync {
    fn name(&self) -> &str;

    fn translate(
        &self,
        batch: &[String],
        source: Lang,
        target: Lang,
    ) -> std::result::Result<Vec<String>, BackendError>;
}

/// Call `backend` and enforce the length contract.
pub(crate) fn translate_checked(
    backend: &dyn MtBackend,
    batch: &[String],
    source: Lang,
    target: Lang,
) -> std::result::Result<Vec<String>, BackendError> {
    let out = backend.translate(batch, source, target)?;
    if out.len() != batch.len() {
        return Err(BackendError::LengthMismatch {
            expected: batch.len(),
            got: out.len(),
        });
    }
    Ok(out)
}

/// Deterministic offline backend.
///
/// Looks each sentence up in an optional table keyed by
/// `(source code, target code, text)` and otherwise reverses the word order,
/// so a full round trip through the fallback restores the original sentence.
#[derive(Debug, Clone, Default)]
pub struct MockBackend {
    table: HashMap<(String, String, String), String>,
}

pub fn reverse_words(text: &str) -> String {
    text.split_whitespace().rev().collect::<Vec<_>>().join(" ")
}

impl MockBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: Lang, target: Lang, text: &str, translation: &str) {
        self.table.insert(
            (
                source.iso_code().to_string(),
                target.iso_code().to_string(),
                text.trim().to_string(),
            ),
            translation.to_string(),
        );
    }

    /// Table file: `src<TAB>tgt<TAB>text<TAB>translation`, codes `ar` / `en`.
    pub fn load_table(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        Self::parse_table(&text, &path.display().to_string())
    }

    pub fn parse_table(text: &str, source_name: &str) -> Result<Self> {
        let mut table = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with("# ") {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    format!("expected 4 columns, found {}", cols.len()),
                ));
            }
            for code in &cols[..2] {
                if *code != "ar" && *code != "en" {
                    return Err(Error::parse(
                        source_name,
                        i + 1,
                        format!("unknown language code `{code}`"),
                    ));
                }
            }
            table.insert(
                (cols[0].to_string(), cols[1].to_string(), cols[2].trim().to_string()),
                cols[3].to_string(),
            );
        }
        Ok(MockBackend { table })
    }
}

impl MtBackend for MockBackend {
    fn name(&self) -> &str {
        "mock"
    }

    fn translate(
        &self,
        batch: &[String],
        source: Lang,
        target: Lang,
    ) -> std::result::Result<Vec<String>, BackendError> {
        Ok(batch
            .iter()
            .map(|s| {
                let key = (
                    source.iso_code().to_string(),
                    target.iso_code().to_string(),
                    s.trim().to_string(),
                );
                self.table
                    .get(&key)
                    .cloned()
                    .unwrap_or_else(|| reverse_words(s))
            })
            .collect())
    }
}

/// Connection settings for [`HttpBackend`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HttpConfig {
    pub endpoint: String,
    /// Name of the environment variable holding the bearer token.
    #[serde(default)]
    pub token_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
}

fn default_timeout() -> u64 {
    30
}

#[derive(Serialize)]
struct HttpRequest<'a> {
    q: &'a [String],
    source: &'a str,
    target: &'a str,
    format: &'a str,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HttpResponse {
    Flat { translations: Vec<String> },
    Nested { data: NestedData },
}

#[derive(Deserialize)]
struct NestedData {
    translations: Vec<NestedItem>,
}

#[derive(Deserialize)]
struct NestedItem {
    #[serde(rename = "translatedText")]
    translated_text: String,
}

/// JSON-over-HTTP client.
///
/// Sends `POST {endpoint}` with body
/// `{"q": [...], "source": "ar", "target": "en", "format": "text"}` and an
/// optional `Authorization: Bearer <token>` header. Accepts either
/// `{"translations": [...]}` or `{"data": {"translations": [{"translatedText": ...}]}}`.
pub struct HttpBackend {
    endpoint: String,
    token: Option<String>,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(config: &HttpConfig) -> Result<Self> {
        let token = match &config.token_env {
            Some(var) => Some(std::env::var(var).map_err(|_| {
                Error::Input(format!("environment variable {var} (backend token) is not set"))
            })?),
            None => None,
        };
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpBackend {
            endpoint: config.endpoint.clone(),
            token,
            agent,
        })
    }
}

impl MtBackend for HttpBackend {
    fn name(&self) -> &str {
        "http"
    }

    fn translate(
        &self,
        batch: &[String],
        source: Lang,
        target: Lang,
    ) -> std::result::Result<Vec<String>, BackendError> {
        let body = HttpRequest {
            q: batch,
            source: source.iso_code(),
            target: target.iso_code(),
            format: "text",
        };
        let mut req = self.agent.post(&self.endpoint);
        if let Some(token) = &self.token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = req
            .send_json(&body)
            .map_err(|e| BackendError::Unavailable(e.to_string()))?;
        let status = resp.status();
        if !status.is_success() {
            return Err(BackendError::Unavailable(format!("HTTP status {status}")));
        }
        let parsed: HttpResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| BackendError::Protocol(e.to_string()))?;
        Ok(match parsed {
            HttpResponse::Flat { translations } => translations,
            HttpResponse::Nested { data } => data
                .translations
                .into_iter()
                .map(|t| t.translated_text)
                .collect(),
        })
    }
}
