//! Optional TOML configuration shared by all subcommands.
//!
//! ```toml
//! lexicon = "data/lexicon.tsv"
//! lexicon_format = "lemma-hash-pos"   # or "three-column"; detected if absent
//! phrase_lexicon = "data/phrases.tsv"
//! annotation = "auto"                 # "auto" | "conllu" | "fallback"
//! threads = 4
//! seed = 42
//! verbosity = 1
//!
//! [backend]
//! kind = "mock"                       # "mock" | "http"
//! mock_table = "data/mock_table.tsv"
//! endpoint = "https://mt.example/translate"
//! token_env = "MT_API_TOKEN"
//! batch_size = 32
//! max_retries = 2
//! retry_backoff_ms = 200
//! timeout_secs = 30
//! in_flight = 4
//! max_consecutive_failures = 3
//! ```
//!
//! Unknown keys are rejected. Command-line flags take precedence.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::LexiconFormat;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TierPreference {
    #[default]
    Auto,
    Conllu,
    Fallback,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Mock,
    Http,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: Option<BackendKind>,
    pub mock_table: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub token_env: Option<String>,
    pub batch_size: Option<usize>,
    pub max_retries: Option<usize>,
    pub retry_backoff_ms: Option<u64>,
    pub timeout_secs: Option<u64>,
    pub in_flight: Option<usize>,
    pub max_consecutive_failures: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub lexicon: Option<PathBuf>,
    pub lexicon_format: Option<LexiconFormat>,
    pub phrase_lexicon: Option<PathBuf>,
    pub annotation: Option<TierPreference>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub verbosity: Option<u8>,
    #[serde(default)]
    pub backend: BackendConfig,
}

impl CliConfig {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Input(format!("{source_name}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::read(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }
}
