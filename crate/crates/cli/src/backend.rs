//! Choosing the chat client for a run: a live endpoint or one of the mocks.

use std::path::PathBuf;
use std::time::Duration;

use tempqa_pipeline::orchestrator::{ChatParams, ClientError, LiveClient, LiveConfig, MockScript};

use crate::config::FileConfig;
use crate::{BackendArgs, CliError, CliResult};

pub const DEFAULT_PARALLELISM: usize = 4;

#[derive(Debug)]
pub enum Mock {
    Oracle,
    Random(u64),
    Script(MockScript),
}

#[derive(Debug)]
pub enum Backend {
    Live(LiveClient),
    Mock(Mock),
}

#[derive(Debug)]
pub struct Resolved {
    pub backend: Backend,
    pub params: ChatParams,
    /// Jobs in flight; always 1 for mocks.
    pub parallelism: usize,
}

/// Exactly one of `--mock` and an endpoint must be given. A `--mock` flag
/// wins over a `base_url` from the config file. The live client is built
/// (and the API key checked) before any request is made.
pub fn resolve(a: &BackendArgs, cfg: &FileConfig) -> CliResult<Resolved> {
    let defaults = ChatParams::default();
    let params = ChatParams {
        model: cfg.pick(a.model.clone(), "model", defaults.model)?,
        temperature: cfg.pick(a.temperature, "temperature", defaults.temperature)?,
        max_tokens: cfg.pick(a.max_tokens, "max_tokens", defaults.max_tokens)?,
    };
    if let Some(m) = &a.mock {
        let mock = match m.as_str() {
            "oracle" => Mock::Oracle,
            "random" => Mock::Random(cfg.pick(a.seed, "seed", 0)?),
            path => Mock::Script(
                MockScript::load(PathBuf::from(path)).map_err(|e| CliError::Usage(e.to_string()))?,
            ),
        };
        return Ok(Resolved {
            backend: Backend::Mock(mock),
            params,
            parallelism: 1,
        });
    }
    let base_url = match &a.base_url {
        Some(u) => u.clone(),
        None => cfg.raw("base_url").map(str::to_string).ok_or_else(|| {
            CliError::Usage("give either --mock or an endpoint (--base-url, or base_url in the config file)".into())
        })?,
    };
    let defaults = LiveConfig::new(base_url);
    let live = LiveConfig {
        max_retries: cfg.pick(None, "max_retries", defaults.max_retries)?,
        timeout: Duration::from_secs(cfg.pick(None, "timeout_secs", defaults.timeout.as_secs())?),
        min_interval: Duration::from_millis(cfg.pick(
            None,
            "min_interval_ms",
            defaults.min_interval.as_millis() as u64,
        )?),
        ..defaults
    };
    let client = LiveClient::from_env(live).map_err(|e| match e {
        ClientError::MissingApiKey(_) => CliError::Usage(format!("configuration error: {e}")),
        other => CliError::Domain(other.into()),
    })?;
    Ok(Resolved {
        backend: Backend::Live(client),
        params,
        parallelism: cfg.pick(a.parallelism, "parallelism", DEFAULT_PARALLELISM)?.max(1),
    })
}
