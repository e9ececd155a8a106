//! Chat-completion clients: the [`ChatClient`] contract, a scripted mock and a
//! live HTTP client.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Environment variable holding the API key of the live endpoint.
pub const API_KEY_ENV: &str = "TEMPQA_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: Role,
    pub content: String,
}

impl Message {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatParams {
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl Default for ChatParams {
    fn default() -> Self {
        Self {
            model: "gpt-4o".into(),
            temperature: 0.0,
            max_tokens: 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClientError {
    #[error("mock script exhausted after {served} replies")]
    ScriptExhausted { served: usize },
    #[error("environment variable {0} is not set")]
    MissingApiKey(&'static str),
    #[error("HTTP status {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    InvalidResponse(String),
    #[error("gave up after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: u32, last: String },
    #[error("invalid mock script: {0}")]
    InvalidScript(String),
}

/// A chat-completion backend. Implementations must be usable from several
/// threads; mocks keep their cursor behind a lock.
pub trait ChatClient: Send + Sync {
    fn complete(&self, messages: &[Message], params: &ChatParams) -> Result<String, ClientError>;
}

impl<T: ChatClient + ?Sized> ChatClient for &T {
    fn complete(&self, messages: &[Message], params: &ChatParams) -> Result<String, ClientError> {
        (**self).complete(messages, params)
    }
}

impl<T: ChatClient + ?Sized> ChatClient for Box<T> {
    fn complete(&self, messages: &[Message], params: &ChatParams) -> Result<String, ClientError> {
        (**self).complete(messages, params)
    }
}

// ---------------------------------------------------------------------------
// Scripted mock

/// One keyed entry: a reply served every time, or a queue served in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KeyedReply {
    Always(String),
    Queue(Vec<String>),
}

/// Mock script file contents: an ordered list of replies, or a map from a
/// substring of the latest user message to its reply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MockScript {
    Ordered(Vec<String>),
    Keyed(IndexMap<String, KeyedReply>),
}

impl MockScript {
    pub fn parse(text: &str) -> Result<Self, ClientError> {
        serde_json::from_str(text).map_err(|e| ClientError::InvalidScript(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ClientError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| ClientError::InvalidScript(format!("{}: {e}", path.as_ref().display())))?;
        Self::parse(&text)
    }
}

#[derive(Debug, Default)]
struct Cursor {
    served: usize,
    next: usize,
    keyed: HashMap<String, usize>,
}

/// Serves canned replies from a [`MockScript`]. For keyed scripts the first
/// key (in file order) contained in the latest user message wins.
#[derive(Debug)]
pub struct ScriptedClient {
    script: MockScript,
    cursor: Mutex<Cursor>,
}

impl ScriptedClient {
    pub fn new(script: MockScript) -> Self {
        Self {
            script,
            cursor: Mutex::new(Cursor::default()),
        }
    }

    pub fn ordered<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> Self {
        Self::new(MockScript::Ordered(replies.into_iter().map(Into::into).collect()))
    }

    pub fn served(&self) -> usize {
        self.cursor.lock().expect("mock cursor poisoned").served
    }
}

impl ChatClient for ScriptedClient {
    fn complete(&self, messages: &[Message], _params: &ChatParams) -> Result<String, ClientError> {
        let mut cur = self.cursor.lock().expect("mock cursor poisoned");
        let exhausted = ClientError::ScriptExhausted { served: cur.served };
        let reply = match &self.script {
            MockScript::Ordered(replies) => {
                let r = replies.get(cur.next).cloned().ok_or(exhausted)?;
                cur.next += 1;
                r
            }
            MockScript::Keyed(map) => {
                let prompt = messages
                    .iter()
                    .rev()
                    .find(|m| m.role == Role::User)
                    .map(|m| m.content.as_str())
                    .unwrap_or("");
                let (key, entry) = map.iter().find(|(k, _)| prompt.contains(k.as_str())).ok_or(exhausted.clone())?;
                match entry {
                    KeyedReply::Always(r) => r.clone(),
                    KeyedReply::Queue(q) => {
                        let i = cur.keyed.entry(key.clone()).or_default();
                        let r = q.get(*i).cloned().ok_or(exhausted)?;
                        *i += 1;
                        r
                    }
                }
            }
        };
        cur.served += 1;
        Ok(reply)
    }
}

// ---------------------------------------------------------------------------
// Live client

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiveConfig {
    /// Base URL of a chat-completions compatible API, e.g. `https://api.openai.com/v1`.
    pub base_url: String,
    pub max_retries: u32,
    pub initial_backoff: Duration,
    pub max_backoff: Duration,
    /// Minimum spacing between request starts.
    pub min_interval: Duration,
    pub timeout: Duration,
}

impl LiveConfig {
    pub fn new(base_url: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            max_retries: 4,
            initial_backoff: Duration::from_millis(500),
            max_backoff: Duration::from_secs(8),
            min_interval: Duration::from_millis(250),
            timeout: Duration::from_secs(120),
        }
    }

    /// Delay before retry number `attempt` (0-based).
    pub fn backoff(&self, attempt: u32) -> Duration {
        let factor = 1u32.checked_shl(attempt).unwrap_or(u32::MAX);
        self.initial_backoff.saturating_mul(factor).min(self.max_backoff)
    }
}

/// HTTP client for a chat-completions endpoint. The API key is read from
/// [`API_KEY_ENV`] only.
pub struct LiveClient {
    cfg: LiveConfig,
    api_key: String,
    agent: ureq::Agent,
    next_slot: Mutex<Instant>,
}

impl std::fmt::Debug for LiveClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LiveClient").field("cfg", &self.cfg).finish_non_exhaustive()
    }
}

enum Attempt {
    Retry(String),
    Fatal(ClientError),
}

impl LiveClient {
    pub fn from_env(cfg: LiveConfig) -> Result<Self, ClientError> {
        let api_key = std::env::var(API_KEY_ENV)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or(ClientError::MissingApiKey(API_KEY_ENV))?;
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(cfg.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(Self {
            cfg,
            api_key,
            agent,
            next_slot: Mutex::new(Instant::now()),
        })
    }

    fn pace(&self) {
        let wait = {
            let mut slot = self.next_slot.lock().expect("pacer poisoned");
            let now = Instant::now();
            let start = (*slot).max(now);
            *slot = start + self.cfg.min_interval;
            start - now
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }

    fn attempt(&self, body: &Value) -> Result<String, Attempt> {
        self.pace();
        let url = format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'));
        let mut resp = self
            .agent
            .post(&url)
            .header("Authorization", &format!("Bearer {}", self.api_key))
            .send_json(body)
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        let status = resp.status().as_u16();
        let text = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| Attempt::Retry(e.to_string()))?;
        if status == 429 || status >= 500 {
            return Err(Attempt::Retry(format!("HTTP status {status}")));
        }
        if status != 200 {
            return Err(Attempt::Fatal(ClientError::Http { status, body: text }));
        }
        parse_completion(&text).map_err(Attempt::Fatal)
    }
}

/// Pull the first choice's message content out of a completion response.
pub fn parse_completion(text: &str) -> Result<String, ClientError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ClientError::InvalidResponse(e.to_string()))?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| ClientError::InvalidResponse("missing choices[0].message.content".into()))
}

impl ChatClient for LiveClient {
    fn complete(&self, messages: &[Message], params: &ChatParams) -> Result<String, ClientError> {
        let body = json!({
            "model": params.model,
            "messages": messages,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        });
        let mut last = String::new();
        for attempt in 0..=self.cfg.max_retries {
            if attempt > 0 {
                std::thread::sleep(self.cfg.backoff(attempt - 1));
            }
            match self.attempt(&body) {
                Ok(reply) => return Ok(reply),
                Err(Attempt::Fatal(e)) => return Err(e),
                Err(Attempt::Retry(e)) => {
                    log::warn!("chat request failed (attempt {}): {e}", attempt + 1);
                    last = e;
                }
            }
        }
        Err(ClientError::RetriesExhausted {
            attempts: self.cfg.max_retries + 1,
            last,
        })
    }
}
