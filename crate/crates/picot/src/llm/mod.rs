//! Chat-completion interface with two backends: a live HTTP client speaking
//! the OpenAI-compatible wire protocol and a deterministic scripted backend
//! for tests and replay. Also owns prompt construction and token accounting.

mod http;
mod prompts;
mod script;

pub use http::{HttpBackend, HttpConfig};
pub use prompts::{
    build_query_generation_prompt, build_slice_prompt, extract_answer_span,
    parse_query_generation_response, question_line, GenerationParse,
};
pub use script::{ScriptBackend, ScriptEntry};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Role of an LLM call, used for ledger records and script matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallTag {
    QueryGen,
    Slice,
    Final,
}

impl CallTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CallTag::QueryGen => "querygen",
            CallTag::Slice => "slice",
            CallTag::Final => "final",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum DecodeMode {
    Greedy,
    Sample { top_p: f64 },
}

#[derive(Debug, Clone)]
pub struct LlmRequest {
    pub prompt: String,
    pub max_tokens: u32,
    pub temperature: f64,
    pub decode: DecodeMode,
    pub tag: CallTag,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub cached_tokens: u64,
}

impl Usage {
    pub fn add(&mut self, other: &Usage) {
        self.prompt_tokens += other.prompt_tokens;
        self.completion_tokens += other.completion_tokens;
        self.cached_tokens += other.cached_tokens;
    }

    pub fn total_tokens(&self) -> u64 {
        self.prompt_tokens + self.completion_tokens
    }
}

#[derive(Debug, Clone)]
pub struct LlmResponse {
    pub text: String,
    pub usage: Usage,
}

#[derive(Debug, Error)]
pub enum LlmError {
    /// Network-level failure after exhausting retries. Aborts the question.
    #[error("transport: {0}")]
    Transport(String),
    /// The scripted backend has no entry for this request; always a test or
    /// fixture defect, never silently empty.
    #[error("script miss for role `{role}` question `{question}`")]
    ScriptMiss { role: String, question: String },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
}

/// A chat-completion backend. Both implementations are safe to share across
/// threads; scripted lookups are read-only.
pub trait LlmBackend: Send + Sync {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, LlmError>;
}

/// Per-call usage records plus running totals; totals always equal the sum
/// of the records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct UsageLedger {
    pub records: Vec<CallRecord>,
    pub totals: Usage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallRecord {
    pub tag: CallTag,
    pub usage: Usage,
}

impl UsageLedger {
    pub fn new() -> UsageLedger {
        UsageLedger::default()
    }

    pub fn record(&mut self, tag: CallTag, usage: Usage) {
        self.records.push(CallRecord { tag, usage });
        self.totals.add(&usage);
    }

    pub fn call_count(&self) -> u64 {
        self.records.len() as u64
    }
}
