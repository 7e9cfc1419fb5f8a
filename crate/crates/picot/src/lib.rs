//! Library for executing LLM-generated Prolog queries over text corpora:
//! query parsing, fact resolution, BM25 retrieval, LLM-backed fact
//! extraction/verification, and answer evaluation.

pub mod defs;
pub mod engine;
pub mod prolog;
pub mod retrieval;
