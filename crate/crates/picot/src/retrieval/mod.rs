//! Corpus ingestion, 100-word chunking, BM25 indexing, and evidence
//! provision for RAG and in-context modes.

mod bm25;
mod evidence;

pub use bm25::{build_index, search, Bm25Index, INDEX_FORMAT_VERSION};
pub use evidence::{EvidenceMode, EvidenceProvider, EvidenceSet, EvidenceSource};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_CHUNK_SIZE: usize = 100;

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus line {line}: {message}")]
    BadDocument { line: usize, message: String },
    #[error("corpus contains no valid documents")]
    EmptyCorpus,
    #[error("cannot build an index over zero chunks")]
    NoChunks,
    #[error("index file: {0}")]
    BadIndexFile(String),
}

/// A passage of at most `chunk_size` whitespace tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunk {
    pub chunk_id: String,
    pub doc_id: String,
    pub title: String,
    pub text: String,
    /// Whitespace token count of `text`.
    pub token_count: usize,
}

#[derive(Debug, Deserialize)]
struct CorpusDoc {
    id: String,
    title: String,
    text: String,
}

/// Read a JSON-lines corpus (`{"id", "title", "text"}` per line) and split
/// each document into consecutive chunks of at most `chunk_size` whitespace
/// tokens. Chunk ids are `doc_id#ordinal`.
///
/// Malformed lines are reported with their line number; the run aborts only
/// if zero valid documents remain.
pub fn ingest_corpus_text(
    text: &str,
    chunk_size: usize,
) -> Result<(Vec<Chunk>, Vec<RetrievalError>), RetrievalError> {
    let mut chunks = Vec::new();
    let mut errors = Vec::new();
    let mut docs = 0usize;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CorpusDoc>(line) {
            Ok(doc) => {
                docs += 1;
                chunk_document(&doc, chunk_size, &mut chunks);
            }
            Err(e) => errors.push(RetrievalError::BadDocument {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    if docs == 0 {
        return Err(RetrievalError::EmptyCorpus);
    }
    Ok((chunks, errors))
}

pub fn ingest_corpus(
    path: &std::path::Path,
    chunk_size: usize,
) -> Result<(Vec<Chunk>, Vec<RetrievalError>), RetrievalError> {
    let text = std::fs::read_to_string(path)?;
    ingest_corpus_text(&text, chunk_size)
}

/// Number of documents in a corpus file (for reporting).
pub fn count_docs(text: &str) -> usize {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .filter(|l| serde_json::from_str::<CorpusDoc>(l).is_ok())
        .count()
}

fn chunk_document(doc: &CorpusDoc, chunk_size: usize, out: &mut Vec<Chunk>) {
    let tokens: Vec<&str> = doc.text.split_whitespace().collect();
    if tokens.is_empty() {
        return;
    }
    if tokens.len() <= chunk_size {
        // Single-chunk documents keep their text byte-for-byte.
        out.push(Chunk {
            chunk_id: format!("{}#0", doc.id),
            doc_id: doc.id.clone(),
            title: doc.title.clone(),
            text: doc.text.clone(),
            token_count: tokens.len(),
        });
        return;
    }
    for (ordinal, window) in tokens.chunks(chunk_size).enumerate() {
        out.push(Chunk {
            chunk_id: format!("{}#{}", doc.id, ordinal),
            doc_id: doc.id.clone(),
            title: doc.title.clone(),
            text: window.join(" "),
            token_count: window.len(),
        });
    }
}

/// Index tokenization: lowercase, split on non-alphanumeric, drop empties.
pub fn index_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc_line(id: &str, title: &str, text: &str) -> String {
        serde_json::to_string(&serde_json::json!({"id": id, "title": title, "text": text}))
            .unwrap()
    }

    fn words(n: usize) -> String {
        (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn chunking_splits_at_the_word_limit() {
        let text = doc_line("d", "T", &words(250));
        let (chunks, errs) = ingest_corpus_text(&text, 100).unwrap();
        assert!(errs.is_empty());
        assert_eq!(chunks.len(), 3);
        assert_eq!(
            chunks.iter().map(|c| c.token_count).collect::<Vec<_>>(),
            vec![100, 100, 50]
        );
        assert_eq!(chunks[0].chunk_id, "d#0");
        assert_eq!(chunks[2].chunk_id, "d#2");
    }

    #[test]
    fn empty_text_yields_no_chunks() {
        let text = format!("{}\n{}", doc_line("a", "A", ""), doc_line("b", "B", "one two"));
        let (chunks, _) = ingest_corpus_text(&text, 100).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].doc_id, "b");
    }

    #[test]
    fn single_chunk_preserves_bytes() {
        let original = "exactly  two\tspaces and\na newline";
        let text = doc_line("d", "T", original);
        let (chunks, _) = ingest_corpus_text(&text, 100).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].text, original);
    }

    #[test]
    fn chunk_concatenation_reproduces_token_sequence() {
        let body = words(333);
        let text = doc_line("d", "T", &body);
        let (chunks, _) = ingest_corpus_text(&text, 100).unwrap();
        let rejoined: Vec<String> = chunks
            .iter()
            .flat_map(|c| c.text.split_whitespace().map(str::to_string))
            .collect();
        let original: Vec<String> = body.split_whitespace().map(str::to_string).collect();
        assert_eq!(rejoined, original);
    }

    #[test]
    fn malformed_lines_are_reported_not_fatal() {
        let text = format!("not json\n{}", doc_line("d", "T", "hello world"));
        let (chunks, errs) = ingest_corpus_text(&text, 100).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(errs.len(), 1);
        assert!(matches!(&errs[0], RetrievalError::BadDocument { line: 1, .. }));
    }

    #[test]
    fn all_lines_malformed_is_fatal() {
        assert!(matches!(
            ingest_corpus_text("nope\n{\"id\": 3}", 100),
            Err(RetrievalError::EmptyCorpus)
        ));
    }

    #[test]
    fn tokenization_lowercases_and_splits() {
        assert_eq!(
            index_tokens("Theudebert I, king-of Austrasia (533)"),
            vec!["theudebert", "i", "king", "of", "austrasia", "533"]
        );
        assert!(index_tokens("  ---  ").is_empty());
    }
}
