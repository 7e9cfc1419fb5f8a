//! Okapi BM25 inverted index with deterministic binary persistence.
//!
//! Scoring follows the classic form
//! `idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len/avglen))` with
//! `idf(t) = max(0, ln((N - df + 0.5) / (df + 0.5) + 1))`. Chunks are
//! indexed over `title + " " + text`. Ties break by ascending chunk
//! ordinal, so results are stable across rebuilds.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use super::{index_tokens, Chunk, RetrievalError};

pub const INDEX_FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"PCIX";

#[derive(Debug, Clone)]
pub struct Bm25Index {
    /// term -> postings as (chunk ordinal, term frequency), ordinal-sorted.
    postings: BTreeMap<String, Vec<(u32, u32)>>,
    /// Index-token count per chunk (title + text).
    doc_lengths: Vec<u32>,
    avg_doc_length: f64,
    chunks: Vec<Chunk>,
    pub k1: f64,
    pub b: f64,
}

impl Bm25Index {
    pub fn doc_count(&self) -> usize {
        self.doc_lengths.len()
    }

    pub fn chunks(&self) -> &[Chunk] {
        &self.chunks
    }

    pub fn avg_doc_length(&self) -> f64 {
        self.avg_doc_length
    }
}

/// Build a deterministic index over the given chunks.
pub fn build_index(chunks: Vec<Chunk>, k1: f64, b: f64) -> Result<Bm25Index, RetrievalError> {
    if chunks.is_empty() {
        return Err(RetrievalError::NoChunks);
    }
    let mut postings: BTreeMap<String, Vec<(u32, u32)>> = BTreeMap::new();
    let mut doc_lengths = Vec::with_capacity(chunks.len());
    for (ord, chunk) in chunks.iter().enumerate() {
        let tokens = index_tokens(&format!("{} {}", chunk.title, chunk.text));
        doc_lengths.push(tokens.len() as u32);
        let mut tf: BTreeMap<String, u32> = BTreeMap::new();
        for t in tokens {
            *tf.entry(t).or_insert(0) += 1;
        }
        for (term, freq) in tf {
            postings.entry(term).or_default().push((ord as u32, freq));
        }
    }
    let total: u64 = doc_lengths.iter().map(|&l| l as u64).sum();
    let avg_doc_length = total as f64 / doc_lengths.len() as f64;
    Ok(Bm25Index { postings, doc_lengths, avg_doc_length, chunks, k1, b })
}

/// Top-k chunks by BM25 score, descending; ties broken by ascending chunk
/// ordinal. Only chunks containing at least one query term are candidates.
/// An empty query yields an empty result.
pub fn search<'a>(index: &'a Bm25Index, query: &str, k: usize) -> Vec<(&'a Chunk, f64)> {
    let tokens = index_tokens(query);
    if tokens.is_empty() || k == 0 {
        return Vec::new();
    }
    let n = index.doc_count() as f64;
    let mut scores: BTreeMap<u32, f64> = BTreeMap::new();
    for token in &tokens {
        let Some(postings) = index.postings.get(token) else { continue };
        let df = postings.len() as f64;
        let idf = (((n - df + 0.5) / (df + 0.5)) + 1.0).ln().max(0.0);
        for &(ord, tf) in postings {
            let len = index.doc_lengths[ord as usize] as f64;
            let tf = tf as f64;
            let norm = tf * (index.k1 + 1.0)
                / (tf + index.k1 * (1.0 - index.b + index.b * len / index.avg_doc_length));
            *scores.entry(ord).or_insert(0.0) += idf * norm;
        }
    }
    let mut ranked: Vec<(u32, f64)> = scores.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(ord, score)| (&index.chunks[ord as usize], score))
        .collect()
}

// ---------------------------------------------------------------------------
// Persistence. Single binary file, versioned header; layout documented in
// docs/index-format.md. All integers little-endian; strings are u64 length
// followed by UTF-8 bytes. Byte-identical for identical inputs.
// ---------------------------------------------------------------------------

fn write_str(out: &mut Vec<u8>, s: &str) {
    out.extend_from_slice(&(s.len() as u64).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

impl Bm25Index {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&INDEX_FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&self.k1.to_le_bytes());
        out.extend_from_slice(&self.b.to_le_bytes());
        out.extend_from_slice(&(self.chunks.len() as u64).to_le_bytes());
        for (chunk, len) in self.chunks.iter().zip(&self.doc_lengths) {
            write_str(&mut out, &chunk.chunk_id);
            write_str(&mut out, &chunk.doc_id);
            write_str(&mut out, &chunk.title);
            write_str(&mut out, &chunk.text);
            out.extend_from_slice(&(chunk.token_count as u32).to_le_bytes());
            out.extend_from_slice(&len.to_le_bytes());
        }
        out.extend_from_slice(&(self.postings.len() as u64).to_le_bytes());
        for (term, postings) in &self.postings {
            write_str(&mut out, term);
            out.extend_from_slice(&(postings.len() as u64).to_le_bytes());
            for &(ord, tf) in postings {
                out.extend_from_slice(&ord.to_le_bytes());
                out.extend_from_slice(&tf.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Bm25Index, RetrievalError> {
        let mut r = Reader { bytes, pos: 0 };
        let magic = r.take(4)?;
        if magic != MAGIC {
            return Err(RetrievalError::BadIndexFile("bad magic".into()));
        }
        let version = r.u32()?;
        if version != INDEX_FORMAT_VERSION {
            return Err(RetrievalError::BadIndexFile(format!(
                "unsupported version {version}, expected {INDEX_FORMAT_VERSION}"
            )));
        }
        let k1 = r.f64()?;
        let b = r.f64()?;
        let n_chunks = r.u64()? as usize;
        let mut chunks = Vec::with_capacity(n_chunks);
        let mut doc_lengths = Vec::with_capacity(n_chunks);
        for _ in 0..n_chunks {
            let chunk_id = r.string()?;
            let doc_id = r.string()?;
            let title = r.string()?;
            let text = r.string()?;
            let token_count = r.u32()? as usize;
            doc_lengths.push(r.u32()?);
            chunks.push(Chunk { chunk_id, doc_id, title, text, token_count });
        }
        if chunks.is_empty() {
            return Err(RetrievalError::BadIndexFile("index has no chunks".into()));
        }
        let n_terms = r.u64()? as usize;
        let mut postings = BTreeMap::new();
        for _ in 0..n_terms {
            let term = r.string()?;
            let n = r.u64()? as usize;
            let mut list = Vec::with_capacity(n);
            for _ in 0..n {
                let ord = r.u32()?;
                let tf = r.u32()?;
                list.push((ord, tf));
            }
            postings.insert(term, list);
        }
        let total: u64 = doc_lengths.iter().map(|&l| l as u64).sum();
        let avg_doc_length = total as f64 / doc_lengths.len() as f64;
        Ok(Bm25Index { postings, doc_lengths, avg_doc_length, chunks, k1, b })
    }

    pub fn save(&self, path: &Path) -> Result<(), RetrievalError> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Bm25Index, RetrievalError> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        Bm25Index::from_bytes(&bytes)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], RetrievalError> {
        if self.pos + n > self.bytes.len() {
            return Err(RetrievalError::BadIndexFile("truncated file".into()));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, RetrievalError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, RetrievalError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, RetrievalError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, RetrievalError> {
        let len = self.u64()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec())
            .map_err(|_| RetrievalError::BadIndexFile("invalid utf-8".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::retrieval::ingest_corpus_text;

    fn toy_chunks() -> Vec<Chunk> {
        let corpus = [
            r#"{"id": "a", "title": "Alpha", "text": "the cat sat on the mat"}"#,
            r#"{"id": "b", "title": "Beta", "text": "the dog chased the cat far away"}"#,
            r#"{"id": "c", "title": "Gamma", "text": "birds fly south in winter"}"#,
        ]
        .join("\n");
        ingest_corpus_text(&corpus, 100).unwrap().0
    }

    /// Independent hand-coded Okapi evaluation used to check scores.
    fn hand_score(
        query: &str,
        docs: &[Vec<String>],
        target: usize,
        k1: f64,
        b: f64,
    ) -> f64 {
        let n = docs.len() as f64;
        let avg = docs.iter().map(|d| d.len() as f64).sum::<f64>() / n;
        let mut score = 0.0;
        for term in index_tokens(query) {
            let df = docs.iter().filter(|d| d.contains(&term)).count() as f64;
            if df == 0.0 {
                continue;
            }
            let tf = docs[target].iter().filter(|t| **t == term).count() as f64;
            if tf == 0.0 {
                continue;
            }
            let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln().max(0.0);
            let len = docs[target].len() as f64;
            score += idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * len / avg));
        }
        score
    }

    #[test]
    fn scores_match_hand_evaluation() {
        let chunks = toy_chunks();
        let docs: Vec<Vec<String>> = chunks
            .iter()
            .map(|c| index_tokens(&format!("{} {}", c.title, c.text)))
            .collect();
        let index = build_index(chunks, 1.2, 0.75).unwrap();
        for query in ["the cat", "dog", "winter birds", "cat mat the"] {
            let results = search(&index, query, 10);
            for (chunk, score) in results {
                let ord = index.chunks().iter().position(|c| c == chunk).unwrap();
                let expected = hand_score(query, &docs, ord, 1.2, 0.75);
                let rel = (score - expected).abs() / expected.abs().max(1e-300);
                assert!(rel < 1e-9, "query `{query}` chunk {ord}: {score} vs {expected}");
            }
        }
    }

    #[test]
    fn absent_term_yields_empty() {
        let index = build_index(toy_chunks(), 1.2, 0.75).unwrap();
        assert!(search(&index, "zebra", 5).is_empty());
        assert!(search(&index, "???", 5).is_empty());
    }

    #[test]
    fn k_larger_than_corpus_returns_all_matches() {
        let index = build_index(toy_chunks(), 1.2, 0.75).unwrap();
        let results = search(&index, "the", 50);
        assert_eq!(results.len(), 2); // only two chunks contain "the"
    }

    #[test]
    fn identical_chunks_get_equal_lengths_and_tie_break_by_ordinal() {
        let corpus = [
            r#"{"id": "x", "title": "T", "text": "same words here"}"#,
            r#"{"id": "y", "title": "T", "text": "same words here"}"#,
        ]
        .join("\n");
        let (chunks, _) = ingest_corpus_text(&corpus, 100).unwrap();
        let index = build_index(chunks, 1.2, 0.75).unwrap();
        let results = search(&index, "same words", 2);
        assert_eq!(results[0].0.doc_id, "x");
        assert_eq!(results[1].0.doc_id, "y");
        assert_eq!(results[0].1, results[1].1);
    }

    #[test]
    fn doc_count_matches_chunks() {
        let index = build_index(toy_chunks(), 1.2, 0.75).unwrap();
        assert_eq!(index.doc_count(), 3);
    }

    #[test]
    fn rebuild_is_byte_identical() {
        let a = build_index(toy_chunks(), 1.2, 0.75).unwrap().to_bytes();
        let b = build_index(toy_chunks(), 1.2, 0.75).unwrap().to_bytes();
        assert_eq!(a, b);
    }

    #[test]
    fn persistence_round_trip() {
        let index = build_index(toy_chunks(), 1.5, 0.6).unwrap();
        let bytes = index.to_bytes();
        let loaded = Bm25Index::from_bytes(&bytes).unwrap();
        assert_eq!(loaded.to_bytes(), bytes);
        assert_eq!(loaded.k1, 1.5);
        let before: Vec<String> = search(&index, "cat", 3)
            .iter()
            .map(|(c, _)| c.chunk_id.clone())
            .collect();
        let after: Vec<String> = search(&loaded, "cat", 3)
            .iter()
            .map(|(c, _)| c.chunk_id.clone())
            .collect();
        assert_eq!(before, after);
    }

    #[test]
    fn rejects_corrupt_files() {
        assert!(Bm25Index::from_bytes(b"nope").is_err());
        let mut bytes = build_index(toy_chunks(), 1.2, 0.75).unwrap().to_bytes();
        bytes[4] = 99; // version
        assert!(Bm25Index::from_bytes(&bytes).is_err());
        bytes.truncate(20);
        assert!(Bm25Index::from_bytes(&bytes).is_err());
    }

    #[test]
    fn zero_chunks_is_an_error() {
        assert!(matches!(build_index(Vec::new(), 1.2, 0.75), Err(RetrievalError::NoChunks)));
    }
}
