//! Predicate definition tables: per-predicate statement and question
//! templates, rendering of goals to natural language, and ingestion of
//! LLM answer lists back into ground terms.
//!
//! A definition line has the shape
//! `- pred(<literal1>, <answer>) -> <statement>. ; <question>?`
//! with the leading dash optional. Any `<...>` token other than `<answer>`
//! is a positional slot assigned left-to-right.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::Fact;
use crate::prolog::{
    parse_literal, ParseError, ParseErrorKind, Term,
};

#[derive(Debug, Error)]
pub enum DefError {
    #[error("no definition for {predicate}/{arity}")]
    Missing { predicate: String, arity: usize },
    #[error("empty statement")]
    EmptyStatement,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Templates for one predicate at a fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub predicate: String,
    pub arity: usize,
    /// Placeholder token per argument position, e.g. `<literal1>`, `<answer>`.
    pub slots: Vec<String>,
    /// Position of `<answer>` in the head, when present.
    pub answer_slot: Option<usize>,
    pub statement_template: String,
    pub question_template: String,
}

impl Definition {
    /// Fill `template` by substituting the rendered value of every given
    /// argument position. Positions share their head token; repeated tokens
    /// are consumed left-to-right.
    fn fill(&self, template: &str, values: &[(usize, String)]) -> String {
        let mut out = template.to_string();
        for (pos, rendered) in values {
            let token = match self.slots.get(*pos) {
                Some(t) => t,
                None => continue,
            };
            if let Some(at) = out.find(token.as_str()) {
                out.replace_range(at..at + token.len(), rendered);
            }
        }
        out
    }
}

fn render_const(term: &Term, quote_strings: bool) -> String {
    match term {
        Term::Str(s) if quote_strings => format!("\"{s}\""),
        _ => term.render(),
    }
}

/// At most one definition per (predicate, arity).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionTable {
    map: BTreeMap<(String, usize), Definition>,
}

impl DefinitionTable {
    pub fn new() -> DefinitionTable {
        DefinitionTable::default()
    }

    pub fn get(&self, predicate: &str, arity: usize) -> Result<&Definition, DefError> {
        self.map
            .get(&(predicate.to_string(), arity))
            .ok_or_else(|| DefError::Missing { predicate: predicate.to_string(), arity })
    }

    pub fn insert(&mut self, def: Definition) {
        self.map.insert((def.predicate.clone(), def.arity), def);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Definition> {
        self.map.values()
    }
}

/// Parse the definition block of a query-generation response, one
/// definition per non-empty line.
pub fn parse_definitions(text: &str) -> Result<DefinitionTable, ParseError> {
    let mut table = DefinitionTable::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let line = line.strip_prefix('-').map(str::trim_start).unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        table.insert(parse_definition_line(line)?);
    }
    Ok(table)
}

fn parse_definition_line(line: &str) -> Result<Definition, ParseError> {
    // Head -> statement ; question. Some models emit a unicode arrow.
    let (head, rest) = split_once_any(line, &["->", "\u{2192}"]).ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("definition line without `->`: {line}"),
            line,
        )
    })?;
    let (statement, question) = rest.split_once(';').ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("definition line without `;`: {line}"),
            line,
        )
    })?;

    let head = head.trim();
    let (predicate, slots) = parse_head(head, line)?;
    let answer_slot = slots.iter().position(|s| s == "<answer>");
    let statement_template = statement.trim().to_string();
    let question_template = question.trim().to_string();
    if statement_template.matches("<answer>").count() != 1 {
        return Err(ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("statement template must contain <answer> exactly once: {statement_template}"),
            line,
        ));
    }
    Ok(Definition {
        predicate,
        arity: slots.len(),
        slots,
        answer_slot,
        statement_template,
        question_template,
    })
}

fn split_once_any<'a>(s: &'a str, seps: &[&str]) -> Option<(&'a str, &'a str)> {
    seps.iter()
        .filter_map(|sep| s.split_once(sep))
        .min_by_key(|(head, _)| head.len())
}

/// `pred(<literal1>, <answer>)` → predicate name plus slot tokens.
fn parse_head(head: &str, line: &str) -> Result<(String, Vec<String>), ParseError> {
    let bad = |msg: String| ParseError::new(ParseErrorKind::MalformedTerm, 0, msg, line);
    let (name, rest) = match head.split_once('(') {
        Some((name, rest)) => (name.trim(), rest),
        None => return Ok((head.to_string(), Vec::new())),
    };
    if name.is_empty() {
        return Err(bad(format!("definition head has no predicate: {head}")));
    }
    let inner = rest
        .strip_suffix(')')
        .ok_or_else(|| bad(format!("unclosed definition head: {head}")))?;
    let mut slots = Vec::new();
    for part in inner.split(',') {
        let tok = part.trim();
        if !(tok.starts_with('<') && tok.ends_with('>') && tok.len() > 2) {
            return Err(bad(format!("definition head argument is not a <placeholder>: {tok}")));
        }
        slots.push(tok.to_string());
    }
    Ok((name.to_string(), slots))
}

/// Render the question for extracting `slot` from an instantiated atom.
/// All other positions substitute their rendered constants; positions that
/// are still unbound keep their placeholder tokens.
pub fn render_question(
    def: &Definition,
    args: &[Term],
    slot: usize,
    quote_strings: bool,
) -> String {
    let values: Vec<(usize, String)> = args
        .iter()
        .enumerate()
        .filter(|(i, t)| *i != slot && t.is_ground())
        .map(|(i, t)| (i, render_const(t, quote_strings)))
        .collect();
    def.fill(&def.question_template, &values)
}

/// Render the declarative statement for a ground fact.
pub fn render_statement(def: &Definition, fact: &Fact) -> Result<String, DefError> {
    if fact.args.len() != def.arity {
        return Err(DefError::Missing {
            predicate: fact.predicate.clone(),
            arity: fact.args.len(),
        });
    }
    let values: Vec<(usize, String)> = fact
        .args
        .iter()
        .enumerate()
        .map(|(i, t)| (i, t.render()))
        .collect();
    Ok(def.fill(&def.statement_template, &values))
}

/// Entailment question for a verification step.
pub fn render_entailment_question(statement: &str) -> Result<String, DefError> {
    if statement.trim().is_empty() {
        return Err(DefError::EmptyStatement);
    }
    Ok(format!("Is the following statement true or false? {statement}"))
}

/// Parse the content of an `<answer>...</answer>` span into ground terms.
///
/// Empty content is the "no information" signal and yields an empty list.
/// Items are split on top-level commas (quotes and parentheses respected);
/// each goes through [`parse_literal`], with bare unquoted text tolerated
/// as a string constant. Total over arbitrary input: never panics.
pub fn parse_answer_list(text: &str) -> Result<Vec<Term>, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    for item in split_top_level(trimmed) {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        match parse_literal(item) {
            Ok(t) => terms.push(t),
            Err(e) => {
                if item.contains('"') {
                    // Misquoted strings are the extraction parsing error;
                    // guessing at their boundaries would corrupt facts.
                    return Err(e);
                }
                terms.push(Term::Str(item.to_string()));
            }
        }
    }
    Ok(terms)
}

/// Split on commas outside quotes and parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0u32;
    let mut in_str = false;
    let mut escape = false;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if in_str {
            if escape {
                escape = false;
            } else if c == '\\' {
                escape = true;
            } else if c == '"' {
                in_str = false;
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Interpret a verification answer span as a verdict. Only the forms
/// `true`/`"true"` and `false`/`"false"`/empty are recognized; anything
/// else is a verification parsing error.
pub fn parse_verdict(text: &str) -> Result<bool, ParseError> {
    let t = text.trim();
    let unquoted = t
        .strip_prefix('"')
        .and_then(|x| x.strip_suffix('"'))
        .unwrap_or(t);
    if unquoted.eq_ignore_ascii_case("true") {
        Ok(true)
    } else if unquoted.is_empty() || unquoted.eq_ignore_ascii_case("false") {
        Ok(false)
    } else {
        Err(ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("not a true/false verdict: {t}"),
            text,
        ))
    }
}
