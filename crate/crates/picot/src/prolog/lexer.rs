//! Tokenizer for query text, answer literals, and knowledge-base files.

use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Str(String),
    Int(i64),
    /// Lowercase identifier (functor or bareword atom).
    Lower(String),
    /// Uppercase/underscore identifier (variable).
    Upper(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Arrow,
    Eq,
    StructEq,
    AtGt,
    AtLt,
    /// Any character with no role in the grammar; the parser classifies it
    /// in context (usually as an unquoted constant).
    Other(char),
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

pub fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut chars = input.char_indices().peekable();

    while let Some(&(pos, c)) = chars.peek() {
        match c {
            _ if c.is_whitespace() => {
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                let mut closed = false;
                while let Some((_, c2)) = chars.next() {
                    match c2 {
                        '"' => {
                            closed = true;
                            break;
                        }
                        '\\' => match chars.peek() {
                            // Only \" and \\ are escapes; anything else is literal.
                            Some(&(_, '"')) => {
                                s.push('"');
                                chars.next();
                            }
                            Some(&(_, '\\')) => {
                                s.push('\\');
                                chars.next();
                            }
                            _ => s.push('\\'),
                        },
                        _ => s.push(c2),
                    }
                }
                if !closed {
                    return Err(ParseError::new(
                        ParseErrorKind::UnbalancedDelimiter,
                        pos,
                        "unterminated string literal",
                        input,
                    ));
                }
                toks.push(Spanned { tok: Tok::Str(s), pos });
            }
            '0'..='9' => {
                let start = pos;
                let mut end = pos;
                while let Some(&(p, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        end = p + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let text = &input[start..end];
                let n: i64 = text.parse().map_err(|_| {
                    ParseError::new(
                        ParseErrorKind::MalformedTerm,
                        start,
                        format!("integer out of range: {text}"),
                        input,
                    )
                })?;
                toks.push(Spanned { tok: Tok::Int(n), pos: start });
            }
            'a'..='z' => {
                let start = pos;
                let end = ident_end(bytes, start);
                toks.push(Spanned {
                    tok: Tok::Lower(input[start..end].to_string()),
                    pos: start,
                });
                while chars.peek().is_some_and(|&(p, _)| p < end) {
                    chars.next();
                }
            }
            'A'..='Z' | '_' => {
                let start = pos;
                let end = ident_end(bytes, start);
                toks.push(Spanned {
                    tok: Tok::Upper(input[start..end].to_string()),
                    pos: start,
                });
                while chars.peek().is_some_and(|&(p, _)| p < end) {
                    chars.next();
                }
            }
            '(' => push1(&mut toks, &mut chars, Tok::LParen, pos),
            ')' => push1(&mut toks, &mut chars, Tok::RParen, pos),
            ',' => push1(&mut toks, &mut chars, Tok::Comma, pos),
            ';' => push1(&mut toks, &mut chars, Tok::Semi, pos),
            '.' => push1(&mut toks, &mut chars, Tok::Dot, pos),
            '-' => {
                chars.next();
                if let Some(&(_, '>')) = chars.peek() {
                    chars.next();
                    toks.push(Spanned { tok: Tok::Arrow, pos });
                } else if chars.peek().is_some_and(|&(_, d)| d.is_ascii_digit()) {
                    let mut n: i64 = 0;
                    let mut overflow = false;
                    while let Some(&(_, d)) = chars.peek() {
                        if let Some(v) = d.to_digit(10) {
                            n = match n.checked_mul(10).and_then(|x| x.checked_sub(v as i64)) {
                                Some(x) => x,
                                None => {
                                    overflow = true;
                                    break;
                                }
                            };
                            chars.next();
                        } else {
                            break;
                        }
                    }
                    if overflow {
                        return Err(ParseError::new(
                            ParseErrorKind::MalformedTerm,
                            pos,
                            "integer out of range",
                            input,
                        ));
                    }
                    toks.push(Spanned { tok: Tok::Int(n), pos });
                } else {
                    toks.push(Spanned { tok: Tok::Other('-'), pos });
                }
            }
            '\u{2192}' => push1(&mut toks, &mut chars, Tok::Arrow, pos), // `→` as emitted by some models
            '=' => {
                chars.next();
                if let Some(&(_, '=')) = chars.peek() {
                    chars.next();
                    toks.push(Spanned { tok: Tok::StructEq, pos });
                } else {
                    toks.push(Spanned { tok: Tok::Eq, pos });
                }
            }
            '@' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        toks.push(Spanned { tok: Tok::AtGt, pos });
                    }
                    Some(&(_, '<')) => {
                        chars.next();
                        toks.push(Spanned { tok: Tok::AtLt, pos });
                    }
                    _ => toks.push(Spanned { tok: Tok::Other('@'), pos }),
                }
            }
            '\\' => {
                chars.next();
                if let Some(&(_, '+')) = chars.peek() {
                    return Err(ParseError::new(
                        ParseErrorKind::NegationUnsupported,
                        pos,
                        "negation (\\+) is not supported",
                        input,
                    ));
                }
                toks.push(Spanned { tok: Tok::Other('\\'), pos });
            }
            _ => push1(&mut toks, &mut chars, Tok::Other(c), pos),
        }
    }
    Ok(toks)
}

fn ident_end(bytes: &[u8], start: usize) -> usize {
    let mut end = start;
    while end < bytes.len()
        && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
    {
        end += 1;
    }
    end
}

fn push1(
    toks: &mut Vec<Spanned>,
    chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
    tok: Tok,
    pos: usize,
) {
    chars.next();
    toks.push(Spanned { tok, pos });
}
