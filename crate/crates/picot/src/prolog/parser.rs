//! Recursive-descent parser for the restricted query grammar.
//!
//! Accepted goal forms: atoms over constants/variables, `=`, `==`, `@>`,
//! `@<`, `(Cond -> Then ; Else)` (parenthesized or spanning the remainder of
//! the input), `aggregate_all(count, [distinct(...)], Var)`, and bare
//! variables. A trailing period is accepted and ignored. `\+` is rejected.

use super::ast::{Date, Goal, Query, Term};
use super::lexer::{lex, Spanned, Tok};
use super::{ParseError, ParseErrorKind};

/// Parse a comma-separated goal sequence (no target).
pub fn parse_goal_list(text: &str) -> Result<Vec<Goal>, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, 0, "empty query", text));
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, input: text, arg_depth: 0 };
    let goals = p.parse_seq(&[])?;
    // Trailing period after the final goal is accepted and ignored.
    if p.peek_is(&Tok::Dot) {
        p.bump();
    }
    if let Some(t) = p.cur() {
        return Err(p.err_at(
            ParseErrorKind::MalformedTerm,
            t.pos,
            format!("unexpected trailing {}", describe(&t.tok)),
        ));
    }
    if goals.is_empty() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, 0, "empty query", text));
    }
    Ok(goals)
}

/// Parse a query from its goal text and target variable name.
pub fn parse_query(text: &str, target: &str) -> Result<Query, ParseError> {
    let goals = parse_goal_list(text)?;
    let target = target.trim();
    if !is_var_name(target) {
        return Err(ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("target `{target}` is not a variable"),
            text,
        ));
    }
    let query = Query { goals, target: target.to_string() };
    if !query.vars().iter().any(|v| v == target) {
        return Err(ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("target variable {target} does not occur in the query"),
            text,
        ));
    }
    Ok(query)
}

/// Canonical text for a query's goals; reparsing yields a structurally
/// identical goal list.
pub fn print_query(query: &Query) -> String {
    query.to_string()
}

/// Parse one LLM-emitted answer item into a ground term. Only quoted
/// strings, integers, and `date(Y, M, D)` literals are accepted.
pub fn parse_literal(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, input: text, arg_depth: 0 };
    if p.cur().is_none() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, 0, "empty literal", text));
    }
    let term = p.parse_term()?;
    if let Some(t) = p.cur() {
        return Err(p.err_at(
            ParseErrorKind::MalformedTerm,
            t.pos,
            "trailing content after literal",
        ));
    }
    match &term {
        Term::Str(_) | Term::Int(_) | Term::Date(_) => Ok(term),
        _ => Err(ParseError::new(
            ParseErrorKind::MalformedTerm,
            0,
            format!("not a string, integer, or date literal: {term}"),
            text,
        )),
    }
}

/// Parse arbitrary term text (used for deserializing canonical forms).
pub fn parse_term_text(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, i: 0, input: text, arg_depth: 0 };
    if p.cur().is_none() {
        return Err(ParseError::new(ParseErrorKind::EmptyInput, 0, "empty term", text));
    }
    let term = p.parse_term()?;
    if let Some(t) = p.cur() {
        return Err(p.err_at(ParseErrorKind::MalformedTerm, t.pos, "trailing content after term"));
    }
    Ok(term)
}

pub fn is_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    i: usize,
    input: &'a str,
    arg_depth: u32,
}

impl<'a> Parser<'a> {
    fn cur(&self) -> Option<&Spanned> {
        self.toks.get(self.i)
    }

    fn peek_is(&self, tok: &Tok) -> bool {
        self.cur().is_some_and(|t| &t.tok == tok)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.i).cloned();
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn err_at(&self, kind: ParseErrorKind, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError::new(kind, pos, msg, self.input)
    }

    fn err_eof(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(ParseErrorKind::MalformedTerm, self.input.len(), msg, self.input)
    }

    /// True when the current token terminates the sequence being parsed.
    fn at_stop(&self, stops: &[Tok]) -> bool {
        match self.cur() {
            None => true,
            Some(t) => {
                // A period terminates only when it is the final token (or
                // followed solely by stop tokens), i.e. a trailing period.
                if t.tok == Tok::Dot && self.i + 1 >= self.toks.len() {
                    return true;
                }
                stops.contains(&t.tok)
            }
        }
    }

    fn parse_seq(&mut self, stops: &[Tok]) -> Result<Vec<Goal>, ParseError> {
        let mut goals = Vec::new();
        loop {
            let unit = self.parse_goal_unit(stops)?;
            goals.extend(unit);
            if self.peek_is(&Tok::Comma) && !self.at_stop(stops) {
                let comma = self.bump().unwrap();
                if self.at_stop(stops) {
                    return Err(self.err_at(
                        ParseErrorKind::MalformedTerm,
                        comma.pos,
                        "expected a goal after `,`",
                    ));
                }
            } else {
                break;
            }
        }
        Ok(goals)
    }

    /// One goal, or an if-then-else spanning the rest of the sequence.
    fn parse_goal_unit(&mut self, stops: &[Tok]) -> Result<Vec<Goal>, ParseError> {
        let mut first = self.parse_primary(stops)?;
        if self.peek_is(&Tok::Arrow) {
            let arrow = self.bump().unwrap();
            if first.len() != 1 {
                return Err(self.err_at(
                    ParseErrorKind::MalformedTerm,
                    arrow.pos,
                    "if-then-else condition must be a single goal",
                ));
            }
            let cond = first.remove(0);
            if cond.contains_aggregate() {
                return Err(self.err_at(
                    ParseErrorKind::BadAggregate,
                    arrow.pos,
                    "aggregate goal cannot be an if-then-else condition",
                ));
            }
            let mut then_stops = stops.to_vec();
            then_stops.push(Tok::Semi);
            let then_goals = self.parse_seq(&then_stops)?;
            let else_goals = if self.peek_is(&Tok::Semi) {
                self.bump();
                Some(self.parse_seq(stops)?)
            } else {
                None
            };
            Ok(vec![Goal::IfThenElse { cond: Box::new(cond), then_goals, else_goals }])
        } else {
            Ok(first)
        }
    }

    /// A primary goal; parenthesized groups splice into the sequence.
    fn parse_primary(&mut self, _stops: &[Tok]) -> Result<Vec<Goal>, ParseError> {
        let t = match self.cur() {
            Some(t) => t.clone(),
            None => return Err(self.err_eof("expected a goal")),
        };
        if t.tok == Tok::LParen {
            self.bump();
            let inner = self.parse_seq(&[Tok::RParen])?;
            if !self.peek_is(&Tok::RParen) {
                return Err(self.err_at(
                    ParseErrorKind::UnbalancedDelimiter,
                    t.pos,
                    "unclosed parenthesis",
                ));
            }
            self.bump();
            return Ok(inner);
        }

        let term_pos = t.pos;
        let term = self.parse_term()?;
        let op = self.cur().map(|s| s.tok.clone());
        match op {
            Some(Tok::Eq) => {
                self.bump();
                let rhs = self.parse_term()?;
                Ok(vec![Goal::Unify(term, rhs)])
            }
            Some(Tok::StructEq) => {
                self.bump();
                let rhs = self.parse_term()?;
                Ok(vec![Goal::StructEq(term, rhs)])
            }
            Some(Tok::AtGt) => {
                self.bump();
                let rhs = self.parse_term()?;
                Ok(vec![Goal::StdGt(term, rhs)])
            }
            Some(Tok::AtLt) => {
                self.bump();
                let rhs = self.parse_term()?;
                Ok(vec![Goal::StdLt(term, rhs)])
            }
            _ => match term {
                Term::Var(v) => Ok(vec![Goal::BareVar(v)]),
                Term::Compound { functor, args } if functor == "aggregate_all" => {
                    Ok(vec![self.build_aggregate(args, term_pos)?])
                }
                Term::Compound { functor, args } => {
                    Ok(vec![Goal::Atom { predicate: functor, args }])
                }
                other => Err(self.err_at(
                    ParseErrorKind::MalformedTerm,
                    term_pos,
                    format!("constant {other} cannot be used as a goal"),
                )),
            },
        }
    }

    fn build_aggregate(&self, args: Vec<Term>, pos: usize) -> Result<Goal, ParseError> {
        if args.len() != 3 {
            return Err(self.err_at(
                ParseErrorKind::BadAggregate,
                pos,
                format!("aggregate_all takes 3 arguments, got {}", args.len()),
            ));
        }
        let mut it = args.into_iter();
        let kind = it.next().unwrap();
        let spec = it.next().unwrap();
        let result = it.next().unwrap();

        match &kind {
            Term::Compound { functor, args } if functor == "count" && args.is_empty() => {}
            other => {
                return Err(self.err_at(
                    ParseErrorKind::BadAggregate,
                    pos,
                    format!("unsupported aggregate kind {other}; only count is allowed"),
                ))
            }
        }
        let (distinct, inner_term) = match spec {
            Term::Compound { functor, mut args } if functor == "distinct" && args.len() == 1 => {
                (true, args.remove(0))
            }
            other => (false, other),
        };
        let inner = match inner_term {
            Term::Compound { functor, args } if functor != "aggregate_all" => {
                Goal::Atom { predicate: functor, args }
            }
            other => {
                return Err(self.err_at(
                    ParseErrorKind::BadAggregate,
                    pos,
                    format!("aggregate inner goal must be an atom, got {other}"),
                ))
            }
        };
        let result = match result {
            Term::Var(v) => v,
            other => {
                return Err(self.err_at(
                    ParseErrorKind::BadAggregate,
                    pos,
                    format!("aggregate result must be a variable, got {other}"),
                ))
            }
        };
        let mut inner_vars = Vec::new();
        inner.collect_vars(&mut inner_vars);
        if inner_vars.iter().any(|v| *v == result) {
            return Err(self.err_at(
                ParseErrorKind::BadAggregate,
                pos,
                format!("aggregate result variable {result} occurs in the inner goal"),
            ));
        }
        Ok(Goal::Count { distinct, inner: Box::new(inner), result })
    }

    fn parse_term(&mut self) -> Result<Term, ParseError> {
        let t = match self.bump() {
            Some(t) => t,
            None => return Err(self.err_eof("expected a term")),
        };
        match t.tok {
            Tok::Str(s) => Ok(Term::Str(s)),
            Tok::Int(n) => Ok(Term::Int(n)),
            Tok::Upper(v) => Ok(Term::Var(v)),
            Tok::Lower(functor) => {
                if self.peek_is(&Tok::LParen) {
                    let open = self.bump().unwrap();
                    self.arg_depth += 1;
                    let args = self.parse_args(&open)?;
                    self.arg_depth -= 1;
                    Ok(normalize_date(functor, args))
                } else {
                    Ok(Term::Compound { functor, args: Vec::new() })
                }
            }
            other => {
                let kind = if self.arg_depth > 0 {
                    ParseErrorKind::UnquotedConstant
                } else {
                    ParseErrorKind::MalformedTerm
                };
                Err(self.err_at(
                    kind,
                    t.pos,
                    format!("expected a term, found {}", describe(&other)),
                ))
            }
        }
    }

    fn parse_args(&mut self, open: &Spanned) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.peek_is(&Tok::RParen) {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.parse_term()?);
            match self.cur() {
                Some(t) if t.tok == Tok::Comma => {
                    self.bump();
                }
                Some(t) if t.tok == Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                Some(t) => {
                    // A bareword running past a term boundary inside an
                    // argument list is a constant missing its quotes.
                    return Err(self.err_at(
                        ParseErrorKind::UnquotedConstant,
                        t.pos,
                        format!("expected `,` or `)`, found {}", describe(&t.tok)),
                    ));
                }
                None => {
                    return Err(self.err_at(
                        ParseErrorKind::UnbalancedDelimiter,
                        open.pos,
                        "unclosed argument list",
                    ))
                }
            }
        }
    }
}

/// Turn `date(Y, M, D)` compounds with in-range components into date terms.
fn normalize_date(functor: String, args: Vec<Term>) -> Term {
    if functor == "date" && args.len() == 3 {
        if let (Term::Int(y), Term::Int(m), Term::Int(d)) = (&args[0], &args[1], &args[2]) {
            if let Ok(y) = i32::try_from(*y) {
                if (1..=31).contains(d) && (1..=12).contains(m) {
                    if let Some(date) = Date::new(y, *m as u8, *d as u8) {
                        return Term::Date(date);
                    }
                }
            }
        }
    }
    Term::Compound { functor, args }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Int(n) => format!("integer {n}"),
        Tok::Lower(s) => format!("`{s}`"),
        Tok::Upper(s) => format!("variable {s}"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::Eq => "`=`".into(),
        Tok::StructEq => "`==`".into(),
        Tok::AtGt => "`@>`".into(),
        Tok::AtLt => "`@<`".into(),
        Tok::Other(c) => format!("`{c}`"),
    }
}
