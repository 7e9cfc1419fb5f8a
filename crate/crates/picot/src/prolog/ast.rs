//! AST for the restricted Prolog query sub-language.
//!
//! Terms are either ground constants (strings, integers, dates), variables,
//! or compounds. Goals cover conjunctive atoms, `=`/`==`/`@>`/`@<`,
//! if-then-else, and `aggregate_all(count, ...)`.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Calendar date literal, `date(year, month, day)`.
///
/// Month and day ranges are checked (1..=12, 1..=31) but calendar validity
/// is not: source corpora contain fictional dates like `0985-04-02`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl Date {
    pub fn new(year: i32, month: u8, day: u8) -> Option<Date> {
        if (1..=12).contains(&month) && (1..=31).contains(&day) {
            Some(Date { year, month, day })
        } else {
            None
        }
    }

    /// `YYYY-MM-DD` rendering used in questions, statements, and answers.
    pub fn render(&self) -> String {
        format!("{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

/// A term of the restricted language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Double-quoted string constant.
    Str(String),
    /// Signed integer constant.
    Int(i64),
    /// `date(Y, M, D)` literal.
    Date(Date),
    /// Variable: `[A-Z_][A-Za-z0-9_]*`.
    Var(String),
    /// Compound term with a lowercase functor. Zero-arity compounds are
    /// bareword atoms such as `count`.
    Compound { functor: String, args: Vec<Term> },
}

impl Term {
    pub fn is_ground(&self) -> bool {
        match self {
            Term::Str(_) | Term::Int(_) | Term::Date(_) => true,
            Term::Var(_) => false,
            Term::Compound { args, .. } => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|x| x == v) {
                    out.push(v.clone());
                }
            }
            Term::Compound { args, .. } => {
                for a in args {
                    a.collect_vars(out);
                }
            }
            _ => {}
        }
    }

    /// Every ground subterm of `self`, including `self` when ground.
    pub fn collect_ground_subterms(&self, out: &mut Vec<Term>) {
        if self.is_ground() {
            out.push(self.clone());
        }
        if let Term::Compound { args, .. } = self {
            for a in args {
                a.collect_ground_subterms(out);
            }
        }
    }

    /// Unquoted rendering used in questions, statements, and final answers:
    /// strings bare, integers decimal, dates `YYYY-MM-DD`.
    pub fn render(&self) -> String {
        match self {
            Term::Str(s) => s.clone(),
            Term::Int(n) => n.to_string(),
            Term::Date(d) => d.render(),
            Term::Var(v) => v.clone(),
            Term::Compound { .. } => self.to_string(),
        }
    }

    fn order_class(&self) -> u8 {
        match self {
            Term::Var(_) => 0,
            Term::Int(_) => 1,
            Term::Str(_) => 2,
            Term::Date(_) => 3,
            Term::Compound { .. } => 4,
        }
    }

    /// Standard order of terms: Int < Str < Date < other Compound; numeric,
    /// byte-lexicographic, chronological, then functor/arity/args within a
    /// kind. Variables sort below everything (they never appear in ground
    /// comparisons; this keeps the order total).
    pub fn cmp_std(&self, other: &Term) -> Ordering {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a.cmp(b),
            (Term::Int(a), Term::Int(b)) => a.cmp(b),
            (Term::Str(a), Term::Str(b)) => a.as_bytes().cmp(b.as_bytes()),
            (Term::Date(a), Term::Date(b)) => a.cmp(b),
            (
                Term::Compound { functor: fa, args: aa },
                Term::Compound { functor: fb, args: ab },
            ) => fa
                .cmp(fb)
                .then(aa.len().cmp(&ab.len()))
                .then_with(|| {
                    for (x, y) in aa.iter().zip(ab.iter()) {
                        let o = x.cmp_std(y);
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                    Ordering::Equal
                }),
            _ => self.order_class().cmp(&other.order_class()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Term) -> Option<Ordering> {
        Some(self.cmp_std(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Term) -> Ordering {
        self.cmp_std(other)
    }
}

fn escape_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(c),
        }
    }
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Str(s) => write!(f, "\"{}\"", escape_str(s)),
            Term::Int(n) => write!(f, "{n}"),
            Term::Date(d) => write!(f, "date({}, {}, {})", d.year, d.month, d.day),
            Term::Var(v) => write!(f, "{v}"),
            Term::Compound { functor, args } => {
                write!(f, "{functor}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Term, D::Error> {
        let s = String::deserialize(deserializer)?;
        crate::prolog::parse_term_text(&s).map_err(D::Error::custom)
    }
}

/// One goal of a query.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Predicate application matched against knowledge-base facts.
    Atom { predicate: String, args: Vec<Term> },
    /// `=` unification.
    Unify(Term, Term),
    /// `==` structural equality over ground terms.
    StructEq(Term, Term),
    /// `@>` standard-order greater-than.
    StdGt(Term, Term),
    /// `@<` standard-order less-than.
    StdLt(Term, Term),
    /// `(Cond -> Then ; Else)`; the else branch is optional.
    IfThenElse {
        cond: Box<Goal>,
        then_goals: Vec<Goal>,
        else_goals: Option<Vec<Goal>>,
    },
    /// `aggregate_all(count, distinct(Inner), Result)`; counts solutions of
    /// the inner atom and binds the result variable.
    Count {
        distinct: bool,
        inner: Box<Goal>,
        result: String,
    },
    /// A variable standing alone as a goal. Accepted syntactically because
    /// generated queries contain them; always a run-time defect.
    BareVar(String),
}

impl Goal {
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Goal::Atom { args, .. } => {
                for a in args {
                    a.collect_vars(out);
                }
            }
            Goal::Unify(l, r) | Goal::StructEq(l, r) | Goal::StdGt(l, r) | Goal::StdLt(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Goal::IfThenElse { cond, then_goals, else_goals } => {
                cond.collect_vars(out);
                for g in then_goals {
                    g.collect_vars(out);
                }
                if let Some(els) = else_goals {
                    for g in els {
                        g.collect_vars(out);
                    }
                }
            }
            Goal::Count { inner, result, .. } => {
                inner.collect_vars(out);
                if !out.iter().any(|x| x == result) {
                    out.push(result.clone());
                }
            }
            Goal::BareVar(v) => {
                if !out.iter().any(|x| x == v) {
                    out.push(v.clone());
                }
            }
        }
    }

    pub fn contains_aggregate(&self) -> bool {
        match self {
            Goal::Count { .. } => true,
            Goal::IfThenElse { cond, then_goals, else_goals } => {
                cond.contains_aggregate()
                    || then_goals.iter().any(Goal::contains_aggregate)
                    || else_goals
                        .as_ref()
                        .is_some_and(|g| g.iter().any(Goal::contains_aggregate))
            }
            _ => false,
        }
    }
}

fn fmt_goal_seq(goals: &[Goal], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, g) in goals.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{g}")?;
    }
    Ok(())
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Goal::Atom { predicate, args } => write!(
                f,
                "{}",
                Term::Compound { functor: predicate.clone(), args: args.clone() }
            ),
            Goal::Unify(l, r) => write!(f, "{l} = {r}"),
            Goal::StructEq(l, r) => write!(f, "{l} == {r}"),
            Goal::StdGt(l, r) => write!(f, "{l} @> {r}"),
            Goal::StdLt(l, r) => write!(f, "{l} @< {r}"),
            Goal::IfThenElse { cond, then_goals, else_goals } => {
                write!(f, "({cond} -> ")?;
                fmt_goal_seq(then_goals, f)?;
                if let Some(els) = else_goals {
                    write!(f, " ; ")?;
                    fmt_goal_seq(els, f)?;
                }
                write!(f, ")")
            }
            Goal::Count { distinct, inner, result } => {
                if *distinct {
                    write!(f, "aggregate_all(count, distinct({inner}), {result})")
                } else {
                    write!(f, "aggregate_all(count, {inner}, {result})")
                }
            }
            Goal::BareVar(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Goal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Goal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Goal, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut goals = crate::prolog::parse_goal_list(&s).map_err(D::Error::custom)?;
        if goals.len() != 1 {
            return Err(D::Error::custom("expected a single goal"));
        }
        Ok(goals.remove(0))
    }
}

/// An ordered goal list plus the designated answer variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub goals: Vec<Goal>,
    pub target: String,
}

impl Query {
    /// All distinct variables, in first-occurrence order.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in &self.goals {
            g.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_goal_seq(&self.goals, f)
    }
}
