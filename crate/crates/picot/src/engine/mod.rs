//! Resolution over a ground-fact knowledge base: unification, conjunction,
//! standard-order comparisons, if-then-else, and count aggregation.
//!
//! The engine is a pure evaluator over an immutable knowledge-base snapshot.
//! Goals that cannot be evaluated (bare variables, comparisons over unbound
//! terms) fail and are reported as [`ExecutionDefect`]s instead of aborting.

pub mod oracle;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prolog::{parse_goal_list, Goal, ParseError, Query, Term};

/// A ground instance of a predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Fact {
    /// Panics if any argument is non-ground; facts are ground by definition.
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Fact {
        assert!(args.iter().all(Term::is_ground), "fact arguments must be ground");
        Fact { predicate: predicate.into(), args }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            Term::Compound { functor: self.predicate.clone(), args: self.args.clone() }
        )
    }
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: not a ground fact: {text}")]
    NotGround { line: usize, text: String },
}

/// Insertion-ordered, structurally deduplicated set of ground facts.
///
/// Facts are only ever added during a pipeline run, never removed.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    facts: Vec<Fact>,
    seen: HashSet<Fact>,
}

impl KnowledgeBase {
    pub fn new() -> KnowledgeBase {
        KnowledgeBase::default()
    }

    /// Returns true when the fact was new.
    pub fn insert(&mut self, fact: Fact) -> bool {
        if self.seen.insert(fact.clone()) {
            self.facts.push(fact);
            true
        } else {
            false
        }
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.seen.contains(fact)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    pub fn matching<'a>(
        &'a self,
        predicate: &'a str,
        arity: usize,
    ) -> impl Iterator<Item = &'a Fact> + 'a {
        self.facts
            .iter()
            .filter(move |f| f.predicate == predicate && f.args.len() == arity)
    }

    /// One canonical fact per line, `pred("a", "b").`
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.facts {
            out.push_str(&f.to_string());
            out.push_str(".\n");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<KnowledgeBase, KbError> {
        let mut kb = KnowledgeBase::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') {
                continue;
            }
            let goals = parse_goal_list(line)
                .map_err(|source| KbError::Parse { line: i + 1, source })?;
            for goal in goals {
                match goal {
                    Goal::Atom { predicate, args } if args.iter().all(Term::is_ground) => {
                        kb.insert(Fact::new(predicate, args));
                    }
                    _ => {
                        return Err(KbError::NotGround { line: i + 1, text: line.to_string() })
                    }
                }
            }
        }
        Ok(kb)
    }
}

/// A map from variable names to ground terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Solution {
    bindings: BTreeMap<String, Term>,
}

impl Solution {
    pub fn empty() -> Solution {
        Solution::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn bind(&mut self, var: impl Into<String>, term: Term) {
        debug_assert!(term.is_ground());
        self.bindings.insert(var.into(), term);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.bindings.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.bindings.keys()
    }

    /// Substitute bound variables in a term.
    pub fn apply(&self, term: &Term) -> Term {
        match term {
            Term::Var(v) => match self.bindings.get(v) {
                Some(t) => t.clone(),
                None => term.clone(),
            },
            Term::Compound { functor, args } => Term::Compound {
                functor: functor.clone(),
                args: args.iter().map(|a| self.apply(a)).collect(),
            },
            _ => term.clone(),
        }
    }

    /// Restriction to the given variables.
    pub fn project(&self, vars: &[String]) -> Solution {
        Solution {
            bindings: self
                .bindings
                .iter()
                .filter(|(k, _)| vars.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

/// Deduplicated solutions in first-derivation order.
///
/// Equality is set equality; the stored order is deterministic for a given
/// evaluation and is what serializes.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SolutionSet {
    rows: Vec<Solution>,
}

impl SolutionSet {
    pub fn singleton_empty() -> SolutionSet {
        SolutionSet { rows: vec![Solution::empty()] }
    }

    pub fn from_rows(rows: Vec<Solution>) -> SolutionSet {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in rows {
            if seen.insert(r.clone()) {
                out.push(r);
            }
        }
        SolutionSet { rows: out }
    }

    pub fn rows(&self) -> &[Solution] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn sorted(&self) -> Vec<&Solution> {
        let mut v: Vec<&Solution> = self.rows.iter().collect();
        v.sort();
        v
    }

    /// Values of one variable across solutions, deduplicated, in
    /// first-derivation order. Solutions that do not bind the variable
    /// contribute nothing.
    pub fn values_of(&self, var: &str) -> Vec<Term> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for row in &self.rows {
            if let Some(t) = row.get(var) {
                if seen.insert(t.clone()) {
                    out.push(t.clone());
                }
            }
        }
        out
    }

    /// Projection of every solution onto `vars`, as a set.
    pub fn project(&self, vars: &[String]) -> SolutionSet {
        SolutionSet::from_rows(self.rows.iter().map(|r| r.project(vars)).collect())
    }

    pub fn is_subset_of(&self, other: &SolutionSet) -> bool {
        let theirs: HashSet<&Solution> = other.rows.iter().collect();
        self.rows.iter().all(|r| theirs.contains(r))
    }
}

impl PartialEq for SolutionSet {
    fn eq(&self, other: &SolutionSet) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for SolutionSet {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DefectKind {
    /// A bare variable evaluated as a goal.
    UnboundGoalVariable,
    /// `==`/`@>`/`@<`/`=` over terms that are not ground after substitution.
    ComparisonOnUnbound,
}

/// A goal that could not be evaluated; the goal fails and resolution
/// continues, mirroring how generated queries must degrade gracefully.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExecutionDefect {
    pub kind: DefectKind,
    pub goal_index: usize,
}

/// Solutions plus any defects encountered while deriving them.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub solutions: SolutionSet,
    pub defects: Vec<ExecutionDefect>,
}

enum UnifyOutcome {
    Ok(Solution),
    Fail,
    NonGround,
}

fn unify_inner(a: &Term, b: &Term, env: &Solution) -> UnifyOutcome {
    let ra = env.apply(a);
    let rb = env.apply(b);
    match (&ra, &rb) {
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if let Term::Var(_) = t {
                return UnifyOutcome::NonGround;
            }
            if !t.is_ground() {
                return UnifyOutcome::NonGround;
            }
            let mut out = env.clone();
            out.bind(x.clone(), (*t).clone());
            UnifyOutcome::Ok(out)
        }
        (
            Term::Compound { functor: fa, args: aa },
            Term::Compound { functor: fb, args: ab },
        ) => {
            if fa != fb || aa.len() != ab.len() {
                return UnifyOutcome::Fail;
            }
            let mut cur = env.clone();
            for (x, y) in aa.iter().zip(ab.iter()) {
                match unify_inner(x, y, &cur) {
                    UnifyOutcome::Ok(next) => cur = next,
                    other => return other,
                }
            }
            UnifyOutcome::Ok(cur)
        }
        _ => {
            if ra == rb {
                UnifyOutcome::Ok(env.clone())
            } else {
                UnifyOutcome::Fail
            }
        }
    }
}

/// Most general unifier extending `env`, or `None`. Variables bind only to
/// ground terms; attempting to bind a variable to a non-ground term fails.
pub fn unify(a: &Term, b: &Term, env: &Solution) -> Option<Solution> {
    match unify_inner(a, b, env) {
        UnifyOutcome::Ok(s) => Some(s),
        _ => None,
    }
}

struct DefectLog {
    defects: Vec<ExecutionDefect>,
    seen: HashSet<ExecutionDefect>,
}

impl DefectLog {
    fn new() -> DefectLog {
        DefectLog { defects: Vec::new(), seen: HashSet::new() }
    }

    fn record(&mut self, kind: DefectKind, goal_index: usize) {
        let d = ExecutionDefect { kind, goal_index };
        if self.seen.insert(d.clone()) {
            self.defects.push(d);
        }
    }
}

/// All bindings satisfying the conjunction left-to-right against `kb`.
pub fn solve(goals: &[Goal], kb: &KnowledgeBase) -> SolveResult {
    let mut rows = vec![Solution::empty()];
    let mut log = DefectLog::new();
    for (idx, goal) in goals.iter().enumerate() {
        let mut next = Vec::new();
        for row in &rows {
            eval_goal(goal, row, kb, idx, &mut log, &mut next);
        }
        rows = dedup_rows(next);
        if rows.is_empty() {
            // Conjunction is dead; remaining goals cannot resurrect it but
            // bare-variable defects are still worth surfacing.
            for (j, g) in goals.iter().enumerate().skip(idx + 1) {
                if let Goal::BareVar(_) = g {
                    log.record(DefectKind::UnboundGoalVariable, j);
                }
            }
            break;
        }
    }
    SolveResult { solutions: SolutionSet { rows }, defects: log.defects }
}

/// Solutions of the first `t` goals; `t = 0` yields the single empty
/// solution. Panics if `t` exceeds the query length.
pub fn solve_prefix(query: &Query, t: usize, kb: &KnowledgeBase) -> SolveResult {
    assert!(t <= query.goals.len(), "prefix length {t} out of range");
    solve(&query.goals[..t], kb)
}

fn dedup_rows(rows: Vec<Solution>) -> Vec<Solution> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        if seen.insert(r.clone()) {
            out.push(r);
        }
    }
    out
}

fn eval_goal(
    goal: &Goal,
    row: &Solution,
    kb: &KnowledgeBase,
    idx: usize,
    log: &mut DefectLog,
    out: &mut Vec<Solution>,
) {
    match goal {
        Goal::Atom { predicate, args } => {
            for fact in kb.matching(predicate, args.len()) {
                let mut env = row.clone();
                let mut ok = true;
                for (pat, val) in args.iter().zip(fact.args.iter()) {
                    match unify_inner(pat, val, &env) {
                        UnifyOutcome::Ok(next) => env = next,
                        UnifyOutcome::Fail => {
                            ok = false;
                            break;
                        }
                        UnifyOutcome::NonGround => {
                            // Fact args are ground, so this cannot happen.
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    out.push(env);
                }
            }
        }
        Goal::Unify(l, r) => match unify_inner(l, r, row) {
            UnifyOutcome::Ok(env) => out.push(env),
            UnifyOutcome::Fail => {}
            UnifyOutcome::NonGround => log.record(DefectKind::ComparisonOnUnbound, idx),
        },
        Goal::StructEq(l, r) => {
            match resolve_ground_pair(l, r, row) {
                Some((a, b)) => {
                    if a == b {
                        out.push(row.clone());
                    }
                }
                None => log.record(DefectKind::ComparisonOnUnbound, idx),
            }
        }
        Goal::StdGt(l, r) => match resolve_ground_pair(l, r, row) {
            Some((a, b)) => {
                if a.cmp_std(&b) == Ordering::Greater {
                    out.push(row.clone());
                }
            }
            None => log.record(DefectKind::ComparisonOnUnbound, idx),
        },
        Goal::StdLt(l, r) => match resolve_ground_pair(l, r, row) {
            Some((a, b)) => {
                if a.cmp_std(&b) == Ordering::Less {
                    out.push(row.clone());
                }
            }
            None => log.record(DefectKind::ComparisonOnUnbound, idx),
        },
        Goal::IfThenElse { cond, then_goals, else_goals } => {
            let mut cond_rows = Vec::new();
            eval_goal(cond, row, kb, idx, log, &mut cond_rows);
            if let Some(first) = cond_rows.into_iter().next() {
                // Commit to the first solution of the condition.
                let mut rows = vec![first];
                for g in then_goals {
                    let mut next = Vec::new();
                    for r in &rows {
                        eval_goal(g, r, kb, idx, log, &mut next);
                    }
                    rows = dedup_rows(next);
                    if rows.is_empty() {
                        break;
                    }
                }
                out.extend(rows);
            } else if let Some(els) = else_goals {
                let mut rows = vec![row.clone()];
                for g in els {
                    let mut next = Vec::new();
                    for r in &rows {
                        eval_goal(g, r, kb, idx, log, &mut next);
                    }
                    rows = dedup_rows(next);
                    if rows.is_empty() {
                        break;
                    }
                }
                out.extend(rows);
            }
            // No else: the goal fails when the condition fails.
        }
        Goal::Count { distinct, inner, result } => {
            let mut inner_rows = Vec::new();
            eval_goal(inner, row, kb, idx, log, &mut inner_rows);
            let n = if *distinct {
                dedup_rows(inner_rows).len()
            } else {
                inner_rows.len()
            };
            // Inner bindings are local; only the count escapes.
            match unify_inner(&Term::Var(result.clone()), &Term::Int(n as i64), row) {
                UnifyOutcome::Ok(env) => out.push(env),
                UnifyOutcome::Fail => {}
                UnifyOutcome::NonGround => log.record(DefectKind::ComparisonOnUnbound, idx),
            }
        }
        Goal::BareVar(_) => {
            log.record(DefectKind::UnboundGoalVariable, idx);
        }
    }
}

fn resolve_ground_pair(l: &Term, r: &Term, row: &Solution) -> Option<(Term, Term)> {
    let a = row.apply(l);
    let b = row.apply(r);
    if a.is_ground() && b.is_ground() {
        Some((a, b))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prolog::parse_query;

    fn kb_of(lines: &[&str]) -> KnowledgeBase {
        KnowledgeBase::from_text(&lines.join("\n")).unwrap()
    }

    fn sol(pairs: &[(&str, Term)]) -> Solution {
        let mut s = Solution::empty();
        for (v, t) in pairs {
            s.bind(v.to_string(), t.clone());
        }
        s
    }

    fn str_t(s: &str) -> Term {
        Term::Str(s.into())
    }

    #[test]
    fn unify_basics() {
        let env = Solution::empty();
        let bound = unify(&Term::Var("X".into()), &str_t("Lupin"), &env).unwrap();
        assert_eq!(bound.get("X"), Some(&str_t("Lupin")));

        assert!(unify(&str_t("RAF"), &str_t("No. 11 Group RAF"), &env).is_none());

        let d = Term::Date(crate::prolog::Date::new(1997, 6, 26).unwrap());
        let same = unify(&d, &d, &env).unwrap();
        assert_eq!(same, env);
    }

    #[test]
    fn unify_rejects_var_to_var() {
        let env = Solution::empty();
        assert!(unify(&Term::Var("X".into()), &Term::Var("Y".into()), &env).is_none());
    }

    #[test]
    fn unify_inside_compound() {
        let env = Solution::empty();
        let pat = Term::Compound { functor: "f".into(), args: vec![Term::Var("X".into())] };
        let val = Term::Compound { functor: "f".into(), args: vec![Term::Int(3)] };
        let out = unify(&pat, &val, &env).unwrap();
        assert_eq!(out.get("X"), Some(&Term::Int(3)));
    }

    #[test]
    fn worked_example_solution() {
        // The printed knowledge base omits the teacher fact for Lupin; with
        // it added, the query yields the worked example's solution.
        let kb = kb_of(&[
            r#"dada_teacher("Lockhart", "Hogwarts")."#,
            r#"dada_teacher("Lupin", "Hogwarts")."#,
            r#"werewolf("Lupin")."#,
            r#"wife("Lupin", "Tonks")."#,
        ]);
        let q = parse_query(r#"dada_teacher(X, "Hogwarts"), werewolf(X), wife(X, Y)"#, "Y")
            .unwrap();
        let res = solve(&q.goals, &kb);
        assert!(res.defects.is_empty());
        assert_eq!(
            res.solutions,
            SolutionSet::from_rows(vec![sol(&[("X", str_t("Lupin")), ("Y", str_t("Tonks"))])])
        );
    }

    #[test]
    fn empty_kb_yields_empty_set() {
        let kb = KnowledgeBase::new();
        let q = parse_query("father(A1, A2)", "A2").unwrap();
        let res = solve(&q.goals, &kb);
        assert!(res.solutions.is_empty());
        assert!(res.defects.is_empty());
    }

    #[test]
    fn count_aggregate_binds_two() {
        let kb = kb_of(&[r#"child("S", "a")."#, r#"child("S", "b")."#]);
        let q = parse_query(r#"aggregate_all(count, distinct(child("S", A1)), A2)"#, "A2")
            .unwrap();
        let res = solve(&q.goals, &kb);
        assert_eq!(
            res.solutions,
            SolutionSet::from_rows(vec![sol(&[("A2", Term::Int(2))])])
        );
    }

    #[test]
    fn count_aggregate_zero_succeeds() {
        let kb = KnowledgeBase::new();
        let q = parse_query(r#"aggregate_all(count, distinct(child("S", A1)), A2)"#, "A2")
            .unwrap();
        let res = solve(&q.goals, &kb);
        assert_eq!(
            res.solutions,
            SolutionSet::from_rows(vec![sol(&[("A2", Term::Int(0))])])
        );
    }

    #[test]
    fn aggregate_locals_do_not_leak() {
        let kb = kb_of(&[r#"child("S", "a")."#]);
        let q = parse_query(r#"aggregate_all(count, distinct(child("S", A1)), A2)"#, "A2")
            .unwrap();
        let res = solve(&q.goals, &kb);
        let row = &res.solutions.rows()[0];
        assert_eq!(row.vars().collect::<Vec<_>>(), vec!["A2"]);
    }

    #[test]
    fn struct_eq_execution_error_fixture() {
        let kb = kb_of(&[
            r#"part_of("Hawker Hurricane", "Royal Air Force (RAF)")."#,
            r#"part_of("Hawker Hurricane", "Royal Yugoslav Air Force (VVKJ)")."#,
            r#"part_of("Hawker Hurricane", "Royal Canadian Air Force")."#,
            r#"part_of("No. 1455 Flight", "No. 11 Group RAF")."#,
        ]);
        let q = parse_query(
            r#"part_of("Hawker Hurricane", A1), part_of("No. 1455 Flight", A2), (A1 == A2)."#,
            "A1",
        )
        .unwrap();
        let res = solve(&q.goals, &kb);
        assert!(res.solutions.is_empty());
        assert!(res.defects.is_empty());
    }

    #[test]
    fn if_then_no_else_fails_when_unification_fails() {
        let kb = kb_of(&[
            r#"performer("Chasing Pirates", "Norah Jones")."#,
            r#"performer("turn me on", "Sean Smith")."#,
            r#"writer("turn me on", "Greg Lake")."#,
            r#"writer("turn me on", "Logan Lynn")."#,
            r#"writer("turn me on", "Joni Mitchell")."#,
        ]);
        let q = parse_query(
            r#"performer("Chasing Pirates", A1), performer("turn me on", A2), A1 = A2 -> writer("turn me on", A3)"#,
            "A3",
        )
        .unwrap();
        let res = solve(&q.goals, &kb);
        assert!(res.solutions.is_empty());
        assert!(res.defects.is_empty());
    }

    #[test]
    fn if_then_else_commits_to_then() {
        let kb = KnowledgeBase::new();
        let q = parse_query(
            r#"("Yes" == "Yes" -> A3 = "Yes" ; A3 = "No")"#,
            "A3",
        )
        .unwrap();
        let res = solve(&q.goals, &kb);
        assert_eq!(
            res.solutions,
            SolutionSet::from_rows(vec![sol(&[("A3", str_t("Yes"))])])
        );
    }

    #[test]
    fn string_beats_integer_in_standard_order() {
        let kb = kb_of(&[r#"novels("John Updike", "more than 20")."#]);
        let q = parse_query(
            r#"novels("John Updike", A1), (A1 @> 15 -> B1 = "Yes" ; B1 = "No")"#,
            "B1",
        )
        .unwrap();
        let res = solve(&q.goals, &kb);
        assert_eq!(res.solutions.values_of("B1"), vec![str_t("Yes")]);
    }

    #[test]
    fn bare_var_records_defect_and_fails() {
        let kb = kb_of(&[r#"p("a")."#]);
        let q = parse_query("p(A1), A2", "A2").unwrap();
        let res = solve(&q.goals, &kb);
        assert!(res.solutions.is_empty());
        assert_eq!(
            res.defects,
            vec![ExecutionDefect { kind: DefectKind::UnboundGoalVariable, goal_index: 1 }]
        );
    }

    #[test]
    fn comparison_on_unbound_records_defect() {
        let kb = kb_of(&[r#"p("a")."#]);
        let q = parse_query("p(A1), A1 @> A9", "A1").unwrap();
        let res = solve(&q.goals, &kb);
        assert!(res.solutions.is_empty());
        assert_eq!(res.defects[0].kind, DefectKind::ComparisonOnUnbound);
        assert_eq!(res.defects[0].goal_index, 1);
    }

    #[test]
    fn prefix_zero_is_singleton_empty() {
        let q = parse_query("p(A1)", "A1").unwrap();
        let res = solve_prefix(&q, 0, &KnowledgeBase::new());
        assert_eq!(res.solutions, SolutionSet::singleton_empty());
    }

    #[test]
    fn full_prefix_equals_solve() {
        let kb = kb_of(&[r#"p("a")."#, r#"q("a", "b")."#]);
        let q = parse_query("p(A1), q(A1, A2)", "A2").unwrap();
        let full = solve(&q.goals, &kb);
        let prefix = solve_prefix(&q, 2, &kb);
        assert_eq!(full.solutions, prefix.solutions);
    }

    #[test]
    fn kb_text_round_trip() {
        let kb = kb_of(&[
            r#"part_of("Hawker Hurricane", "Royal Air Force (RAF)")."#,
            r#"count_of("x", 3)."#,
            r#"born("x", date(985, 4, 2))."#,
        ]);
        let text = kb.to_text();
        assert!(text.contains(r#"part_of("Hawker Hurricane", "Royal Air Force (RAF)")."#));
        let back = KnowledgeBase::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn kb_deduplicates_structurally() {
        let mut kb = KnowledgeBase::new();
        assert!(kb.insert(Fact::new("p", vec![str_t("RAF")])));
        assert!(!kb.insert(Fact::new("p", vec![str_t("RAF")])));
        // Case-sensitive: no normalization of strings.
        assert!(kb.insert(Fact::new("p", vec![str_t("raf")])));
        assert_eq!(kb.len(), 2);
    }

    #[test]
    fn trichotomy_of_standard_order() {
        let terms = [
            Term::Int(-2),
            Term::Int(15),
            str_t(""),
            str_t("more than 20"),
            Term::Date(crate::prolog::Date::new(985, 4, 2).unwrap()),
            Term::Date(crate::prolog::Date::new(1997, 6, 26).unwrap()),
            Term::Compound { functor: "f".into(), args: vec![Term::Int(1)] },
        ];
        for a in &terms {
            for b in &terms {
                let gt = a.cmp_std(b) == Ordering::Greater;
                let lt = a.cmp_std(b) == Ordering::Less;
                let eq = a == b;
                assert_eq!(
                    1,
                    usize::from(gt) + usize::from(lt) + usize::from(eq),
                    "trichotomy violated for {a} vs {b}"
                );
            }
        }
    }
}
