//! Brute-force reference evaluator for conjunctive queries.
//!
//! Enumerates every assignment of query variables to ground subterms
//! appearing in the knowledge base or the goals, then checks each goal
//! directly. Deliberately independent of the resolution engine so the two
//! can be compared: it never unifies, never threads environments, and never
//! short-circuits per goal order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::prolog::{Goal, Term};

use super::{Fact, KnowledgeBase, Solution, SolutionSet};

pub const MAX_VARS: usize = 6;
pub const MAX_FACTS: usize = 200;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("goal outside the conjunctive fragment: {0}")]
    UnsupportedGoal(String),
    #[error("too many variables: {0} > {MAX_VARS}")]
    TooManyVars(usize),
    #[error("knowledge base too large: {0} > {MAX_FACTS}")]
    KbTooLarge(usize),
}

/// Exhaustive solve over the conjunctive fragment (atoms, `=`, `==`, `@>`,
/// `@<`). Must agree exactly with [`super::solve`] on this fragment.
pub fn brute_force_solve(
    goals: &[Goal],
    kb: &KnowledgeBase,
) -> Result<SolutionSet, OracleError> {
    for g in goals {
        match g {
            Goal::Atom { .. }
            | Goal::Unify(_, _)
            | Goal::StructEq(_, _)
            | Goal::StdGt(_, _)
            | Goal::StdLt(_, _) => {}
            other => return Err(OracleError::UnsupportedGoal(other.to_string())),
        }
    }
    if kb.len() > MAX_FACTS {
        return Err(OracleError::KbTooLarge(kb.len()));
    }

    let mut vars = Vec::new();
    for g in goals {
        g.collect_vars(&mut vars);
    }
    if vars.len() > MAX_VARS {
        return Err(OracleError::TooManyVars(vars.len()));
    }

    // Closed constant universe: any satisfying binding must name a ground
    // subterm of some fact argument or of some goal term.
    let mut universe: BTreeSet<Term> = BTreeSet::new();
    let mut collect = |t: &Term| {
        let mut subs = Vec::new();
        t.collect_ground_subterms(&mut subs);
        universe.extend(subs);
    };
    for fact in kb.iter() {
        for a in &fact.args {
            collect(a);
        }
    }
    for g in goals {
        for t in goal_terms(g) {
            collect(&t);
        }
    }
    let universe: Vec<Term> = universe.into_iter().collect();

    let fact_set: HashSet<&Fact> = kb.iter().collect();
    let mut found = Vec::new();
    let mut assignment = Solution::empty();
    enumerate(&vars, 0, &universe, &mut assignment, &fact_set, goals, &mut found);
    Ok(SolutionSet::from_rows(found))
}

fn goal_terms(goal: &Goal) -> Vec<Term> {
    match goal {
        Goal::Atom { args, .. } => args.clone(),
        Goal::Unify(l, r) | Goal::StructEq(l, r) | Goal::StdGt(l, r) | Goal::StdLt(l, r) => {
            vec![l.clone(), r.clone()]
        }
        _ => Vec::new(),
    }
}

fn enumerate(
    vars: &[String],
    i: usize,
    universe: &[Term],
    assignment: &mut Solution,
    facts: &HashSet<&Fact>,
    goals: &[Goal],
    found: &mut Vec<Solution>,
) {
    if i == vars.len() {
        if goals.iter().all(|g| holds(g, assignment, facts)) {
            found.push(assignment.clone());
        }
        return;
    }
    for value in universe {
        assignment.bind(vars[i].clone(), value.clone());
        enumerate(vars, i + 1, universe, assignment, facts, goals, found);
    }
    // Leave no stale binding behind for the caller.
    *assignment = assignment.project(&vars[..i].to_vec());
}

fn holds(goal: &Goal, assignment: &Solution, facts: &HashSet<&Fact>) -> bool {
    match goal {
        Goal::Atom { predicate, args } => {
            let grounded: Vec<Term> = args.iter().map(|a| assignment.apply(a)).collect();
            if !grounded.iter().all(Term::is_ground) {
                return false;
            }
            let fact = Fact { predicate: predicate.clone(), args: grounded };
            facts.contains(&fact)
        }
        Goal::Unify(l, r) | Goal::StructEq(l, r) => {
            assignment.apply(l) == assignment.apply(r)
        }
        Goal::StdGt(l, r) => {
            assignment.apply(l).cmp_std(&assignment.apply(r)) == Ordering::Greater
        }
        Goal::StdLt(l, r) => {
            assignment.apply(l).cmp_std(&assignment.apply(r)) == Ordering::Less
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::solve;
    use crate::prolog::parse_goal_list;

    #[test]
    fn rejects_non_conjunctive_goals() {
        let goals = parse_goal_list(r#"aggregate_all(count, p("a", X), N)"#).unwrap();
        assert!(matches!(
            brute_force_solve(&goals, &KnowledgeBase::new()),
            Err(OracleError::UnsupportedGoal(_))
        ));
    }

    #[test]
    fn empty_kb_matches_solve() {
        let goals = parse_goal_list("p(X)").unwrap();
        let kb = KnowledgeBase::new();
        let oracle = brute_force_solve(&goals, &kb).unwrap();
        assert!(oracle.is_empty());
        assert_eq!(oracle, solve(&goals, &kb).solutions);
    }

    #[test]
    fn ground_atom_present_yields_empty_binding() {
        let kb = KnowledgeBase::from_text(r#"p("a")."#).unwrap();
        let goals = parse_goal_list(r#"p("a")"#).unwrap();
        let oracle = brute_force_solve(&goals, &kb).unwrap();
        assert_eq!(oracle, SolutionSet::singleton_empty());
        assert_eq!(oracle, solve(&goals, &kb).solutions);
    }

    #[test]
    fn unify_against_goal_constant_matches_solve() {
        // "z" appears only in the goals, not the kb; the universe must still
        // cover it.
        let kb = KnowledgeBase::from_text(r#"p("a")."#).unwrap();
        let goals = parse_goal_list(r#"p(X), Y = "z""#).unwrap();
        let oracle = brute_force_solve(&goals, &kb).unwrap();
        let solved = solve(&goals, &kb).solutions;
        assert_eq!(oracle, solved);
        assert_eq!(oracle.len(), 1);
    }
}
