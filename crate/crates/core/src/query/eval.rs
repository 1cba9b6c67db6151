use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::rdf::{Graph, SolutionMapping, Term, TriplePattern, Variable};

use super::{Query, Solutions};

/// Evaluates `query` over `graph`: projected, deduplicated, sorted with
/// unbound values last.
pub fn evaluate(query: &Query, graph: &Graph) -> Solutions {
    let rows: BTreeSet<SolutionMapping> =
        solve(query, graph).iter().map(|m| m.project(query.projection())).collect();
    let mut rows: Vec<SolutionMapping> = rows.into_iter().collect();
    rows.sort_by(|a, b| compare_rows(a, b, query.projection()));
    Solutions::new(query.projection().to_vec(), rows)
}

/// Full solution mappings before projection, deduplicated, in projection
/// order. Used to recover which triples support each result row.
pub fn evaluate_unprojected(query: &Query, graph: &Graph) -> Vec<SolutionMapping> {
    let mut rows: Vec<SolutionMapping> = solve(query, graph).into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    rows.sort_by(|a, b| compare_rows(a, b, query.projection()).then_with(|| a.cmp(b)));
    rows
}

fn solve(query: &Query, graph: &Graph) -> Vec<SolutionMapping> {
    let mut solutions = join(vec![SolutionMapping::new()], query.required(), graph);
    for group in query.optional_groups() {
        solutions = solutions
            .into_iter()
            .flat_map(|s| {
                let extended = join(vec![s.clone()], group, graph);
                if extended.is_empty() {
                    vec![s]
                } else {
                    extended
                }
            })
            .collect();
    }
    solutions
}

fn join(mut solutions: Vec<SolutionMapping>, patterns: &[TriplePattern], graph: &Graph) -> Vec<SolutionMapping> {
    for pattern in patterns {
        let mut next = Vec::new();
        for s in &solutions {
            let bound = pattern.substitute(s);
            for (_, m) in graph.matches(&bound) {
                if let Some(merged) = s.merge(&m) {
                    next.push(merged);
                }
            }
        }
        solutions = next;
        if solutions.is_empty() {
            break;
        }
    }
    solutions
}

pub(crate) fn compare_values(a: Option<&Term>, b: Option<&Term>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

fn compare_rows(a: &SolutionMapping, b: &SolutionMapping, vars: &[Variable]) -> Ordering {
    vars.iter()
        .map(|v| compare_values(a.get(v), b.get(v)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}
