//! Random webs and brute-force oracles shared by the integration tests.
//! The oracles work on plain strings and never call into the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngCore};

pub const PREDICATES: [&str; 4] = ["knows", "name", "mbox", "img"];
pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";

/// A term as written in N-Triples: `<iri>` or `"literal"`.
pub type T = String;

#[derive(Debug, Clone)]
pub struct RandomWeb {
    /// Document IRI to its triples.
    pub docs: BTreeMap<String, Vec<(T, T, T)>>,
}

pub fn doc_iri(j: usize) -> String {
    format!("http://d{j}.ex/")
}

pub fn entity(j: usize, k: usize) -> T {
    format!("<http://d{j}.ex/#e{k}>")
}

impl RandomWeb {
    /// Up to `max_docs` documents with up to `max_triples` triples each.
    /// Some links point at documents that do not exist.
    pub fn generate(rng: &mut impl RngCore, max_docs: usize, max_triples: usize) -> Self {
        let n = rng.random_range(1..=max_docs);
        let mut docs = BTreeMap::new();
        for j in 0..n {
            let count = rng.random_range(0..=max_triples);
            let mut triples = Vec::new();
            for _ in 0..count {
                let s = if rng.random_bool(0.6) { entity(j, rng.random_range(0..2)) } else { entity(rng.random_range(0..n + 2), rng.random_range(0..2)) };
                let p = PREDICATES[rng.random_range(0..PREDICATES.len())];
                let o = if p == "name" {
                    format!("\"n{}\"", rng.random_range(0..4))
                } else {
                    entity(rng.random_range(0..n + 2), rng.random_range(0..2))
                };
                triples.push((s, format!("<{FOAF}{p}>"), o));
            }
            docs.insert(doc_iri(j), triples);
        }
        RandomWeb { docs }
    }

    pub fn body(&self, doc: &str) -> String {
        self.docs[doc].iter().map(|(s, p, o)| format!("{s} {p} {o} .\n")).collect()
    }

    pub fn bodies(&self) -> impl Iterator<Item = (String, String)> + '_ {
        self.docs.keys().map(|d| (d.clone(), self.body(d)))
    }
}

fn strip(term: &str) -> Option<String> {
    let iri = term.strip_prefix('<')?.strip_suffix('>')?;
    Some(iri.split('#').next().unwrap_or(iri).to_string())
}

/// Transitive closure following every subject and object IRI.
pub fn c_all_closure(web: &RandomWeb, seeds: &[String]) -> BTreeSet<String> {
    let mut reached: BTreeSet<String> = seeds.iter().cloned().collect();
    let mut frontier: Vec<String> = reached.iter().cloned().collect();
    while let Some(d) = frontier.pop() {
        for (s, _, o) in web.docs.get(&d).into_iter().flatten() {
            for t in [s, o] {
                if let Some(next) = strip(t) {
                    if reached.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
        }
    }
    reached
}

/// Union of the triples of every reached document.
pub fn union_triples(web: &RandomWeb, docs: &BTreeSet<String>) -> BTreeSet<(T, T, T)> {
    docs.iter().filter_map(|d| web.docs.get(d)).flatten().cloned().collect()
}

/// A pattern position: a variable name starting with `?` or a term.
pub type P = String;

/// `SELECT vars WHERE { required OPTIONAL { optional } }`, evaluated by
/// enumerating every combination of triples.
#[derive(Debug, Clone)]
pub struct OracleQuery {
    pub vars: Vec<String>,
    pub required: Vec<(P, P, P)>,
    pub optional: Vec<Vec<(P, P, P)>>,
}

impl OracleQuery {
    pub fn to_sparql(&self) -> String {
        let pat = |(s, p, o): &(P, P, P)| format!("{s} {p} {o} .");
        let mut q = format!("SELECT {} WHERE {{\n", self.vars.join(" "));
        for tp in &self.required {
            q += &format!("  {}\n", pat(tp));
        }
        for group in &self.optional {
            q += "  OPTIONAL {";
            for tp in group {
                q += &format!(" {}", pat(tp));
            }
            q += " }\n";
        }
        q + "}\n"
    }
}

type Binding = BTreeMap<String, T>;

fn bind_all(patterns: &[(P, P, P)], triples: &[(T, T, T)], start: &Binding) -> Vec<Binding> {
    // Nested loops: every triple for the first pattern, then recurse.
    let Some((tp, rest)) = patterns.split_first() else { return vec![start.clone()] };
    let mut out = Vec::new();
    for t in triples {
        let mut b = start.clone();
        let agrees = [(&tp.0, &t.0), (&tp.1, &t.1), (&tp.2, &t.2)].into_iter().all(|(pos, val)| {
            if !pos.starts_with('?') {
                return pos == val;
            }
            match b.get(pos) {
                Some(v) => v == val,
                None => {
                    b.insert(pos.clone(), val.clone());
                    true
                }
            }
        });
        if agrees {
            out.extend(bind_all(rest, triples, &b));
        }
    }
    out
}

/// Projected rows as a set; `None` is an unbound cell.
pub fn brute_eval(q: &OracleQuery, triples: &BTreeSet<(T, T, T)>) -> BTreeSet<Vec<Option<T>>> {
    let triples: Vec<(T, T, T)> = triples.iter().cloned().collect();
    let mut solutions = bind_all(&q.required, &triples, &Binding::new());
    for group in &q.optional {
        solutions = solutions
            .into_iter()
            .flat_map(|s| {
                let ext = bind_all(group, &triples, &s);
                if ext.is_empty() {
                    vec![s]
                } else {
                    ext
                }
            })
            .collect();
    }
    solutions.iter().map(|b| q.vars.iter().map(|v| b.get(v).cloned()).collect()).collect()
}

/// A small random query over the generated vocabulary, anchored at an
/// entity of the seed document.
pub fn random_query(rng: &mut impl RngCore, with_optional: bool) -> OracleQuery {
    let p = |name: &str| format!("<{FOAF}{name}>");
    let anchor = entity(0, rng.random_range(0..2));
    let mut required = vec![(anchor, p("knows"), "?a".to_string())];
    let mut vars = vec!["?a".to_string()];
    match rng.random_range(0..3) {
        0 => {
            required.push(("?a".into(), p("name"), "?b".into()));
            vars.push("?b".into());
        }
        1 => {
            required.push(("?a".into(), p("knows"), "?b".into()));
            vars.push("?b".into());
        }
        _ => {}
    }
    let mut optional = Vec::new();
    if with_optional && rng.random_bool(0.7) {
        optional.push(vec![("?a".into(), p("mbox"), "?c".into()), ("?a".into(), p("img"), "?d".into())]);
        vars.push("?c".into());
        vars.push("?d".into());
    }
    OracleQuery { vars, required, optional }
}

/// Random deny-by-default policy rules as JSON objects (no exclusive rules).
pub fn random_policy_rules(rng: &mut impl RngCore, n_docs: usize, count: usize, allow_only: bool) -> Vec<String> {
    (0..count)
        .map(|_| {
            let action = if allow_only || rng.random_bool(0.6) { "allow" } else { "deny" };
            let s = if rng.random_bool(0.3) {
                format!("\"http://d{}.ex/#e{}\"", rng.random_range(0..n_docs + 1), rng.random_range(0..2))
            } else {
                "\"?\"".to_string()
            };
            let p = if rng.random_bool(0.7) {
                format!("\"{FOAF}{}\"", PREDICATES[rng.random_range(0..PREDICATES.len())])
            } else {
                "\"?\"".to_string()
            };
            let source = match rng.random_range(0..3) {
                0 => "\"*\"".to_string(),
                1 => "\"same-origin-as-subject\"".to_string(),
                _ => format!("\"http://d{}.ex/\"", rng.random_range(0..n_docs + 1)),
            };
            let priority: i64 = rng.random_range(-2..4);
            format!(
                r#"{{ "action": "{action}", "pattern": {{ "s": {s}, "p": {p}, "o": "?" }}, "source": {source}, "priority": {priority} }}"#
            )
        })
        .collect()
}

pub fn policy_json(default: &str, rules: &[String]) -> String {
    format!(r#"{{ "default": "{default}", "rules": [ {} ] }}"#, rules.join(", "))
}

/// A registry with a few random scoped rules over a given default.
pub fn random_registry(rng: &mut impl RngCore, n_docs: usize, default: &str) -> String {
    let count = rng.random_range(0..4);
    let rules: Vec<String> = (0..count)
        .map(|_| {
            let scope = doc_iri(rng.random_range(0..n_docs.max(1)));
            let preds = if rng.random_bool(0.5) {
                "\"*\"".to_string()
            } else {
                format!("[\"{FOAF}{}\"]", PREDICATES[rng.random_range(0..PREDICATES.len())])
            };
            let follow = if rng.random_bool(0.3) {
                "\"self\"".to_string()
            } else {
                format!("[\"{FOAF}{}\"]", PREDICATES[rng.random_range(0..PREDICATES.len())])
            };
            format!(r#"{{ "scope": "{scope}", "patternPredicates": {preds}, "follow": {follow} }}"#)
        })
        .collect();
    format!(r#"{{ "default": "{default}", "rules": [ {} ] }}"#, rules.join(", "))
}
