//! Human- and machine-readable summaries of traversal runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::guidance::ContentPolicy;
use crate::query::{evaluate_unprojected, Query, Solutions};
use crate::rdf::{Iri, PatternTerm, SolutionMapping, Term, Triple, TriplePattern};
use crate::syntax::default_prefixes;
use crate::traversal::{PruneCause, Reason, Semantics, TraversalRun, TraversalTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Unguided(Semantics),
    Guided,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Unguided(s) => write!(f, "unguided {s}"),
            Mode::Guided => f.write_str("guided"),
        }
    }
}

/// The outcome of one `run`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: Mode,
    pub solutions: Solutions,
    /// Successfully fetched documents, sorted.
    pub documents: Vec<Iri>,
    pub elapsed_us: Option<u128>,
}

impl RunReport {
    pub fn new(mode: Mode, solutions: Solutions, trace: &TraversalTrace) -> Self {
        RunReport { mode, solutions, documents: trace.ledger.ok_documents().into_iter().collect(), elapsed_us: None }
    }

    pub fn documents_fetched(&self) -> usize {
        self.documents.len()
    }

    /// Keys come out sorted, so parsing and re-printing is lossless.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "documents": self.documents.iter().map(Iri::as_str).collect::<Vec<_>>(),
            "documents_fetched": self.documents_fetched(),
            "mode": self.mode.to_string(),
            "solutions": self.solutions.to_json(),
            "variables": self.solutions.variables().iter().map(|v| v.name()).collect::<Vec<_>>(),
        });
        if let Some(us) = self.elapsed_us {
            v["elapsed_us"] = json!(us as u64);
        }
        v
    }

    pub fn summary(&self) -> String {
        let mut out = format!("mode: {}\ndocuments fetched: {}\n", self.mode, self.documents_fetched());
        for d in &self.documents {
            let _ = writeln!(out, "  {d}");
        }
        if let Some(us) = self.elapsed_us {
            let _ = writeln!(out, "elapsed: {:.3} ms", us as f64 / 1000.0);
        }
        out
    }
}

/// Successful fetches below one document linked straight from a seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeCount {
    pub root: Iri,
    pub label: String,
    pub unguided: usize,
    pub guided: usize,
}

/// Groups the unguided run's documents by the wave-1 document they were
/// reached through and counts how many of each group both runs fetched.
pub fn subtree_counts(unguided: &TraversalTrace, guided: &TraversalTrace) -> Vec<SubtreeCount> {
    let mut groups: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for a in unguided.admitted() {
        let chain = unguided.chain_to(&a.doc_iri);
        if let Some(root) = chain.iter().find(|c| c.wave == 1) {
            groups.entry(root.doc_iri.clone()).or_default().insert(a.doc_iri.clone());
        }
    }
    let hosts: Vec<Option<String>> = groups.keys().map(Iri::host).collect();
    groups
        .into_iter()
        .filter_map(|(root, docs)| {
            let unguided_n = unguided.ledger.distinct_ok_among(&docs);
            if unguided_n == 0 {
                return None;
            }
            let host = root.host();
            let label = match &host {
                Some(h) if hosts.iter().filter(|o| o.as_ref() == Some(h)).count() == 1 => h.clone(),
                _ => root.to_string(),
            };
            Some(SubtreeCount { label, unguided: unguided_n, guided: guided.ledger.distinct_ok_among(&docs), root })
        })
        .collect()
}

/// Side-by-side result of `compare`.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub unguided: RunReport,
    pub guided: RunReport,
    pub subtrees: Vec<SubtreeCount>,
    /// Rows under c-all and under the structure registry with a permissive policy.
    pub c_all_rows: usize,
    pub structure_only_rows: usize,
    pub structure_only_changed: bool,
}

impl Comparison {
    pub fn rows_removed(&self) -> Vec<&SolutionMapping> {
        let kept: BTreeSet<&SolutionMapping> = self.guided.solutions.iter().collect();
        self.unguided.solutions.iter().filter(|r| !kept.contains(r)).collect()
    }

    pub fn rows_added(&self) -> Vec<&SolutionMapping> {
        let before: BTreeSet<&SolutionMapping> = self.unguided.solutions.iter().collect();
        self.guided.solutions.iter().filter(|r| !before.contains(r)).collect()
    }

    pub fn to_text(&self) -> String {
        let vars = self.unguided.solutions.variables();
        let row = |m: &SolutionMapping| -> String {
            vars.iter().map(|v| m.get(v).map_or_else(|| "NULL".to_string(), ToString::to_string)).collect::<Vec<_>>().join("  ")
        };
        let removed = self.rows_removed();
        let added = self.rows_added();
        let mut out = format!(
            "unguided: {} rows / {} docs; guided: {} rows / {} docs; rows removed: {}\n",
            self.unguided.solutions.len(),
            self.unguided.documents_fetched(),
            self.guided.solutions.len(),
            self.guided.documents_fetched(),
            removed.len(),
        );
        if let Mode::Unguided(sem) = self.unguided.mode {
            let _ = writeln!(out, "unguided semantics: {sem}");
        }
        for (title, rows) in [("rows removed", &removed), ("rows added", &added)] {
            let _ = writeln!(out, "{title}: {}", rows.len());
            for r in rows.iter() {
                let _ = writeln!(out, "  {}", row(r));
            }
        }
        for s in &self.subtrees {
            let _ = writeln!(out, "{} requests: {} → {}", s.label, s.unguided, s.guided);
        }
        let _ = writeln!(
            out,
            "structure pruning alone: {} ({} rows vs {} under c-all)",
            if self.structure_only_changed { "changed results" } else { "results unchanged" },
            self.structure_only_rows,
            self.c_all_rows,
        );
        if let Some(us) = self.unguided.elapsed_us.zip(self.guided.elapsed_us).map(|(a, b)| a + b) {
            let _ = writeln!(out, "elapsed: {:.3} ms", us as f64 / 1000.0);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows = |rows: Vec<&SolutionMapping>| -> Value {
            Solutions::new(self.unguided.solutions.variables().to_vec(), rows.into_iter().cloned().collect()).to_json()
        };
        json!({
            "guided": self.guided.to_json(),
            "rows_added": rows(self.rows_added()),
            "rows_removed": rows(self.rows_removed()),
            "structure_only": {
                "c_all_rows": self.c_all_rows,
                "changed_results": self.structure_only_changed,
                "rows": self.structure_only_rows,
            },
            "subtrees": self.subtrees.iter().map(|s| json!({
                "guided": s.guided,
                "label": s.label,
                "root": s.root.as_str(),
                "unguided": s.unguided,
            })).collect::<Vec<_>>(),
            "unguided": self.unguided.to_json(),
        })
    }
}

/// `foaf:name` where a built-in prefix fits, `<iri>` otherwise.
pub fn compact_iri(iri: &Iri) -> String {
    for (prefix, ns) in default_prefixes() {
        if let Some(local) = iri.as_str().strip_prefix(ns.as_str()) {
            if !local.is_empty() && local.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-') {
                return format!("{prefix}:{local}");
            }
        }
    }
    format!("<{iri}>")
}

pub fn compact_term(term: &Term) -> String {
    match term {
        Term::Iri(i) => compact_iri(i),
        Term::Literal(l) => l.to_string(),
    }
}

pub fn compact_triple(t: &Triple) -> String {
    format!("({}, {}, {})", compact_iri(&t.subject), compact_iri(&t.predicate), compact_term(&t.object))
}

fn compact_pattern(tp: &TriplePattern) -> String {
    let term = |p: &PatternTerm| match p {
        PatternTerm::Const(t) => compact_term(t),
        PatternTerm::Var(v) => v.to_string(),
    };
    format!("{} {} {}", term(&tp.subject), term(&tp.predicate), term(&tp.object))
}

/// Why `doc` was or was not fetched. `None` if the run never saw it.
pub fn explain_doc(trace: &TraversalTrace, doc: &Iri) -> Option<String> {
    let doc = doc.strip_fragment();
    let outcome = |d: &Iri| {
        trace.ledger.entries().iter().find(|e| e.request == *d).map_or("not requested".to_string(), |e| {
            serde_json::to_value(e.outcome).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
        })
    };
    if trace.admission_of(&doc).is_some() {
        let mut out = String::new();
        for a in trace.chain_to(&doc) {
            match &a.reason {
                Reason::Seed => {
                    let _ = writeln!(out, "{}: seed ({})", a.doc_iri, outcome(&a.doc_iri));
                }
                Reason::Link { from, via_triple, via_tp, rule } => {
                    let _ = write!(out, "{}: linked from {from} by {}", a.doc_iri, compact_triple(via_triple));
                    if let Some(tp) = via_tp {
                        let _ = write!(out, " for pattern {}", compact_pattern(tp));
                    }
                    if let Some(rule) = rule {
                        let _ = write!(out, " under structure rule #{rule}");
                    }
                    let _ = writeln!(out, " ({})", outcome(&a.doc_iri));
                }
                Reason::Pruned { .. } => {}
            }
        }
        return Some(out);
    }
    let pruned = trace.pruning_of(&doc)?;
    let Reason::Pruned { from, via_triple, cause } = &pruned.reason else { return None };
    let link = format!("linking triple {} from {from}", compact_triple(via_triple));
    let text = match cause {
        PruneCause::PolicyDenied { rule: Some(n), .. } => format!("not fetched: {link} denied by policy rule #{n}"),
        PruneCause::PolicyDenied { rule: None, near_misses } if !near_misses.is_empty() => {
            let rules: Vec<String> = near_misses.iter().map(|n| format!("#{n}")).collect();
            format!(
                "not fetched: {link} denied by policy rule {} (pattern matches, source does not; default deny)",
                rules.join(", ")
            )
        }
        PruneCause::PolicyDenied { .. } => format!("not fetched: {link} denied by the policy default"),
        PruneCause::StructureRejected => {
            format!("not fetched: no linking structure rule admits it for any query pattern ({link})")
        }
        PruneCause::NotFollowed(sem) => format!("not fetched: {sem} does not follow {link}"),
    };
    Some(text + "\n")
}

/// Supporting triples for result row `row` (1-based), with their sources.
/// `policy` is `None` for unguided runs. Returns `None` for an unknown row.
pub fn explain_row(
    query: &Query,
    solutions: &Solutions,
    run: &TraversalRun,
    policy: Option<&ContentPolicy>,
    row: usize,
) -> Option<String> {
    let target = solutions.rows().get(row.checked_sub(1)?)?;
    let graph = run.pool.graph();
    let patterns: Vec<&TriplePattern> = query.required().iter().chain(query.optional_groups().iter().flatten()).collect();
    let mut support: BTreeSet<Triple> = BTreeSet::new();
    for m in evaluate_unprojected(query, &graph) {
        if m.project(query.projection()) != *target {
            continue;
        }
        for tp in &patterns {
            if let Some(t) = tp.substitute(&m).to_triple() {
                if graph.contains(&t) {
                    support.insert(t);
                }
            }
        }
    }

    let cells: Vec<String> = solutions
        .variables()
        .iter()
        .map(|v| format!("{v}={}", target.get(v).map_or_else(|| "NULL".to_string(), compact_term)))
        .collect();
    let mut out = format!("row {row}: {}\n", cells.join(" "));
    for t in &support {
        let _ = writeln!(out, "  {} {} {}", compact_iri(&t.subject), compact_iri(&t.predicate), compact_term(&t.object));
        for src in run.pool.sources_of(t) {
            let why = match policy {
                None => "unguided, every triple counts".to_string(),
                Some(p) => match p.decide(t, &src).rule {
                    Some((_, r)) => format!("policy rule #{}", r.number),
                    None => "policy default".to_string(),
                },
            };
            let _ = writeln!(out, "    from {src} ({why})");
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::evaluate;
    use crate::sample;
    use crate::traversal::{evaluate_augmented, evaluate_unguided, TraversalConfig};

    fn iri(s: &str) -> Iri {
        Iri::parse(s).unwrap()
    }

    fn config() -> TraversalConfig {
        TraversalConfig::new([iri(sample::UMA_WEBID)])
    }

    #[test]
    fn explains_the_skipped_dbpedia_entry() {
        let web = sample::address_book_web();
        let q = sample::friends_query();
        let (_, run) = evaluate_augmented(&q, &sample::structures(), &sample::uma_policy(), &config(), &web).unwrap();
        let text = explain_doc(&run.trace, &iri(sample::MICKEY)).unwrap();
        assert!(
            text.starts_with(
                "not fetched: linking triple (<https://uma.ex/#me>, foaf:knows, dbr:Mickey_Mouse) from https://bob.ex/ denied by policy rule #1"
            ),
            "{text}"
        );
        assert_eq!(explain_doc(&run.trace, &iri("https://uma.ex/")).unwrap(), "https://uma.ex/: seed (ok)\n");
        let about = explain_doc(&run.trace, &iri("https://ann.ex/about/")).unwrap();
        assert_eq!(about.lines().count(), 3);
        assert!(about.contains("foaf:isPrimaryTopicOf"), "{about}");
        assert!(explain_doc(&run.trace, &iri("https://nowhere.ex/")).is_none());
    }

    #[test]
    fn row_one_is_supported_by_the_about_document() {
        let web = sample::address_book_web();
        let q = sample::friends_query();
        let policy = sample::uma_policy();
        let (rows, run) = evaluate_augmented(&q, &sample::structures(), &policy, &config(), &web).unwrap();
        let text = explain_row(&q, &rows, &run, Some(&policy), 1).unwrap();
        let about_lines = text.lines().filter(|l| l.contains("from https://ann.ex/about/")).count();
        assert_eq!(about_lines, 3, "{text}");
        assert!(text.contains("from https://uma.ex/ (policy rule #1)"), "{text}");
        assert!(explain_row(&q, &rows, &run, Some(&policy), 3).is_none());
        assert!(explain_row(&q, &rows, &run, Some(&policy), 0).is_none());
    }

    #[test]
    fn compare_reports_subtrees_and_row_difference() {
        let web = sample::address_book_web();
        let q = sample::friends_query();
        let (u_rows, u_run) = evaluate_unguided(&q, Semantics::CAll, &config(), &web).unwrap();
        let (g_rows, g_run) =
            evaluate_augmented(&q, &sample::structures(), &sample::uma_policy(), &config(), &web).unwrap();
        let subtrees = subtree_counts(&u_run.trace, &g_run.trace);
        let ann = subtrees.iter().find(|s| s.label == "ann.ex").unwrap();
        assert_eq!((ann.unguided, ann.guided), (4, 2));
        let cmp = Comparison {
            unguided: RunReport::new(Mode::Unguided(Semantics::CAll), u_rows, &u_run.trace),
            guided: RunReport::new(Mode::Guided, g_rows, &g_run.trace),
            subtrees,
            c_all_rows: 5,
            structure_only_rows: 4,
            structure_only_changed: true,
        };
        let text = cmp.to_text();
        assert!(text.starts_with("unguided: 5 rows / 7 docs; guided: 2 rows / 4 docs; rows removed: 3\n"), "{text}");
        assert!(text.contains("ann.ex requests: 4 → 2\n"), "{text}");
        assert!(cmp.rows_added().is_empty());
    }

    #[test]
    fn run_report_json_round_trips() {
        let web = sample::address_book_web();
        let q = sample::friends_query();
        let (rows, run) = evaluate_unguided(&q, Semantics::CAll, &config(), &web).unwrap();
        let mut report = RunReport::new(Mode::Unguided(Semantics::CAll), rows, &run.trace);
        report.elapsed_us = Some(1234);
        let text = serde_json::to_string_pretty(&report.to_json()).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        assert_eq!(back["documents_fetched"], 7);
        assert_eq!(report.documents_fetched(), run.trace.ledger.distinct_ok());
        assert_eq!(evaluate(&q, &run.pool.graph()).len(), back["solutions"].as_array().unwrap().len());
    }
}
