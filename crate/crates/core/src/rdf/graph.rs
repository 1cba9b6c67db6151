use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{match_triple, Iri, SolutionMapping, Term, Triple, TriplePattern};

/// A set of triples with subject-, predicate- and object-keyed indexes.
///
/// Iteration and matching always follow (subject, predicate, object) order.
#[derive(Clone, Default)]
pub struct Graph {
    spo: BTreeSet<Triple>,
    by_subject: BTreeMap<Iri, BTreeSet<Triple>>,
    by_predicate: BTreeMap<Iri, BTreeSet<Triple>>,
    by_object: BTreeMap<Term, BTreeSet<Triple>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.spo.contains(&triple) {
            return false;
        }
        self.by_subject.entry(triple.subject.clone()).or_default().insert(triple.clone());
        self.by_predicate.entry(triple.predicate.clone()).or_default().insert(triple.clone());
        self.by_object.entry(triple.object.clone()).or_default().insert(triple.clone());
        self.spo.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.spo.iter()
    }

    /// Every triple matching `pattern`, with its bindings, in triple order.
    pub fn matches(&self, pattern: &TriplePattern) -> Vec<(Triple, SolutionMapping)> {
        static EMPTY: BTreeSet<Triple> = BTreeSet::new();
        let subject = pattern.subject.as_const();
        let predicate = pattern.predicate.as_const();
        let object = pattern.object.as_const();

        // Pick the smallest applicable index; each is already in triple order.
        let mut candidates: &BTreeSet<Triple> = &self.spo;
        if let Some(s) = subject {
            let set = s.as_iri().and_then(|i| self.by_subject.get(i)).unwrap_or(&EMPTY);
            if set.len() < candidates.len() {
                candidates = set;
            }
        }
        if let Some(p) = predicate {
            let set = p.as_iri().and_then(|i| self.by_predicate.get(i)).unwrap_or(&EMPTY);
            if set.len() < candidates.len() {
                candidates = set;
            }
        }
        if let Some(o) = object {
            let set = self.by_object.get(o).unwrap_or(&EMPTY);
            if set.len() < candidates.len() {
                candidates = set;
            }
        }

        candidates
            .iter()
            .filter_map(|t| match_triple(t, pattern).map(|m| (t.clone(), m)))
            .collect()
    }

    /// One `<s> <p> <o> .` line per triple, sorted, LF-terminated.
    pub fn to_ntriples(&self) -> String {
        let mut out = String::new();
        for t in &self.spo {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

/// Convenience wrapper for a single pattern lookup on a graph.
pub fn graph_match(graph: &Graph, pattern: &TriplePattern) -> Vec<(Triple, SolutionMapping)> {
    graph.matches(pattern)
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.spo == other.spo
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.spo.iter()).finish()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.spo.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{Literal, PatternTerm};
    use proptest::prelude::*;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Iri::parse(s).unwrap(), Iri::parse(p).unwrap(), Term::iri(o))
    }

    fn small_triple() -> impl Strategy<Value = Triple> {
        (0..4u8, 0..3u8, 0..5u8, any::<bool>()).prop_map(|(s, p, o, lit)| {
            let object: Term = if lit {
                Literal::simple(format!("v{o}")).into()
            } else {
                Term::iri(&format!("http://n.ex/{o}"))
            };
            Triple::new(
                Iri::parse(format!("http://n.ex/{s}")).unwrap(),
                Iri::parse(format!("http://p.ex/{p}")).unwrap(),
                object,
            )
        })
    }

    fn small_pattern() -> impl Strategy<Value = TriplePattern> {
        let pos = |kind: u8, n: u8, base: &'static str| -> PatternTerm {
            match kind {
                0 => PatternTerm::var(["a", "b"][(n % 2) as usize]),
                _ => PatternTerm::iri(&format!("{base}{}", n % 4)),
            }
        };
        (0..2u8, 0..8u8, 0..2u8, 0..8u8, 0..2u8, 0..8u8).prop_map(move |(a, b, c, d, e, f)| {
            TriplePattern::new(pos(a, b, "http://n.ex/"), pos(c, d, "http://p.ex/"), pos(e, f, "http://n.ex/"))
        })
    }

    #[test]
    fn duplicates_are_ignored() {
        let mut g = Graph::new();
        assert!(g.insert(t("http://a.ex/", "http://p.ex/", "http://b.ex/")));
        assert!(!g.insert(t("http://a.ex/", "http://p.ex/", "http://b.ex/")));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn empty_graph_matches_nothing() {
        let p = TriplePattern::new(PatternTerm::var("s"), PatternTerm::var("p"), PatternTerm::var("o"));
        assert!(Graph::new().matches(&p).is_empty());
    }

    #[test]
    fn fully_concrete_pattern_is_membership() {
        let g: Graph = [t("http://a.ex/", "http://p.ex/", "http://b.ex/")].into_iter().collect();
        let hit = TriplePattern::from(&t("http://a.ex/", "http://p.ex/", "http://b.ex/"));
        let miss = TriplePattern::from(&t("http://a.ex/", "http://p.ex/", "http://c.ex/"));
        assert_eq!(g.matches(&hit).len(), 1);
        assert!(g.matches(&hit)[0].1.is_empty());
        assert!(g.matches(&miss).is_empty());
    }

    proptest! {
        #[test]
        fn matches_equal_filtered_scan(triples in proptest::collection::vec(small_triple(), 0..25), pattern in small_pattern()) {
            let g: Graph = triples.into_iter().collect();
            let expected: Vec<_> = g.iter().filter_map(|t| match_triple(t, &pattern).map(|m| (t.clone(), m))).collect();
            prop_assert_eq!(g.matches(&pattern), expected);
        }

        #[test]
        fn insertion_order_does_not_matter(triples in proptest::collection::vec(small_triple(), 0..25), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let forward: Graph = triples.iter().cloned().collect();
            let mut shuffled = triples.clone();
            shuffled.extend(triples.iter().cloned());
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let other: Graph = shuffled.into_iter().collect();
            prop_assert_eq!(&forward, &other);
            prop_assert_eq!(forward.to_ntriples(), other.to_ntriples());
        }
    }
}
