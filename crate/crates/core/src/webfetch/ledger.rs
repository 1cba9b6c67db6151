use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::rdf::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FetchOutcome {
    Ok,
    NotFound,
    ParseError,
    Oversize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub request: Iri,
    pub outcome: FetchOutcome,
    pub cache_hit: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Every dereference the engine asked for, in request order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchLedger {
    entries: Vec<LedgerEntry>,
}

impl FetchLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, entry: LedgerEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    /// Distinct fragment-stripped IRIs whose fetch succeeded.
    pub fn ok_documents(&self) -> BTreeSet<Iri> {
        self.entries
            .iter()
            .filter(|e| e.outcome == FetchOutcome::Ok)
            .map(|e| e.request.strip_fragment())
            .collect()
    }

    pub fn distinct_ok(&self) -> usize {
        self.ok_documents().len()
    }

    /// How many of `docs` were successfully fetched.
    pub fn distinct_ok_among<'a>(&self, docs: impl IntoIterator<Item = &'a Iri>) -> usize {
        let ok = self.ok_documents();
        docs.into_iter().map(Iri::strip_fragment).collect::<BTreeSet<_>>().iter().filter(|d| ok.contains(*d)).count()
    }

    /// Distinct documents requested from the source (cache misses).
    pub fn distinct_requests(&self) -> BTreeSet<Iri> {
        self.entries.iter().filter(|e| !e.cache_hit).map(|e| e.request.strip_fragment()).collect()
    }

    pub fn contains_request(&self, iri: &Iri) -> bool {
        let iri = iri.strip_fragment();
        self.entries.iter().any(|e| e.request == iri)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entry(i: u8, frag: bool, outcome: FetchOutcome) -> LedgerEntry {
        let s = if frag { format!("http://d.ex/{i}#x") } else { format!("http://d.ex/{i}") };
        LedgerEntry { request: Iri::parse(s).unwrap().strip_fragment(), outcome, cache_hit: false, detail: None }
    }

    proptest! {
        #[test]
        fn distinct_ok_counts_each_document_once(reqs in proptest::collection::vec((0..6u8, any::<bool>(), any::<bool>()), 0..30)) {
            let mut ledger = FetchLedger::new();
            let mut expected = BTreeSet::new();
            for (i, frag, ok) in reqs {
                let outcome = if ok { FetchOutcome::Ok } else { FetchOutcome::NotFound };
                if ok {
                    expected.insert(i);
                }
                ledger.record(entry(i, frag, outcome));
            }
            prop_assert_eq!(ledger.distinct_ok(), expected.len());
        }
    }

    #[test]
    fn outcome_serializes_kebab_case() {
        assert_eq!(serde_json::to_string(&FetchOutcome::ParseError).unwrap(), "\"parse-error\"");
        assert_eq!(serde_json::to_string(&FetchOutcome::NotFound).unwrap(), "\"not-found\"");
    }
}
