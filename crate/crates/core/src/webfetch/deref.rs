use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::rdf::{parse_turtle, Iri};
use crate::syntax::PrefixMap;

use super::{Document, DocumentSource, FetchLedger, FetchOutcome, LedgerEntry, SourceResponse};

#[derive(Debug, Clone)]
pub struct Dereferenced {
    pub document: Arc<Document>,
    pub outcome: FetchOutcome,
    pub cache_hit: bool,
}

/// Fetches and parses documents through a source, caching by document IRI
/// and logging every request. Safe to call from several threads.
pub struct Dereferencer<S> {
    source: S,
    prefixes: PrefixMap,
    cache: Mutex<HashMap<Iri, (Arc<Document>, FetchOutcome)>>,
    ledger: Mutex<FetchLedger>,
}

impl<S: DocumentSource> Dereferencer<S> {
    pub fn new(source: S) -> Self {
        let prefixes = source.predeclared_prefixes();
        Dereferencer { source, prefixes, cache: Mutex::default(), ledger: Mutex::default() }
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    /// Fetches the document behind `iri` (fragment stripped). Failures are
    /// soft: they yield an empty document and are recorded in the ledger.
    pub fn dereference(&self, iri: &Iri) -> Dereferenced {
        let (deref, entry) = self.fetch(iri);
        self.ledger.lock().expect("ledger lock").record(entry);
        deref
    }

    /// Like [`Dereferencer::dereference`] but hands the ledger entry back
    /// instead of recording it, so callers can log in their own order.
    pub fn fetch(&self, iri: &Iri) -> (Dereferenced, LedgerEntry) {
        let doc_iri = iri.strip_fragment();
        if let Some((document, outcome)) = self.cache.lock().expect("cache lock").get(&doc_iri).cloned() {
            let entry = LedgerEntry { request: doc_iri, outcome, cache_hit: true, detail: None };
            return (Dereferenced { document, outcome, cache_hit: true }, entry);
        }

        let (document, outcome, detail) = match self.source.get(&doc_iri) {
            SourceResponse::Body { final_iri, body } => {
                let final_iri = final_iri.strip_fragment();
                match String::from_utf8(body) {
                    Ok(text) => match parse_turtle(&text, &final_iri, &self.prefixes) {
                        Ok(triples) => {
                            (Document { doc_iri: final_iri.clone(), base: final_iri, triples }, FetchOutcome::Ok, None)
                        }
                        Err(e) => (Document::empty(final_iri), FetchOutcome::ParseError, Some(e.to_string())),
                    },
                    Err(_) => (Document::empty(final_iri), FetchOutcome::ParseError, Some("body is not UTF-8".into())),
                }
            }
            SourceResponse::NotFound(reason) => (Document::empty(doc_iri.clone()), FetchOutcome::NotFound, Some(reason)),
            SourceResponse::Oversize { limit } => (
                Document::empty(doc_iri.clone()),
                FetchOutcome::Oversize,
                Some(format!("body exceeds {limit} bytes")),
            ),
        };

        let document = Arc::new(document);
        let mut cache = self.cache.lock().expect("cache lock");
        let (document, outcome) = cache.entry(doc_iri.clone()).or_insert((document, outcome)).clone();
        drop(cache);
        let entry = LedgerEntry { request: doc_iri, outcome, cache_hit: false, detail };
        (Dereferenced { document, outcome, cache_hit: false }, entry)
    }

    pub fn ledger(&self) -> FetchLedger {
        self.ledger.lock().expect("ledger lock").clone()
    }

    pub fn into_ledger(self) -> FetchLedger {
        self.ledger.into_inner().expect("ledger lock")
    }
}
