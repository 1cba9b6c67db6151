//! Turning document IRIs into parsed documents, with a ledger of every request.

mod deref;
mod fixture;
mod http;
mod ledger;

use std::path::PathBuf;

use thiserror::Error;

use crate::rdf::{Graph, Iri};
use crate::syntax::PrefixMap;

pub use deref::{Dereferenced, Dereferencer};
pub use fixture::{load_fixture_web, FixtureManifest, FixtureSource};
pub use http::{live_http_source, HttpConfig, HttpSource};
pub use ledger::{FetchLedger, FetchOutcome, LedgerEntry};

#[derive(Debug, Error)]
pub enum WebError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid fixture manifest {path}: {reason}")]
    Manifest { path: PathBuf, reason: String },
    #[error("fixture body missing for {iri}: {path}")]
    MissingBody { iri: Iri, path: PathBuf },
    #[error("cannot build HTTP client: {0}")]
    Client(String),
}

/// A dereferenced web document. Its triples already have relative
/// references resolved against `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub doc_iri: Iri,
    pub base: Iri,
    pub triples: Graph,
}

impl Document {
    pub fn empty(doc_iri: Iri) -> Self {
        Document { base: doc_iri.clone(), doc_iri, triples: Graph::new() }
    }
}

/// What a source hands back for one GET.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceResponse {
    Body { final_iri: Iri, body: Vec<u8> },
    NotFound(String),
    Oversize { limit: u64 },
}

/// Anything that can serve document bodies by IRI.
pub trait DocumentSource: Send + Sync {
    /// `doc_iri` never carries a fragment.
    fn get(&self, doc_iri: &Iri) -> SourceResponse;

    /// Prefixes available to every document body without declaration.
    fn predeclared_prefixes(&self) -> PrefixMap {
        PrefixMap::new()
    }
}

impl<S: DocumentSource + ?Sized> DocumentSource for &S {
    fn get(&self, doc_iri: &Iri) -> SourceResponse {
        (**self).get(doc_iri)
    }

    fn predeclared_prefixes(&self) -> PrefixMap {
        (**self).predeclared_prefixes()
    }
}

impl<S: DocumentSource + ?Sized> DocumentSource for Box<S> {
    fn get(&self, doc_iri: &Iri) -> SourceResponse {
        (**self).get(doc_iri)
    }

    fn predeclared_prefixes(&self) -> PrefixMap {
        (**self).predeclared_prefixes()
    }
}
