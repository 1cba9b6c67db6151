//! Link traversal: which documents get fetched, and which of their triples
//! end up in the pool a query is evaluated over.

mod engine;
mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::rdf::{Graph, Iri, Triple};
use crate::webfetch::FetchLedger;

pub use engine::{evaluate_augmented, evaluate_unguided, traverse_guided, traverse_unguided};
pub use trace::{Admission, PruneCause, Reason, TraversalTrace};

pub const DEFAULT_MAX_DOCUMENTS: usize = 64;
pub const DEFAULT_WORKERS: usize = 4;

/// Which links an unguided traversal follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semantics {
    /// Seeds only.
    CNone,
    /// Every subject or object IRI.
    CAll,
    /// Subject or object IRIs of triples matching a query pattern.
    CMatch,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::CNone => "c-none",
            Semantics::CAll => "c-all",
            Semantics::CMatch => "c-match",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c-none" => Ok(Semantics::CNone),
            "c-all" => Ok(Semantics::CAll),
            "c-match" => Ok(Semantics::CMatch),
            _ => Err(format!("unknown semantics {s:?} (expected c-none, c-all or c-match)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalConfig {
    /// Fragments are stripped and duplicates dropped.
    pub seeds: Vec<Iri>,
    /// Upper bound on documents requested.
    pub max_documents: usize,
    /// Concurrent fetches per wave.
    pub workers: usize,
    /// When set, each wave is fetched in an order shuffled with this seed.
    /// Results do not depend on it.
    pub fetch_shuffle: Option<u64>,
}

impl TraversalConfig {
    pub fn new(seeds: impl IntoIterator<Item = Iri>) -> Self {
        TraversalConfig {
            seeds: seeds.into_iter().collect(),
            max_documents: DEFAULT_MAX_DOCUMENTS,
            workers: DEFAULT_WORKERS,
            fetch_shuffle: None,
        }
    }

    pub fn with_max_documents(mut self, max: usize) -> Self {
        self.max_documents = max;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_fetch_shuffle(mut self, seed: u64) -> Self {
        self.fetch_shuffle = Some(seed);
        self
    }

    fn normalized_seeds(&self) -> Vec<Iri> {
        let mut seen = BTreeSet::new();
        self.seeds.iter().map(Iri::strip_fragment).filter(|s| seen.insert(s.clone())).collect()
    }
}

/// Triples together with the documents they came from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriplePool {
    entries: BTreeSet<(Triple, Iri)>,
}

impl TriplePool {
    pub fn new(entries: BTreeSet<(Triple, Iri)>) -> Self {
        TriplePool { entries }
    }

    pub fn entries(&self) -> &BTreeSet<(Triple, Iri)> {
        &self.entries
    }

    /// The union graph, provenance dropped.
    pub fn graph(&self) -> Graph {
        self.entries.iter().map(|(t, _)| t.clone()).collect()
    }

    pub fn provenance(&self) -> BTreeMap<Triple, BTreeSet<Iri>> {
        let mut out: BTreeMap<Triple, BTreeSet<Iri>> = BTreeMap::new();
        for (t, d) in &self.entries {
            out.entry(t.clone()).or_default().insert(d.clone());
        }
        out
    }

    pub fn sources_of(&self, triple: &Triple) -> BTreeSet<Iri> {
        self.entries.iter().filter(|(t, _)| t == triple).map(|(_, d)| d.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A finished traversal.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversalRun {
    pub pool: TriplePool,
    pub trace: TraversalTrace,
}

#[derive(Debug, Error)]
pub enum TraversalError {
    #[error("no seed documents given")]
    NoSeeds,
    #[error("traversal stopped at the limit of {limit} documents")]
    Capped { limit: usize, partial: Box<TraversalRun> },
}

/// Distinct successfully fetched documents among `docs`.
pub fn subtree_request_count<'a>(ledger: &FetchLedger, docs: impl IntoIterator<Item = &'a Iri>) -> usize {
    ledger.distinct_ok_among(docs)
}
