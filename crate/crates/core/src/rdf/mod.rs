//! RDF terms, triples, graphs and the Turtle-subset reader.

mod graph;
mod iri;
mod term;
mod turtle;

use thiserror::Error;

pub use graph::{graph_match, Graph};
pub use iri::{resolve_iri, Iri};
pub use term::{match_triple, Literal, PatternTerm, SolutionMapping, Term, Triple, TriplePattern, Variable};
pub use turtle::parse_turtle;

use crate::syntax::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("IRI has no scheme: {0}")]
    RelativeIri(String),
    #[error("malformed IRI: {0}")]
    MalformedIri(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// Drops the `#fragment` of an IRI.
pub fn strip_fragment(iri: &Iri) -> Iri {
    iri.strip_fragment()
}
