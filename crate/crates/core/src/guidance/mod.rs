//! User-supplied guidance for a traversal: which links lead to documents
//! worth reading for a given pattern, and which triples from which sources
//! count at all.

mod policy;
mod structure;

use serde_json::Value;
use thiserror::Error;

use crate::rdf::{Iri, Literal, PatternTerm, Term};

pub use policy::{
    apply_overrides, parse_policy, triple_relevant, ContentPolicy, Decision, ExclusiveKey, PolicyAction, PolicyRule,
    SourceConstraint,
};
pub use structure::{
    get_linking_structure, lambda_allows, lambda_justify, parse_structure_registry, DefaultMode, Follow,
    LinkJustification, LinkingStructure, LinkingStructureRegistry, PredicateSet, StructureRule,
};

#[derive(Debug, Error)]
pub enum GuidanceError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl GuidanceError {
    fn invalid(location: impl Into<String>, message: impl Into<String>) -> Self {
        GuidanceError::Invalid { location: location.into(), message: message.into() }
    }
}

fn parse_json(text: &str) -> Result<Value, GuidanceError> {
    serde_json::from_str(text).map_err(|e| GuidanceError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn iri_field(value: &Value, location: &str) -> Result<Iri, GuidanceError> {
    let s = value.as_str().ok_or_else(|| GuidanceError::invalid(location, "expected an IRI string"))?;
    let s = s.strip_prefix('<').and_then(|s| s.strip_suffix('>')).unwrap_or(s);
    Iri::parse(s).map_err(|e| GuidanceError::invalid(location, e.to_string()))
}

/// `"?"` or `"?name"` is a variable, `"\"text\"@lang"` a literal, anything
/// else an absolute IRI.
fn pattern_term(value: &Value, location: &str, allow_literal: bool) -> Result<PatternTerm, GuidanceError> {
    let s = value.as_str().ok_or_else(|| GuidanceError::invalid(location, "expected a string"))?;
    if let Some(name) = s.strip_prefix('?') {
        let name = if name.is_empty() { format!("_{location}") } else { name.to_string() };
        return Ok(PatternTerm::var(&name));
    }
    if s.starts_with('"') {
        if !allow_literal {
            return Err(GuidanceError::invalid(location, "literals are only allowed in object position"));
        }
        return parse_literal(s).map(|l| PatternTerm::Const(Term::Literal(l))).ok_or_else(|| {
            GuidanceError::invalid(location, format!("malformed literal {s}"))
        });
    }
    iri_field(value, location).map(PatternTerm::from)
}

fn parse_literal(s: &str) -> Option<Literal> {
    let rest = s.strip_prefix('"')?;
    let close = rest.rfind('"')?;
    let value = rest[..close].replace("\\\"", "\"").replace("\\\\", "\\");
    let tail = &rest[close + 1..];
    match tail.strip_prefix('@') {
        Some(lang) if !lang.is_empty() => Some(Literal::lang(value, lang)),
        None if tail.is_empty() => Some(Literal::simple(value)),
        _ => None,
    }
}
