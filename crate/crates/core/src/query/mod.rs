//! SELECT queries over a basic graph pattern with OPTIONAL groups.

mod eval;
mod parser;
mod results;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::rdf::{TriplePattern, Variable};
use crate::syntax::SyntaxError;

pub use eval::{evaluate, evaluate_unprojected};
pub use parser::parse_query;
pub use results::Solutions;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("line {line}, column {column}: unsupported feature: {construct}")]
    Unsupported { construct: String, line: usize, column: usize },
    #[error("SELECT needs at least one variable")]
    EmptyProjection,
    #[error("variable {0} is projected twice")]
    DuplicateProjection(Variable),
    #[error("projected variable {0} is unbound in the query patterns")]
    UnboundProjection(Variable),
}

/// A parsed SELECT query.
///
/// Each optional group binds all-or-nothing: it extends a solution only when
/// every one of its patterns matches compatibly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    projection: Vec<Variable>,
    required: Vec<TriplePattern>,
    optional_groups: Vec<Vec<TriplePattern>>,
}

impl Query {
    pub fn new(
        projection: Vec<Variable>,
        required: Vec<TriplePattern>,
        optional_groups: Vec<Vec<TriplePattern>>,
    ) -> Result<Self, QueryError> {
        if projection.is_empty() {
            return Err(QueryError::EmptyProjection);
        }
        let mut seen = BTreeSet::new();
        for v in &projection {
            if !seen.insert(v) {
                return Err(QueryError::DuplicateProjection(v.clone()));
            }
        }
        let bound: BTreeSet<&Variable> =
            required.iter().chain(optional_groups.iter().flatten()).flat_map(TriplePattern::variables).collect();
        if let Some(v) = projection.iter().find(|v| !bound.contains(v)) {
            return Err(QueryError::UnboundProjection(v.clone()));
        }
        Ok(Query { projection, required, optional_groups })
    }

    pub fn projection(&self) -> &[Variable] {
        &self.projection
    }

    pub fn required(&self) -> &[TriplePattern] {
        &self.required
    }

    pub fn optional_groups(&self) -> &[Vec<TriplePattern>] {
        &self.optional_groups
    }

    /// Required and optional patterns, deduplicated and sorted.
    pub fn triple_patterns(&self) -> BTreeSet<TriplePattern> {
        self.required.iter().chain(self.optional_groups.iter().flatten()).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::PatternTerm;
    use crate::syntax::FOAF;

    pub(crate) const FRIENDS_QUERY_TEXT: &str = "SELECT ?friend ?name ?email ?picture WHERE {\n  <https://uma.ex/#me> foaf:knows ?friend.\n  ?friend foaf:name ?name.\n  OPTIONAL { ?friend foaf:mbox ?email.\n             ?friend foaf:img  ?picture. }\n}\n";

    fn foaf(local: &str) -> PatternTerm {
        PatternTerm::iri(&format!("{FOAF}{local}"))
    }

    #[test]
    fn parses_friends_query() {
        let q = parse_query(FRIENDS_QUERY_TEXT).unwrap();
        let names: Vec<_> = q.projection().iter().map(|v| v.name().to_string()).collect();
        assert_eq!(names, ["friend", "name", "email", "picture"]);
        assert_eq!(
            q.required(),
            [
                TriplePattern::new(PatternTerm::iri("https://uma.ex/#me"), foaf("knows"), PatternTerm::var("friend")),
                TriplePattern::new(PatternTerm::var("friend"), foaf("name"), PatternTerm::var("name")),
            ]
        );
        assert_eq!(
            q.optional_groups(),
            [vec![
                TriplePattern::new(PatternTerm::var("friend"), foaf("mbox"), PatternTerm::var("email")),
                TriplePattern::new(PatternTerm::var("friend"), foaf("img"), PatternTerm::var("picture")),
            ]]
        );
        assert_eq!(q.triple_patterns().len(), 4);
    }

    #[test]
    fn minimal_query() {
        let q = parse_query("SELECT ?s WHERE { ?s ?p ?o }").unwrap();
        assert_eq!(q.required().len(), 1);
        assert!(q.optional_groups().is_empty());
        assert_eq!(q.triple_patterns().len(), 1);
    }

    #[test]
    fn unbound_projection_is_rejected() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?a ?b ?c }").unwrap_err(),
            QueryError::UnboundProjection(Variable::new("x"))
        );
    }

    #[test]
    fn duplicate_patterns_collapse_in_pattern_set() {
        let q = parse_query("SELECT ?s WHERE { ?s ?p ?o . ?s ?p ?o OPTIONAL { ?s ?p ?o } }").unwrap();
        assert_eq!(q.required().len(), 2);
        assert_eq!(q.triple_patterns().len(), 1);
    }

    #[test]
    fn prefixes_semicolons_and_a() {
        let q = parse_query(
            "PREFIX ex: <http://ex.org/>\nSELECT DISTINCT ?s ?n WHERE { ?s a ex:Person ; ex:name ?n , \"Bob\"@en . }",
        )
        .unwrap();
        assert_eq!(q.required().len(), 3);
        assert_eq!(q.required()[0].predicate, PatternTerm::iri(crate::syntax::RDF_TYPE));
    }

    #[test]
    fn unsupported_constructs_are_named() {
        let cases = [
            ("SELECT ?s WHERE { ?s ?p ?o FILTER(?o) }", "FILTER"),
            ("SELECT ?s WHERE { { ?s ?p ?o } UNION { ?s ?p ?o } }", "nested group"),
            ("SELECT ?s WHERE { ?s ?p ?o } UNION { ?s ?p ?o }", "UNION"),
            ("SELECT ?s WHERE { ?s ?p ?o OPTIONAL { ?s ?p ?x OPTIONAL { ?x ?p ?y } } }", "nested OPTIONAL"),
            ("SELECT * WHERE { ?s ?p ?o }", "SELECT *"),
            ("SELECT ?s WHERE { ?s ?p ?o } LIMIT 1", "LIMIT"),
            ("SELECT ?s WHERE { ?s foaf:knows/foaf:name ?o }", "property path"),
        ];
        for (text, construct) in cases {
            match parse_query(text) {
                Err(QueryError::Unsupported { construct: c, .. }) => assert!(c.contains(construct), "{text}: {c}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn unknown_prefix_is_a_syntax_error() {
        let err = parse_query("SELECT ?s WHERE { ?s ex:p ?o }").unwrap_err();
        assert!(matches!(err, QueryError::Syntax(ref e) if e.message.contains("unknown prefix")), "{err}");
    }

    #[test]
    fn unbalanced_braces() {
        assert!(parse_query("SELECT ?s WHERE { ?s ?p ?o").is_err());
        assert!(parse_query("SELECT ?s WHERE { ?s ?p ?o OPTIONAL { ?s ?p ?x }").is_err());
        assert!(parse_query("SELECT ?s WHERE { ?s ?p ?o ?s ?p ?o }").is_err());
    }
}
