use std::collections::BTreeSet;

use serde_json::Value;

use crate::rdf::{Iri, Triple, TriplePattern};
use crate::webfetch::Document;

use super::{iri_field, parse_json, GuidanceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefaultMode {
    /// Any hyperlinked document may hold matches.
    Permissive,
    /// Nothing is followed unless a rule says so.
    Restrictive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredicateSet {
    Any,
    Only(BTreeSet<Iri>),
}

impl PredicateSet {
    /// A variable predicate in `tp` is covered by every rule.
    pub fn covers(&self, tp: &TriplePattern) -> bool {
        match (self, tp.predicate.as_const().and_then(|t| t.as_iri())) {
            (PredicateSet::Any, _) | (_, None) => true,
            (PredicateSet::Only(set), Some(p)) => set.contains(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Follow {
    /// Matches live in the document itself.
    SelfDocument,
    /// Matches live in documents reached through these link predicates.
    Links(BTreeSet<Iri>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureRule {
    /// 1-based position in the registry file.
    pub number: usize,
    pub scope: String,
    pub pattern_predicates: PredicateSet,
    pub follow: Follow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingStructureRegistry {
    pub rules: Vec<StructureRule>,
    pub default_mode: DefaultMode,
}

impl LinkingStructureRegistry {
    pub fn permissive() -> Self {
        LinkingStructureRegistry { rules: Vec::new(), default_mode: DefaultMode::Permissive }
    }

    pub fn restrictive() -> Self {
        LinkingStructureRegistry { rules: Vec::new(), default_mode: DefaultMode::Restrictive }
    }
}

/// The structure that applies to one document: the rules sharing the longest
/// matching scope, in declaration order. Patterns none of them cover fall
/// back to the default mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingStructure<'a> {
    pub scope: Option<&'a str>,
    pub rules: Vec<&'a StructureRule>,
    pub default_mode: DefaultMode,
}

/// Why a candidate document was admitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkJustification {
    /// `None` when the default mode admitted it.
    pub rule: Option<usize>,
    pub via: Triple,
}

pub fn parse_structure_registry(text: &str) -> Result<LinkingStructureRegistry, GuidanceError> {
    let root = parse_json(text)?;
    let obj = root.as_object().ok_or_else(|| GuidanceError::invalid("$", "expected a JSON object"))?;
    for key in obj.keys() {
        if key != "default" && key != "rules" {
            return Err(GuidanceError::invalid(format!("$.{key}"), "unknown field"));
        }
    }
    let default_mode = match obj.get("default").map(|v| v.as_str()) {
        None | Some(Some("restrictive")) => DefaultMode::Restrictive,
        Some(Some("permissive")) => DefaultMode::Permissive,
        Some(_) => return Err(GuidanceError::invalid("$.default", "expected \"permissive\" or \"restrictive\"")),
    };
    let mut rules = Vec::new();
    let empty = Vec::new();
    let list = match obj.get("rules") {
        None => &empty,
        Some(v) => v.as_array().ok_or_else(|| GuidanceError::invalid("$.rules", "expected an array"))?,
    };
    for (i, rule) in list.iter().enumerate() {
        let at = |field: &str| format!("$.rules[{i}].{field}");
        let r = rule.as_object().ok_or_else(|| GuidanceError::invalid(format!("$.rules[{i}]"), "expected an object"))?;
        for key in r.keys() {
            if !matches!(key.as_str(), "scope" | "patternPredicates" | "follow") {
                return Err(GuidanceError::invalid(at(key), "unknown field"));
            }
        }
        let scope = iri_field(r.get("scope").unwrap_or(&Value::Null), &at("scope"))?.strip_fragment().into_string();
        let pattern_predicates = match r.get("patternPredicates") {
            Some(Value::String(s)) if s == "*" => PredicateSet::Any,
            Some(Value::Array(items)) if !items.is_empty() => PredicateSet::Only(
                items
                    .iter()
                    .enumerate()
                    .map(|(j, v)| iri_field(v, &format!("{}[{j}]", at("patternPredicates"))))
                    .collect::<Result<_, _>>()?,
            ),
            _ => {
                return Err(GuidanceError::invalid(at("patternPredicates"), "expected \"*\" or a non-empty IRI list"))
            }
        };
        let follow = match r.get("follow") {
            Some(Value::String(s)) if s == "self" => Follow::SelfDocument,
            Some(Value::String(s)) => {
                return Err(GuidanceError::invalid(at("follow"), format!("unknown follow keyword {s:?}")))
            }
            Some(Value::Array(items)) if !items.is_empty() => Follow::Links(
                items
                    .iter()
                    .enumerate()
                    .map(|(j, v)| iri_field(v, &format!("{}[{j}]", at("follow"))))
                    .collect::<Result<_, _>>()?,
            ),
            _ => return Err(GuidanceError::invalid(at("follow"), "expected \"self\" or a non-empty IRI list")),
        };
        rules.push(StructureRule { number: i + 1, scope, pattern_predicates, follow });
    }
    Ok(LinkingStructureRegistry { rules, default_mode })
}

/// Longest matching scope wins; all rules declared with that scope apply,
/// first-declared first.
pub fn get_linking_structure<'a>(registry: &'a LinkingStructureRegistry, doc_iri: &Iri) -> LinkingStructure<'a> {
    let best = registry
        .rules
        .iter()
        .filter(|r| doc_iri.as_str().starts_with(&r.scope))
        .map(|r| r.scope.len())
        .max();
    let rules: Vec<&StructureRule> = match best {
        Some(len) => registry
            .rules
            .iter()
            .filter(|r| r.scope.len() == len && doc_iri.as_str().starts_with(&r.scope))
            .collect(),
        None => Vec::new(),
    };
    LinkingStructure { scope: rules.first().map(|r| r.scope.as_str()), rules, default_mode: registry.default_mode }
}

pub fn lambda_allows(structure: &LinkingStructure<'_>, from_doc: &Document, candidate: &Iri, tp: &TriplePattern) -> bool {
    lambda_justify(structure, from_doc, candidate, tp).is_some()
}

/// Like [`lambda_allows`], but reports the rule and linking triple.
/// `candidate` must be hyperlinked from `from_doc`, whatever the rules say.
pub fn lambda_justify(
    structure: &LinkingStructure<'_>,
    from_doc: &Document,
    candidate: &Iri,
    tp: &TriplePattern,
) -> Option<LinkJustification> {
    let mention = from_doc.triples.iter().find(|t| t.link_iris().any(|i| i.strip_fragment() == *candidate))?;

    let covering: Vec<&&StructureRule> = structure.rules.iter().filter(|r| r.pattern_predicates.covers(tp)).collect();
    if covering.is_empty() {
        return match structure.default_mode {
            DefaultMode::Permissive => Some(LinkJustification { rule: None, via: mention.clone() }),
            DefaultMode::Restrictive => None,
        };
    }
    for rule in covering {
        match &rule.follow {
            Follow::SelfDocument => {
                if *candidate == from_doc.doc_iri {
                    return Some(LinkJustification { rule: Some(rule.number), via: mention.clone() });
                }
            }
            Follow::Links(preds) => {
                let via = from_doc.triples.iter().find(|t| {
                    preds.contains(&t.predicate) && t.object.as_iri().is_some_and(|o| o.strip_fragment() == *candidate)
                });
                if let Some(via) = via {
                    return Some(LinkJustification { rule: Some(rule.number), via: via.clone() });
                }
            }
        }
    }
    None
}
