use std::collections::BTreeSet;

use serde_json::Value;

use crate::rdf::{match_triple, Iri, PatternTerm, Triple, TriplePattern};

use super::{iri_field, parse_json, pattern_term, GuidanceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyAction {
    Allow,
    Deny,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceConstraint {
    /// Source document IRI starts with this prefix.
    Prefix(String),
    /// Triple subject and source document share scheme and host.
    SameOriginAsSubject,
    Any,
}

impl SourceConstraint {
    pub fn matches(&self, triple: &Triple, source: &Iri) -> bool {
        match self {
            SourceConstraint::Prefix(p) => source.as_str().starts_with(p.as_str()),
            SourceConstraint::SameOriginAsSubject => {
                let (scheme, host) = triple.subject.origin();
                host.is_some() && (scheme, host) == source.origin()
            }
            SourceConstraint::Any => true,
        }
    }
}

impl std::fmt::Display for SourceConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceConstraint::Prefix(p) => write!(f, "source {p}*"),
            SourceConstraint::SameOriginAsSubject => f.write_str("same origin as subject"),
            SourceConstraint::Any => f.write_str("any source"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusiveKey {
    SubjectPredicate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicyRule {
    /// 1-based position in the policy file. Rules expanded from a predicate
    /// list share their number.
    pub number: usize,
    pub action: PolicyAction,
    pub pattern: TriplePattern,
    pub source: SourceConstraint,
    pub priority: i64,
    pub exclusive: Option<ExclusiveKey>,
}

impl PolicyRule {
    pub fn matches(&self, triple: &Triple, source: &Iri) -> bool {
        self.matches_pattern(triple) && self.source.matches(triple, source)
    }

    pub fn matches_pattern(&self, triple: &Triple) -> bool {
        match_triple(triple, &self.pattern).is_some()
    }
}

/// Relevance criteria. Rules are kept in evaluation order: descending
/// priority, declaration order among equals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentPolicy {
    rules: Vec<PolicyRule>,
    default_action: PolicyAction,
}

/// The outcome of evaluating a policy on one (triple, source) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision<'a> {
    pub allowed: bool,
    /// The deciding rule and its rank in evaluation order; `None` means the
    /// default action applied.
    pub rule: Option<(usize, &'a PolicyRule)>,
}

impl ContentPolicy {
    pub fn new(mut rules: Vec<PolicyRule>, default_action: PolicyAction) -> Self {
        // Stable sort keeps declaration order among equal priorities.
        rules.sort_by_key(|r| std::cmp::Reverse(r.priority));
        ContentPolicy { rules, default_action }
    }

    /// Every triple is relevant.
    pub fn permissive() -> Self {
        ContentPolicy::new(Vec::new(), PolicyAction::Allow)
    }

    pub fn rules(&self) -> &[PolicyRule] {
        &self.rules
    }

    pub fn default_action(&self) -> PolicyAction {
        self.default_action
    }

    pub fn with_rule(&self, rule: PolicyRule) -> ContentPolicy {
        let mut rules = self.rules.clone();
        rules.push(rule);
        ContentPolicy::new(rules, self.default_action)
    }

    pub fn decide(&self, triple: &Triple, source: &Iri) -> Decision<'_> {
        match self.rules.iter().enumerate().find(|(_, r)| r.matches(triple, source)) {
            Some((rank, rule)) => Decision { allowed: rule.action == PolicyAction::Allow, rule: Some((rank, rule)) },
            None => Decision { allowed: self.default_action == PolicyAction::Allow, rule: None },
        }
    }

    /// Rules whose pattern matches but whose source constraint rejects.
    pub fn near_misses(&self, triple: &Triple, source: &Iri) -> Vec<&PolicyRule> {
        self.rules.iter().filter(|r| r.matches_pattern(triple) && !r.source.matches(triple, source)).collect()
    }
}

pub fn triple_relevant(policy: &ContentPolicy, triple: &Triple, source_doc_iri: &Iri) -> bool {
    policy.decide(triple, source_doc_iri).allowed
}

/// Applies precedence rules to a pool that already passed [`triple_relevant`].
///
/// For each exclusive allow rule, highest priority first: once the pool holds
/// a triple the rule matches from a source it accepts, every other triple
/// with that subject and predicate from a source the rule does not accept,
/// admitted by a lower-ranked rule or the default, is dropped.
pub fn apply_overrides(pool: &BTreeSet<(Triple, Iri)>, policy: &ContentPolicy) -> BTreeSet<(Triple, Iri)> {
    let mut pool = pool.clone();
    for (rank, rule) in policy.rules.iter().enumerate() {
        if rule.exclusive != Some(ExclusiveKey::SubjectPredicate) || rule.action != PolicyAction::Allow {
            continue;
        }
        let keys: BTreeSet<(Iri, Iri)> = pool
            .iter()
            .filter(|(t, src)| rule.matches(t, src))
            .map(|(t, _)| (t.subject.clone(), t.predicate.clone()))
            .collect();
        if keys.is_empty() {
            continue;
        }
        pool.retain(|(t, src)| {
            if !keys.contains(&(t.subject.clone(), t.predicate.clone())) || rule.source.matches(t, src) {
                return true;
            }
            let admitted_rank = policy.decide(t, src).rule.map_or(usize::MAX, |(r, _)| r);
            admitted_rank < rank
        });
    }
    pool
}

/// Reads the JSON policy format. A list in `pattern.p` expands to sibling
/// rules with the same priority and number.
pub fn parse_policy(text: &str) -> Result<ContentPolicy, GuidanceError> {
    let root = parse_json(text)?;
    let obj = root.as_object().ok_or_else(|| GuidanceError::invalid("$", "expected a JSON object"))?;
    for key in obj.keys() {
        if key != "default" && key != "rules" {
            return Err(GuidanceError::invalid(format!("$.{key}"), "unknown field"));
        }
    }
    let default_action = match obj.get("default").map(Value::as_str) {
        None | Some(Some("allow")) => PolicyAction::Allow,
        Some(Some("deny")) => PolicyAction::Deny,
        Some(_) => return Err(GuidanceError::invalid("$.default", "expected \"allow\" or \"deny\"")),
    };
    let empty = Vec::new();
    let list = match obj.get("rules") {
        None => &empty,
        Some(v) => v.as_array().ok_or_else(|| GuidanceError::invalid("$.rules", "expected an array"))?,
    };
    let mut rules = Vec::new();
    for (i, rule) in list.iter().enumerate() {
        rules.extend(parse_rule(i, rule)?);
    }
    Ok(ContentPolicy::new(rules, default_action))
}

fn parse_rule(i: usize, rule: &Value) -> Result<Vec<PolicyRule>, GuidanceError> {
    let at = |field: &str| format!("$.rules[{i}].{field}");
    let r: &serde_json::Map<String, Value> =
        rule.as_object().ok_or_else(|| GuidanceError::invalid(format!("$.rules[{i}]"), "expected an object"))?;
    for key in r.keys() {
        if !matches!(key.as_str(), "action" | "pattern" | "source" | "priority" | "exclusive") {
            return Err(GuidanceError::invalid(at(key), "unknown field"));
        }
    }
    let action = match r.get("action").and_then(Value::as_str) {
        Some("allow") => PolicyAction::Allow,
        Some("deny") => PolicyAction::Deny,
        _ => return Err(GuidanceError::invalid(at("action"), "expected \"allow\" or \"deny\"")),
    };
    let source = match r.get("source") {
        None => SourceConstraint::Any,
        Some(Value::String(s)) if s == "*" => SourceConstraint::Any,
        Some(Value::String(s)) if s == "same-origin-as-subject" => SourceConstraint::SameOriginAsSubject,
        Some(v) => SourceConstraint::Prefix(iri_field(v, &at("source"))?.strip_fragment().into_string()),
    };
    let priority = match r.get("priority") {
        None => 0,
        Some(v) => v.as_i64().ok_or_else(|| GuidanceError::invalid(at("priority"), "expected an integer"))?,
    };
    let exclusive = match r.get("exclusive") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) if s == "subject-predicate" => Some(ExclusiveKey::SubjectPredicate),
        Some(_) => return Err(GuidanceError::invalid(at("exclusive"), "expected \"subject-predicate\"")),
    };
    if exclusive.is_some() && action == PolicyAction::Deny {
        return Err(GuidanceError::invalid(at("exclusive"), "only allow rules can be exclusive"));
    }

    let pattern = r.get("pattern").and_then(Value::as_object).ok_or_else(|| {
        GuidanceError::invalid(at("pattern"), "expected an object with \"s\", \"p\", \"o\"")
    })?;
    for key in pattern.keys() {
        if !matches!(key.as_str(), "s" | "p" | "o") {
            return Err(GuidanceError::invalid(format!("{}.{key}", at("pattern")), "unknown field"));
        }
    }
    let wildcard = Value::String("?".into());
    let position = |key: &str, literal: bool| -> Result<PatternTerm, GuidanceError> {
        let loc = format!("{}.{key}", at("pattern"));
        match pattern.get(key).unwrap_or(&wildcard) {
            Value::String(s) if s == "?" => Ok(PatternTerm::var(&format!("_{key}{i}"))),
            v => pattern_term(v, &loc, literal),
        }
    };
    let subject = position("s", false)?;
    let object = position("o", true)?;
    let predicates: Vec<PatternTerm> = match pattern.get("p") {
        Some(Value::Array(items)) if !items.is_empty() => items
            .iter()
            .enumerate()
            .map(|(j, v)| iri_field(v, &format!("{}.p[{j}]", at("pattern"))).map(PatternTerm::from))
            .collect::<Result<_, _>>()?,
        Some(Value::Array(_)) => return Err(GuidanceError::invalid(format!("{}.p", at("pattern")), "empty predicate list")),
        _ => vec![position("p", false)?],
    };

    Ok(predicates
        .into_iter()
        .map(|p| PolicyRule {
            number: i + 1,
            action,
            pattern: TriplePattern::new(subject.clone(), p, object.clone()),
            source: source.clone(),
            priority,
            exclusive,
        })
        .collect())
}
