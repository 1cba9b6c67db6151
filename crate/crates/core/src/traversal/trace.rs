use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::rdf::{Iri, Triple, TriplePattern};
use crate::webfetch::FetchLedger;

use super::Semantics;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PruneCause {
    /// Every triple linking to the document was irrelevant. `rule` is the
    /// deny rule that decided, `None` for the default action; `near_misses`
    /// are allow rules whose pattern matched but whose source did not.
    PolicyDenied { rule: Option<usize>, near_misses: Vec<usize> },
    /// Relevant links exist but no linking structure admits the document
    /// for any query pattern.
    StructureRejected,
    /// The unguided semantics does not follow this link.
    NotFollowed(Semantics),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    Seed,
    Link {
        from: Iri,
        via_triple: Triple,
        /// The query pattern the link was followed for; `None` under c-all.
        via_tp: Option<TriplePattern>,
        /// Structure rule number; `None` for unguided runs or a default-mode admission.
        rule: Option<usize>,
    },
    Pruned { from: Iri, via_triple: Triple, cause: PruneCause },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admission {
    pub doc_iri: Iri,
    /// Breadth-first depth; seeds are wave 0.
    pub wave: usize,
    pub reason: Reason,
}

impl Admission {
    pub fn is_admitted(&self) -> bool {
        !matches!(self.reason, Reason::Pruned { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraversalTrace {
    /// Admitted documents in admission order, plus one pruning event for
    /// each document that was seen but never admitted.
    pub admissions: Vec<Admission>,
    pub pool_provenance: BTreeMap<Triple, BTreeSet<Iri>>,
    pub ledger: FetchLedger,
}

impl TraversalTrace {
    pub fn admitted(&self) -> impl Iterator<Item = &Admission> {
        self.admissions.iter().filter(|a| a.is_admitted())
    }

    pub fn admitted_set(&self) -> BTreeSet<Iri> {
        self.admitted().map(|a| a.doc_iri.clone()).collect()
    }

    pub fn admission_of(&self, doc: &Iri) -> Option<&Admission> {
        self.admitted().find(|a| a.doc_iri == *doc)
    }

    pub fn pruning_of(&self, doc: &Iri) -> Option<&Admission> {
        self.admissions.iter().find(|a| a.doc_iri == *doc && !a.is_admitted())
    }

    /// The admissions leading from a seed to `doc`, seed first.
    pub fn chain_to(&self, doc: &Iri) -> Vec<&Admission> {
        let mut chain = Vec::new();
        let mut cur = self.admission_of(doc);
        while let Some(a) = cur {
            chain.push(a);
            cur = match &a.reason {
                Reason::Link { from, .. } if chain.len() <= self.admissions.len() => self.admission_of(from),
                _ => None,
            };
        }
        chain.reverse();
        chain
    }

    pub fn to_json(&self) -> Value {
        let admissions: Vec<Value> = self.admissions.iter().map(admission_json).collect();
        let provenance: serde_json::Map<String, Value> = self
            .pool_provenance
            .iter()
            .map(|(t, docs)| (t.to_string(), docs.iter().map(|d| Value::String(d.to_string())).collect()))
            .collect();
        json!({
            "admissions": admissions,
            "ledger": serde_json::to_value(self.ledger.entries()).expect("ledger serializes"),
            "pool_provenance": provenance,
        })
    }
}

fn admission_json(a: &Admission) -> Value {
    let mut v = json!({ "doc": a.doc_iri.as_str(), "wave": a.wave });
    let obj = v.as_object_mut().expect("object");
    match &a.reason {
        Reason::Seed => {
            obj.insert("reason".into(), "seed".into());
        }
        Reason::Link { from, via_triple, via_tp, rule } => {
            obj.insert("reason".into(), "link".into());
            obj.insert("from".into(), from.as_str().into());
            obj.insert("via_triple".into(), via_triple.to_string().into());
            obj.insert("via_pattern".into(), via_tp.as_ref().map(|tp| tp.to_string()).into());
            obj.insert("rule".into(), (*rule).into());
        }
        Reason::Pruned { from, via_triple, cause } => {
            obj.insert("reason".into(), "pruned".into());
            obj.insert("from".into(), from.as_str().into());
            obj.insert("via_triple".into(), via_triple.to_string().into());
            match cause {
                PruneCause::PolicyDenied { rule, near_misses } => {
                    obj.insert("cause".into(), "policy-denied".into());
                    obj.insert("rule".into(), (*rule).into());
                    obj.insert("near_misses".into(), near_misses.clone().into());
                }
                PruneCause::StructureRejected => {
                    obj.insert("cause".into(), "structure-rejected".into());
                }
                PruneCause::NotFollowed(sem) => {
                    obj.insert("cause".into(), "not-followed".into());
                    obj.insert("semantics".into(), sem.as_str().into());
                }
            }
        }
    }
    v
}
