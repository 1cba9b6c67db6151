use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::guidance::{
    apply_overrides, get_linking_structure, lambda_justify, ContentPolicy, LinkingStructureRegistry, PolicyAction,
};
use crate::query::{evaluate, Query, Solutions};
use crate::rdf::{Graph, Iri, Triple, TriplePattern};
use crate::webfetch::{Dereferenced, Dereferencer, Document, DocumentSource, FetchLedger, LedgerEntry};

use super::{
    Admission, PruneCause, Reason, Semantics, TraversalConfig, TraversalError, TraversalRun, TraversalTrace,
    TriplePool,
};

/// What one fetched document contributes.
#[derive(Default)]
struct Expansion {
    pool: Vec<Triple>,
    links: Vec<(Iri, Reason)>,
    pruned: Vec<(Iri, Reason)>,
}

trait Expander {
    fn expand(&self, doc_iri: &Iri, doc: &Document) -> Expansion;
}

struct Unguided<'a> {
    semantics: Semantics,
    patterns: &'a BTreeSet<TriplePattern>,
}

impl Expander for Unguided<'_> {
    fn expand(&self, doc_iri: &Iri, doc: &Document) -> Expansion {
        let mut out = Expansion { pool: doc.triples.iter().cloned().collect(), ..Default::default() };
        for t in doc.triples.iter() {
            let via_tp = match self.semantics {
                Semantics::CNone => None,
                Semantics::CAll => Some(None),
                Semantics::CMatch => self.patterns.iter().find(|tp| crate::rdf::match_triple(t, tp).is_some()).map(Some),
            };
            for target in t.link_iris().map(Iri::strip_fragment) {
                match &via_tp {
                    Some(tp) => out.links.push((
                        target,
                        Reason::Link { from: doc_iri.clone(), via_triple: t.clone(), via_tp: tp.cloned(), rule: None },
                    )),
                    None => out.pruned.push((
                        target,
                        Reason::Pruned {
                            from: doc_iri.clone(),
                            via_triple: t.clone(),
                            cause: PruneCause::NotFollowed(self.semantics),
                        },
                    )),
                }
            }
        }
        out
    }
}

struct Guided<'a> {
    registry: &'a LinkingStructureRegistry,
    policy: &'a ContentPolicy,
    patterns: &'a BTreeSet<TriplePattern>,
}

impl Expander for Guided<'_> {
    fn expand(&self, doc_iri: &Iri, doc: &Document) -> Expansion {
        let mut out = Expansion::default();
        let mut irrelevant = Vec::new();
        for t in doc.triples.iter() {
            if self.policy.decide(t, doc_iri).allowed {
                out.pool.push(t.clone());
            } else {
                irrelevant.push(t);
            }
        }
        let relevant = Document {
            doc_iri: doc_iri.clone(),
            base: doc.base.clone(),
            triples: out.pool.iter().cloned().collect::<Graph>(),
        };
        let structure = get_linking_structure(self.registry, doc_iri);

        let mut candidates: BTreeMap<Iri, &Triple> = BTreeMap::new();
        for t in relevant.triples.iter() {
            for target in t.link_iris().map(Iri::strip_fragment) {
                candidates.entry(target).or_insert(t);
            }
        }
        for (target, mention) in &candidates {
            let hit = self
                .patterns
                .iter()
                .find_map(|tp| lambda_justify(&structure, &relevant, target, tp).map(|j| (tp, j)));
            let reason = match hit {
                Some((tp, j)) => {
                    Reason::Link { from: doc_iri.clone(), via_triple: j.via, via_tp: Some(tp.clone()), rule: j.rule }
                }
                None => Reason::Pruned {
                    from: doc_iri.clone(),
                    via_triple: (*mention).clone(),
                    cause: PruneCause::StructureRejected,
                },
            };
            match reason {
                Reason::Link { .. } => out.links.push((target.clone(), reason)),
                _ => out.pruned.push((target.clone(), reason)),
            }
        }

        for t in irrelevant {
            for target in t.link_iris().map(Iri::strip_fragment) {
                if candidates.contains_key(&target) {
                    continue;
                }
                let decision = self.policy.decide(t, doc_iri);
                let rule = decision.rule.filter(|(_, r)| r.action == PolicyAction::Deny).map(|(_, r)| r.number);
                let near_misses = self.policy.near_misses(t, doc_iri).iter().map(|r| r.number).collect();
                out.pruned.push((
                    target,
                    Reason::Pruned {
                        from: doc_iri.clone(),
                        via_triple: t.clone(),
                        cause: PruneCause::PolicyDenied { rule, near_misses },
                    },
                ));
            }
        }
        out
    }
}

fn fetch_wave<S: DocumentSource>(
    deref: &Dereferencer<S>,
    wave: &[Iri],
    config: &TraversalConfig,
    wave_no: usize,
) -> Vec<(Dereferenced, LedgerEntry)> {
    let mut order: Vec<usize> = (0..wave.len()).collect();
    if let Some(seed) = config.fetch_shuffle {
        order.shuffle(&mut StdRng::seed_from_u64(seed.wrapping_add(wave_no as u64)));
    }
    let workers = config.workers.clamp(1, wave.len().max(1));
    if workers == 1 {
        let mut slots: Vec<Option<_>> = vec![None; wave.len()];
        for i in order {
            slots[i] = Some(deref.fetch(&wave[i]));
        }
        return slots.into_iter().map(|s| s.expect("fetched")).collect();
    }
    let next = AtomicUsize::new(0);
    let slots = Mutex::new(vec![None; wave.len()]);
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(&i) = order.get(k) else { break };
                let result = deref.fetch(&wave[i]);
                slots.lock().expect("slots lock")[i] = Some(result);
            });
        }
    });
    slots.into_inner().expect("slots lock").into_iter().map(|s| s.expect("fetched")).collect()
}

/// Breadth-first fixed point shared by both modes. Returns the pool before
/// any overrides.
fn run<S: DocumentSource>(
    config: &TraversalConfig,
    source: &S,
    expander: &dyn Expander,
) -> Result<(BTreeSet<(Triple, Iri)>, TraversalTrace), TraversalError> {
    let seeds = config.normalized_seeds();
    if seeds.is_empty() {
        return Err(TraversalError::NoSeeds);
    }
    let deref = Dereferencer::new(source);
    let mut ledger = FetchLedger::new();
    let mut admissions: Vec<Admission> = Vec::new();
    let mut pruned: Vec<Admission> = Vec::new();
    let mut pruned_seen: BTreeSet<Iri> = BTreeSet::new();
    let mut visited: BTreeSet<Iri> = BTreeSet::new();
    let mut pool: BTreeSet<(Triple, Iri)> = BTreeSet::new();

    let finish = |admissions: Vec<Admission>, pruned: Vec<Admission>, visited: &BTreeSet<Iri>, ledger, pool| {
        let mut all = admissions;
        all.extend(pruned.into_iter().filter(|p| !visited.contains(&p.doc_iri)));
        (all, ledger, pool)
    };

    let mut wave: Vec<(Iri, Reason)> = seeds.into_iter().map(|s| (s, Reason::Seed)).collect();
    let mut wave_no = 0;
    while !wave.is_empty() {
        if visited.len() + wave.len() > config.max_documents {
            let (admissions, ledger, pool) = finish(admissions, pruned, &visited, ledger, pool);
            let trace = trace_from(admissions, ledger, &pool);
            return Err(TraversalError::Capped {
                limit: config.max_documents,
                partial: Box::new(TraversalRun { pool: TriplePool::new(pool), trace }),
            });
        }
        for (doc, reason) in &wave {
            visited.insert(doc.clone());
            admissions.push(Admission { doc_iri: doc.clone(), wave: wave_no, reason: reason.clone() });
        }
        let iris: Vec<Iri> = wave.iter().map(|(d, _)| d.clone()).collect();
        let fetched = fetch_wave(&deref, &iris, config, wave_no);

        let mut next: BTreeMap<Iri, Reason> = BTreeMap::new();
        for (doc_iri, (result, entry)) in iris.iter().zip(fetched) {
            ledger.record(entry);
            let exp = expander.expand(doc_iri, &result.document);
            pool.extend(exp.pool.into_iter().map(|t| (t, doc_iri.clone())));
            for (target, reason) in exp.links {
                if !visited.contains(&target) {
                    next.entry(target).or_insert(reason);
                }
            }
            for (target, reason) in exp.pruned {
                if !visited.contains(&target) && pruned_seen.insert(target.clone()) {
                    pruned.push(Admission { doc_iri: target, wave: wave_no + 1, reason });
                }
            }
        }
        wave = next.into_iter().collect();
        wave_no += 1;
    }
    let (admissions, ledger, pool) = finish(admissions, pruned, &visited, ledger, pool);
    let trace = trace_from(admissions, ledger, &pool);
    Ok((pool, trace))
}

fn trace_from(admissions: Vec<Admission>, ledger: FetchLedger, pool: &BTreeSet<(Triple, Iri)>) -> TraversalTrace {
    let mut provenance: BTreeMap<Triple, BTreeSet<Iri>> = BTreeMap::new();
    for (t, d) in pool {
        provenance.entry(t.clone()).or_default().insert(d.clone());
    }
    TraversalTrace { admissions, pool_provenance: provenance, ledger }
}

/// Classic traversal: every parsed triple of every reached document lands
/// in the pool.
pub fn traverse_unguided<S: DocumentSource>(
    config: &TraversalConfig,
    semantics: Semantics,
    source: &S,
    query: &Query,
) -> Result<TraversalRun, TraversalError> {
    let patterns = query.triple_patterns();
    let (pool, trace) = run(config, source, &Unguided { semantics, patterns: &patterns })?;
    Ok(TraversalRun { pool: TriplePool::new(pool), trace })
}

/// Guided traversal: only relevant triples count, links are discovered from
/// relevant triples alone and admitted through the linking structure of the
/// document they were found in. Overrides run once the fixed point is reached.
pub fn traverse_guided<S: DocumentSource>(
    config: &TraversalConfig,
    registry: &LinkingStructureRegistry,
    policy: &ContentPolicy,
    query: &Query,
    source: &S,
) -> Result<TraversalRun, TraversalError> {
    let patterns = query.triple_patterns();
    let (pool, mut trace) = run(config, source, &Guided { registry, policy, patterns: &patterns })?;
    let pool = apply_overrides(&pool, policy);
    trace = trace_from(trace.admissions, trace.ledger, &pool);
    Ok(TraversalRun { pool: TriplePool::new(pool), trace })
}

pub fn evaluate_augmented<S: DocumentSource>(
    query: &Query,
    registry: &LinkingStructureRegistry,
    policy: &ContentPolicy,
    config: &TraversalConfig,
    source: &S,
) -> Result<(Solutions, TraversalRun), TraversalError> {
    let run = traverse_guided(config, registry, policy, query, source)?;
    Ok((evaluate(query, &run.pool.graph()), run))
}

pub fn evaluate_unguided<S: DocumentSource>(
    query: &Query,
    semantics: Semantics,
    config: &TraversalConfig,
    source: &S,
) -> Result<(Solutions, TraversalRun), TraversalError> {
    let run = traverse_unguided(config, semantics, source, query)?;
    Ok((evaluate(query, &run.pool.graph()), run))
}
