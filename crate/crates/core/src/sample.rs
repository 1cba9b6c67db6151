//! A small address-book web bundled with the crate: Uma's profile, her
//! contacts Ann and Bob, Ann's extra documents and a DBpedia entry.
//!
//! The bodies are compiled in, so examples and tests run from any directory.
//! [`fixture_dir`] points at the same files on disk for the CLI.

use std::path::PathBuf;

use crate::guidance::{parse_policy, parse_structure_registry, ContentPolicy, LinkingStructureRegistry};
use crate::query::{parse_query, Query};
use crate::rdf::Iri;
use crate::webfetch::FixtureSource;

pub const UMA_WEBID: &str = "https://uma.ex/#me";
pub const MICKEY: &str = "http://dbpedia.org/resource/Mickey_Mouse";

/// Ann's profile and the three documents it links to.
pub const ANN_SUBTREE: [&str; 4] =
    ["https://ann.ex/", "https://ann.ex/about/", "https://ann.ex/blog/", "https://photos.ex/ann/"];

pub const FRIENDS_QUERY: &str = include_str!("../fixtures/address-book/friends.rq");
pub const STRUCTURES_JSON: &str = include_str!("../fixtures/address-book/structures.json");
pub const UMA_POLICY_JSON: &str = include_str!("../fixtures/address-book/uma-policy.json");

const DOCUMENTS: [(&str, &str); 7] = [
    ("https://uma.ex/", include_str!("../fixtures/address-book/uma.ttl")),
    ("https://ann.ex/", include_str!("../fixtures/address-book/ann.ttl")),
    ("https://ann.ex/about/", include_str!("../fixtures/address-book/ann-about.ttl")),
    ("https://ann.ex/blog/", include_str!("../fixtures/address-book/ann-blog.ttl")),
    ("https://photos.ex/ann/", include_str!("../fixtures/address-book/photos-ann.ttl")),
    ("https://bob.ex/", include_str!("../fixtures/address-book/bob.ttl")),
    (MICKEY, include_str!("../fixtures/address-book/mickey.ttl")),
];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("address-book")
}

pub fn manifest_path() -> PathBuf {
    fixture_dir().join("web.json")
}

/// (document IRI, Turtle body) for every document of the web.
pub fn documents() -> impl Iterator<Item = (Iri, &'static str)> {
    DOCUMENTS.iter().map(|(iri, body)| (Iri::parse(*iri).expect("fixture IRI"), *body))
}

pub fn address_book_web() -> FixtureSource {
    FixtureSource::from_bodies(documents())
}

pub fn friends_query() -> Query {
    parse_query(FRIENDS_QUERY).expect("fixture query parses")
}

pub fn structures() -> LinkingStructureRegistry {
    parse_structure_registry(STRUCTURES_JSON).expect("fixture registry parses")
}

pub fn uma_policy() -> ContentPolicy {
    parse_policy(UMA_POLICY_JSON).expect("fixture policy parses")
}

pub fn ann_subtree() -> Vec<Iri> {
    ANN_SUBTREE.iter().map(|s| Iri::parse(*s).expect("fixture IRI")).collect()
}
