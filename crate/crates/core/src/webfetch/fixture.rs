use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::rdf::Iri;
use crate::syntax::{default_prefixes, PrefixMap};

use super::{DocumentSource, SourceResponse, WebError};

/// `{ "documents": { "<doc-iri>": "<relative file path>" }, "notes": "..." }`
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureManifest {
    pub documents: BTreeMap<Iri, PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// An in-memory web: exactly the mapped documents exist.
#[derive(Debug, Clone, Default)]
pub struct FixtureSource {
    bodies: BTreeMap<Iri, Vec<u8>>,
}

impl FixtureSource {
    pub fn from_bodies<I, B>(bodies: I) -> Self
    where
        I: IntoIterator<Item = (Iri, B)>,
        B: Into<Vec<u8>>,
    {
        FixtureSource { bodies: bodies.into_iter().map(|(k, v)| (k.strip_fragment(), v.into())).collect() }
    }

    pub fn document_iris(&self) -> impl Iterator<Item = &Iri> {
        self.bodies.keys()
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }
}

impl DocumentSource for FixtureSource {
    fn get(&self, doc_iri: &Iri) -> SourceResponse {
        match self.bodies.get(doc_iri) {
            Some(body) => SourceResponse::Body { final_iri: doc_iri.clone(), body: body.clone() },
            None => SourceResponse::NotFound("not in fixture web".into()),
        }
    }

    fn predeclared_prefixes(&self) -> PrefixMap {
        default_prefixes()
    }
}

/// Reads a manifest and every body it names. Body paths are relative to
/// the manifest's directory.
pub fn load_fixture_web(manifest_path: impl AsRef<Path>) -> Result<FixtureSource, WebError> {
    let manifest_path = manifest_path.as_ref();
    let text = fs::read_to_string(manifest_path)
        .map_err(|source| WebError::Io { path: manifest_path.to_path_buf(), source })?;
    let manifest: FixtureManifest = serde_json::from_str(&text)
        .map_err(|e| WebError::Manifest { path: manifest_path.to_path_buf(), reason: e.to_string() })?;
    if let Some(iri) = manifest.documents.keys().find(|i| i.has_fragment()) {
        return Err(WebError::Manifest {
            path: manifest_path.to_path_buf(),
            reason: format!("document IRI {iri} has a fragment"),
        });
    }
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let mut bodies = BTreeMap::new();
    for (iri, rel) in manifest.documents {
        let path = dir.join(&rel);
        let body = fs::read(&path).map_err(|_| WebError::MissingBody { iri: iri.clone(), path: path.clone() })?;
        bodies.insert(iri, body);
    }
    Ok(FixtureSource { bodies })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn empty_manifest_serves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "web.json", r#"{ "documents": {} }"#);
        let web = load_fixture_web(dir.path().join("web.json")).unwrap();
        assert!(web.is_empty());
        let got = web.get(&Iri::parse("https://uma.ex/").unwrap());
        assert!(matches!(got, SourceResponse::NotFound(_)));
    }

    #[test]
    fn single_document_manifest() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.ttl", "<https://a.ex/#x> foaf:name \"A\".");
        write(dir.path(), "web.json", r#"{ "documents": { "https://a.ex/": "a.ttl" }, "notes": "one" }"#);
        let web = load_fixture_web(dir.path().join("web.json")).unwrap();
        assert_eq!(web.len(), 1);
        assert!(matches!(web.get(&Iri::parse("https://a.ex/").unwrap()), SourceResponse::Body { .. }));
        assert!(matches!(web.get(&Iri::parse("https://a.ex/other").unwrap()), SourceResponse::NotFound(_)));
    }

    #[test]
    fn missing_body_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "web.json", r#"{ "documents": { "https://a.ex/": "nope.ttl" } }"#);
        let err = load_fixture_web(dir.path().join("web.json")).unwrap_err();
        assert!(err.to_string().contains("nope.ttl"), "{err}");
    }

    #[test]
    fn fragment_document_iri_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "web.json", r#"{ "documents": { "https://a.ex/#me": "a.ttl" } }"#);
        assert!(matches!(load_fixture_web(dir.path().join("web.json")), Err(WebError::Manifest { .. })));
    }
}
