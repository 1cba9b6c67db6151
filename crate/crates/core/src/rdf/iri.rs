//! Absolute IRIs and RFC 3986 reference resolution.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RdfError;

/// An absolute IRI (one that carries a scheme).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl FromStr for Iri {
    type Err = RdfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::parse(s)
    }
}

impl Iri {
    pub fn parse(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if scheme_len(&value).is_none() {
            return Err(RdfError::RelativeIri(value));
        }
        if value.chars().any(|c| c.is_whitespace() || c == '<' || c == '>' || c == '"') {
            return Err(RdfError::MalformedIri(value));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn has_fragment(&self) -> bool {
        self.0.contains('#')
    }

    /// Drops any `#fragment`. Idempotent.
    pub fn strip_fragment(&self) -> Iri {
        match self.0.find('#') {
            Some(pos) => Iri(self.0[..pos].to_string()),
            None => self.clone(),
        }
    }

    pub fn resolve(&self, reference: &str) -> Result<Iri, RdfError> {
        resolve_iri(self.as_str(), reference)
    }

    /// Lowercased scheme and host, the pair used for same-origin checks.
    pub fn origin(&self) -> (String, Option<String>) {
        let parts = Components::split(&self.0);
        let scheme = parts.scheme.unwrap_or_default().to_ascii_lowercase();
        let host = parts.authority.map(|auth| {
            let host = auth.rsplit_once('@').map_or(auth, |(_, h)| h);
            let host = if host.starts_with('[') {
                host.split_inclusive(']').next().unwrap_or(host)
            } else {
                host.split(':').next().unwrap_or(host)
            };
            host.to_ascii_lowercase()
        });
        (scheme, host)
    }

    pub fn host(&self) -> Option<String> {
        self.origin().1
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Serialize for Iri {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Iri {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Iri::parse(s).map_err(serde::de::Error::custom)
    }
}

/// Length of the scheme (without the colon), if `s` starts with one.
fn scheme_len(s: &str) -> Option<usize> {
    let colon = s.find(':')?;
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    let first = chars.next()?;
    if !first.is_ascii_alphabetic() {
        return None;
    }
    if chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
        Some(colon)
    } else {
        None
    }
}

/// The five RFC 3986 components of a reference.
#[derive(Debug, Default, Clone, PartialEq)]
struct Components<'a> {
    scheme: Option<&'a str>,
    authority: Option<&'a str>,
    path: &'a str,
    query: Option<&'a str>,
    fragment: Option<&'a str>,
}

impl<'a> Components<'a> {
    fn split(s: &'a str) -> Self {
        let mut rest = s;
        let mut out = Components::default();
        if let Some(pos) = rest.find('#') {
            out.fragment = Some(&rest[pos + 1..]);
            rest = &rest[..pos];
        }
        if let Some(pos) = rest.find('?') {
            out.query = Some(&rest[pos + 1..]);
            rest = &rest[..pos];
        }
        if let Some(len) = scheme_len(rest) {
            out.scheme = Some(&rest[..len]);
            rest = &rest[len + 1..];
        }
        if let Some(after) = rest.strip_prefix("//") {
            let end = after.find('/').unwrap_or(after.len());
            out.authority = Some(&after[..end]);
            rest = &after[end..];
        }
        out.path = rest;
        out
    }
}

/// Resolves `reference` against `base` following RFC 3986 section 5.2.
pub fn resolve_iri(base: &str, reference: &str) -> Result<Iri, RdfError> {
    let b = Components::split(base);
    let b_scheme = b.scheme.ok_or_else(|| RdfError::RelativeIri(base.to_string()))?;
    let r = Components::split(reference);

    let (scheme, authority, path, query);
    if let Some(s) = r.scheme {
        scheme = s;
        authority = r.authority;
        path = remove_dot_segments(r.path);
        query = r.query;
    } else {
        scheme = b_scheme;
        if r.authority.is_some() {
            authority = r.authority;
            path = remove_dot_segments(r.path);
            query = r.query;
        } else {
            authority = b.authority;
            if r.path.is_empty() {
                path = b.path.to_string();
                query = r.query.or(b.query);
            } else {
                path = if r.path.starts_with('/') {
                    remove_dot_segments(r.path)
                } else {
                    remove_dot_segments(&merge(&b, r.path))
                };
                query = r.query;
            }
        }
    }

    let mut out = String::with_capacity(base.len() + reference.len());
    out.push_str(scheme);
    out.push(':');
    if let Some(auth) = authority {
        out.push_str("//");
        out.push_str(auth);
    }
    out.push_str(&path);
    if let Some(q) = query {
        out.push('?');
        out.push_str(q);
    }
    if let Some(f) = r.fragment {
        out.push('#');
        out.push_str(f);
    }
    Iri::parse(out)
}

fn merge(base: &Components<'_>, reference_path: &str) -> String {
    if base.authority.is_some() && base.path.is_empty() {
        format!("/{reference_path}")
    } else {
        match base.path.rfind('/') {
            Some(pos) => format!("{}{}", &base.path[..=pos], reference_path),
            None => reference_path.to_string(),
        }
    }
}

fn remove_dot_segments(path: &str) -> String {
    let mut input = path;
    let mut output = String::with_capacity(path.len());
    while !input.is_empty() {
        if let Some(rest) = input.strip_prefix("../") {
            input = rest;
        } else if let Some(rest) = input.strip_prefix("./") {
            input = rest;
        } else if input.starts_with("/./") {
            input = &input[2..];
        } else if input == "/." {
            input = "/";
        } else if input.starts_with("/../") || input == "/.." {
            input = if input == "/.." { "/" } else { &input[3..] };
            match output.rfind('/') {
                Some(pos) => output.truncate(pos),
                None => output.clear(),
            }
        } else if input == "." || input == ".." {
            input = "";
        } else {
            let start = usize::from(input.starts_with('/'));
            let end = input[start..].find('/').map_or(input.len(), |p| p + start);
            output.push_str(&input[..end]);
            input = &input[end..];
        }
    }
    output
}
