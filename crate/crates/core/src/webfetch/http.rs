use std::io::Read;
use std::time::Duration;

use reqwest::blocking::Client;
use reqwest::header::{HeaderMap, HeaderValue, ACCEPT};
use reqwest::redirect::Policy;

use crate::rdf::Iri;

use super::{DocumentSource, SourceResponse, WebError};

pub const MAX_REDIRECTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpConfig {
    pub timeout: Duration,
    pub max_body_size: u64,
    pub accept: String,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig { timeout: Duration::from_secs(10), max_body_size: 4 * 1024 * 1024, accept: "text/turtle".into() }
    }
}

/// Dereferences over HTTP(S). Non-success statuses, network errors and
/// non-HTTP schemes all come back as not-found.
pub struct HttpSource {
    client: Client,
    config: HttpConfig,
}

pub fn live_http_source(timeout: Duration, max_body_size: u64, accept_header: &str) -> Result<HttpSource, WebError> {
    HttpSource::new(HttpConfig { timeout, max_body_size, accept: accept_header.to_string() })
}

impl HttpSource {
    pub fn new(config: HttpConfig) -> Result<Self, WebError> {
        let mut headers = HeaderMap::new();
        headers.insert(ACCEPT, HeaderValue::from_str(&config.accept).map_err(|e| WebError::Client(e.to_string()))?);
        let client = Client::builder()
            .redirect(Policy::limited(MAX_REDIRECTS))
            .timeout(config.timeout)
            .default_headers(headers)
            .build()
            .map_err(|e| WebError::Client(e.to_string()))?;
        Ok(HttpSource { client, config })
    }

    pub fn config(&self) -> &HttpConfig {
        &self.config
    }
}

impl DocumentSource for HttpSource {
    fn get(&self, doc_iri: &Iri) -> SourceResponse {
        let (scheme, _) = doc_iri.origin();
        if scheme != "http" && scheme != "https" {
            return SourceResponse::NotFound(format!("unsupported scheme {scheme}:"));
        }
        let response = match self.client.get(doc_iri.as_str()).send() {
            Ok(r) => r,
            Err(e) => return SourceResponse::NotFound(e.to_string()),
        };
        if !response.status().is_success() {
            return SourceResponse::NotFound(format!("HTTP {}", response.status()));
        }
        let limit = self.config.max_body_size;
        if response.content_length().is_some_and(|len| len > limit) {
            return SourceResponse::Oversize { limit };
        }
        let final_iri = Iri::parse(response.url().as_str()).unwrap_or_else(|_| doc_iri.clone());
        let mut body = Vec::new();
        if let Err(e) = response.take(limit + 1).read_to_end(&mut body) {
            return SourceResponse::NotFound(e.to_string());
        }
        if body.len() as u64 > limit {
            return SourceResponse::Oversize { limit };
        }
        SourceResponse::Body { final_iri, body }
    }
}
