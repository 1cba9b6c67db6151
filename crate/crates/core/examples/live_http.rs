//! Traverse the live web from a seed IRI given on the command line.
//!
//!     cargo run --example live_http -- https://example.org/profile#me

use std::time::Duration;

use linktrav::query::parse_query;
use linktrav::report::{Mode, RunReport};
use linktrav::traversal::{evaluate_unguided, Semantics, TraversalConfig};
use linktrav::webfetch::live_http_source;

fn main() {
    let Some(seed) = std::env::args().nth(1) else {
        eprintln!("usage: live_http <seed-iri>");
        std::process::exit(1);
    };
    let seed = seed.parse().expect("seed must be an absolute IRI");
    let query = parse_query(
        "PREFIX foaf: <http://xmlns.com/foaf/0.1/>
         SELECT ?friend ?name WHERE { ?me foaf:knows ?friend . OPTIONAL { ?friend foaf:name ?name } }",
    )
    .unwrap();
    let source = live_http_source(Duration::from_secs(10), 2 << 20, "text/turtle").unwrap();
    let config = TraversalConfig::new([seed]).with_max_documents(20);
    match evaluate_unguided(&query, Semantics::CMatch, &config, &source) {
        Ok((solutions, run)) => {
            let report = RunReport::new(Mode::Unguided(Semantics::CMatch), solutions, &run.trace);
            print!("{}{}", report.summary(), report.solutions.to_table());
        }
        Err(e) => eprintln!("{e}"),
    }
}
