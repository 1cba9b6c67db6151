//! Evaluate a SELECT query with an OPTIONAL group over an in-memory graph.

use linktrav::query::{evaluate, parse_query};
use linktrav::rdf::{parse_turtle, Iri};
use linktrav::syntax::default_prefixes;

fn main() {
    let data = r#"
        @prefix foaf: <http://xmlns.com/foaf/0.1/> .
        <https://uma.ex/#me> foaf:knows <https://ann.ex/#me>, <https://bob.ex/#me> .
        <https://ann.ex/#me> foaf:name "Ann" ; foaf:mbox <mailto:ann@ann.ex> .
        <https://bob.ex/#me> foaf:name "Bob" .
    "#;
    let graph = parse_turtle(data, &Iri::parse("https://uma.ex/").unwrap(), &default_prefixes()).unwrap();
    let query = parse_query(
        "PREFIX foaf: <http://xmlns.com/foaf/0.1/>
         SELECT ?name ?mail WHERE {
           <https://uma.ex/#me> foaf:knows ?p . ?p foaf:name ?name .
           OPTIONAL { ?p foaf:mbox ?mail }
         }",
    )
    .unwrap();
    let solutions = evaluate(&query, &graph);
    print!("{}", solutions.to_table());
    println!("{}", serde_json::to_string_pretty(&solutions.to_json()).unwrap());
}
