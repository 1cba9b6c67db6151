//! Parse a Turtle document against a base IRI and print it as N-Triples.

use linktrav::rdf::{parse_turtle, resolve_iri, Iri};
use linktrav::syntax::default_prefixes;

const BODY: &str = r#"
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
<#me> foaf:name "Uma" ;
      foaf:knows <https://ann.ex/#me>, <../bob/#me> ;
      foaf:img <photos/me.png> .
"#;

fn main() {
    let base = Iri::parse("https://people.ex/uma/").unwrap();
    let graph = parse_turtle(BODY, &base, &default_prefixes()).unwrap();
    print!("{}", graph.to_ntriples());

    for reference in ["g;x?y#s", "../../..", "//other.ex/p", "?q", "#frag"] {
        let resolved = resolve_iri("http://a/b/c/d;p?q", reference).unwrap();
        println!("{reference:>12} -> {resolved}");
    }
}
