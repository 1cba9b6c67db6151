//! Dereference documents from the bundled web and print the fetch ledger.

use linktrav::rdf::Iri;
use linktrav::sample;
use linktrav::webfetch::Dereferencer;

fn main() {
    let deref = Dereferencer::new(sample::address_book_web());
    for iri in ["https://uma.ex/#me", "https://ann.ex/#me", "https://uma.ex/", "https://nowhere.ex/"] {
        let got = deref.dereference(&Iri::parse(iri).unwrap());
        println!("{iri}: {:?}, {} triples", got.outcome, got.document.triples.len());
    }
    for entry in deref.ledger().entries() {
        println!("{}", serde_json::to_string(entry).unwrap());
    }
}
