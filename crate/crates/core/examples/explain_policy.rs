//! Check single triples against a content policy and explain why documents
//! were or were not fetched during a guided traversal.

use linktrav::guidance::triple_relevant;
use linktrav::rdf::{Iri, Term, Triple};
use linktrav::report::{explain_doc, explain_row};
use linktrav::sample;
use linktrav::traversal::{evaluate_augmented, TraversalConfig};

fn main() {
    let policy = sample::uma_policy();
    for rule in policy.rules() {
        println!("rule #{} {:?} {} (priority {})", rule.number, rule.action, rule.source, rule.priority);
    }

    let knows = Iri::parse("http://xmlns.com/foaf/0.1/knows").unwrap();
    let uma = Iri::parse(sample::UMA_WEBID).unwrap();
    let claim = Triple::new(uma, knows, Term::iri(sample::MICKEY));
    for source in ["https://uma.ex/", "https://bob.ex/"] {
        let relevant = triple_relevant(&policy, &claim, &Iri::parse(source).unwrap());
        println!("uma knows mickey, stated by {source}: {}", if relevant { "relevant" } else { "ignored" });
    }

    let query = sample::friends_query();
    let config = TraversalConfig::new([sample::UMA_WEBID.parse().unwrap()]);
    let (solutions, run) =
        evaluate_augmented(&query, &sample::structures(), &policy, &config, &sample::address_book_web()).unwrap();
    for doc in ["https://ann.ex/about/", sample::MICKEY, "https://ann.ex/blog/"] {
        print!("{}", explain_doc(&run.trace, &doc.parse().unwrap()).unwrap_or_else(|| format!("{doc}: never seen\n")));
    }
    print!("{}", explain_row(&query, &solutions, &run, Some(&policy), 1).unwrap());
}
