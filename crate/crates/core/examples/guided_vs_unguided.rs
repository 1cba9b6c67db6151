//! Run the friends query over the bundled web under every reachability
//! semantics and with guidance, then print the request counts per subtree.

use linktrav::report::{subtree_counts, Mode, RunReport};
use linktrav::sample;
use linktrav::traversal::{evaluate_augmented, evaluate_unguided, Semantics, TraversalConfig};

fn main() {
    let web = sample::address_book_web();
    let query = sample::friends_query();
    let config = TraversalConfig::new([sample::UMA_WEBID.parse().unwrap()]);

    let mut c_all = None;
    for sem in [Semantics::CNone, Semantics::CMatch, Semantics::CAll] {
        let (solutions, run) = evaluate_unguided(&query, sem, &config, &web).unwrap();
        let report = RunReport::new(Mode::Unguided(sem), solutions, &run.trace);
        println!("{sem}: {} rows, {} documents", report.solutions.len(), report.documents_fetched());
        c_all = Some(run);
    }

    let (solutions, guided) =
        evaluate_augmented(&query, &sample::structures(), &sample::uma_policy(), &config, &web).unwrap();
    println!("guided: {} rows, {} documents", solutions.len(), guided.trace.ledger.distinct_ok());
    print!("{}", solutions.to_table());

    for s in subtree_counts(&c_all.unwrap().trace, &guided.trace) {
        println!("{} requests: {} -> {}", s.label, s.unguided, s.guided);
    }
}
