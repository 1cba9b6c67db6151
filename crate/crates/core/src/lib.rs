pub mod cli;
pub mod guidance;
pub mod query;
pub mod rdf;
pub mod report;
pub mod sample;
pub mod syntax;
pub mod traversal;
pub mod webfetch;
