use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use linktrav::query::parse_query;
use linktrav::rdf::Iri;
use linktrav::traversal::{traverse_unguided, Semantics, TraversalConfig};
use linktrav::webfetch::{live_http_source, Dereferencer, DocumentSource, FetchOutcome, SourceResponse};

/// Serves a few fixed paths over HTTP/1.1 and records Accept headers.
struct Server {
    base: String,
    accepts: Arc<Mutex<Vec<String>>>,
}

fn respond(mut stream: TcpStream, base: &str, accepts: &Mutex<Vec<String>>) {
    let mut reader = BufReader::new(stream.try_clone().unwrap());
    let mut request_line = String::new();
    if reader.read_line(&mut request_line).is_err() {
        return;
    }
    let path = request_line.split_whitespace().nth(1).unwrap_or("/").to_string();
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).unwrap_or(0) == 0 || line == "\r\n" {
            break;
        }
        if let Some(v) = line.to_ascii_lowercase().strip_prefix("accept:") {
            accepts.lock().unwrap().push(v.trim().to_string());
        }
    }
    let (status, headers, body): (&str, String, Vec<u8>) = match path.as_str() {
        "/doc/" => (
            "200 OK",
            "Content-Type: text/turtle\r\n".into(),
            format!("<#me> <http://xmlns.com/foaf/0.1/knows> <{base}/friend/#me> .\n<#me> <http://xmlns.com/foaf/0.1/img> <pic.jpg> .\n").into_bytes(),
        ),
        "/friend/" => (
            "200 OK",
            "Content-Type: text/turtle\r\n".into(),
            b"<#me> <http://xmlns.com/foaf/0.1/name> \"Friend\" .\n".to_vec(),
        ),
        "/old" => ("301 Moved Permanently", format!("Location: {base}/doc/\r\n"), Vec::new()),
        "/loop" => ("302 Found", format!("Location: {base}/loop\r\n"), Vec::new()),
        "/big" => ("200 OK", "Content-Type: text/turtle\r\n".into(), vec![b'#'; 4096]),
        "/broken" => ("200 OK", "Content-Type: text/turtle\r\n".into(), b"<a> <b> .".to_vec()),
        _ => ("404 Not Found", String::new(), b"nope".to_vec()),
    };
    let head = format!("HTTP/1.1 {status}\r\n{headers}Content-Length: {}\r\nConnection: close\r\n\r\n", body.len());
    let _ = stream.write_all(head.as_bytes());
    let _ = stream.write_all(&body);
}

impl Server {
    fn start() -> Server {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let accepts = Arc::new(Mutex::new(Vec::new()));
        let (b, a) = (base.clone(), accepts.clone());
        thread::spawn(move || {
            for stream in listener.incoming().flatten() {
                let (b, a) = (b.clone(), a.clone());
                thread::spawn(move || respond(stream, &b, &a));
            }
        });
        Server { base, accepts }
    }

    fn iri(&self, path: &str) -> Iri {
        Iri::parse(format!("{}{path}", self.base)).unwrap()
    }
}

fn source(max: u64) -> impl DocumentSource {
    live_http_source(Duration::from_secs(5), max, "text/turtle").unwrap()
}

#[test]
fn fetches_with_accept_header() {
    let server = Server::start();
    match source(1 << 20).get(&server.iri("/doc/")) {
        SourceResponse::Body { final_iri, body } => {
            assert_eq!(final_iri, server.iri("/doc/"));
            assert!(String::from_utf8(body).unwrap().contains("knows"));
        }
        other => panic!("{other:?}"),
    }
    assert!(server.accepts.lock().unwrap().iter().any(|a| a == "text/turtle"));
}

#[test]
fn redirect_sets_the_base() {
    let server = Server::start();
    let deref = Dereferencer::new(source(1 << 20));
    let got = deref.dereference(&server.iri("/old"));
    assert_eq!(got.outcome, FetchOutcome::Ok);
    assert_eq!(got.document.base, server.iri("/doc/"));
    let img = Iri::parse(format!("{}/doc/pic.jpg", server.base)).unwrap();
    assert!(got.document.triples.iter().any(|t| t.object.as_iri() == Some(&img)));
}

#[test]
fn soft_failures_are_recorded() {
    let server = Server::start();
    let deref = Dereferencer::new(source(1024));
    assert_eq!(deref.dereference(&server.iri("/missing")).outcome, FetchOutcome::NotFound);
    assert_eq!(deref.dereference(&server.iri("/big")).outcome, FetchOutcome::Oversize);
    assert_eq!(deref.dereference(&server.iri("/broken")).outcome, FetchOutcome::ParseError);
    assert_eq!(deref.dereference(&server.iri("/loop")).outcome, FetchOutcome::NotFound);
    assert_eq!(deref.dereference(&Iri::parse("mailto:me@example.org").unwrap()).outcome, FetchOutcome::NotFound);

    // Nothing listens on port 9 of localhost in the sandbox.
    let unreachable = Iri::parse("http://127.0.0.1:9/").unwrap();
    assert_eq!(deref.dereference(&unreachable).outcome, FetchOutcome::NotFound);
    let ledger = deref.ledger();
    assert_eq!(ledger.entries().len(), 6);
    assert_eq!(ledger.distinct_ok(), 0);
}

#[test]
fn traversal_over_http() {
    let server = Server::start();
    let query = parse_query(
        "SELECT ?f ?n WHERE { ?me <http://xmlns.com/foaf/0.1/knows> ?f . ?f <http://xmlns.com/foaf/0.1/name> ?n }",
    )
    .unwrap();
    let config = TraversalConfig::new([server.iri("/doc/#me")]);
    let run = traverse_unguided(&config, Semantics::CMatch, &source(1 << 20), &query).unwrap();
    assert_eq!(run.trace.ledger.distinct_ok(), 2);
    // pic.jpg is linked by an img triple, which matches no pattern.
    assert!(!run.trace.ledger.contains_request(&server.iri("/doc/pic.jpg")));
}

#[test]
fn cli_live_mode() {
    let server = Server::start();
    let dir = tempfile::tempdir().unwrap();
    let query = dir.path().join("q.rq");
    std::fs::write(&query, "PREFIX foaf: <http://xmlns.com/foaf/0.1/>\nSELECT ?n WHERE { ?me foaf:knows ?f . ?f foaf:name ?n }\n").unwrap();
    let seed = server.iri("/doc/#me");
    let args = [
        "linktrav", "run", "--live", "--query", query.to_str().unwrap(), "--seed", seed.as_str(), "--format", "tsv",
        "--timeout", "5",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = linktrav::cli::run_cli(args, &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let out = String::from_utf8(out).unwrap();
    assert!(out.starts_with("?n\n\"Friend\"\n"), "{out}");
    assert!(out.contains("documents fetched: 2\n"), "{out}");
}
