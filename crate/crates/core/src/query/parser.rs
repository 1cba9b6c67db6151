use crate::rdf::{Iri, Literal, PatternTerm, Term, TriplePattern, Variable};
use crate::syntax::{default_prefixes, tokenize, Pos, PrefixMap, SyntaxError, Tok, Token, RDF_TYPE};

use super::{Query, QueryError};

/// Parses `SELECT ?v... WHERE { patterns OPTIONAL { patterns } ... }`.
pub fn parse_query(text: &str) -> Result<Query, QueryError> {
    let tokens = tokenize(text)?;
    let end = Pos {
        line: text.matches('\n').count() + 1,
        column: text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1,
    };
    let mut p = Parser { tokens, idx: 0, end, prefixes: default_prefixes() };
    p.query()
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    end: Pos,
    prefixes: PrefixMap,
}

const UNSUPPORTED_KEYWORDS: &[&str] = &[
    "FILTER", "UNION", "MINUS", "BIND", "VALUES", "GRAPH", "SERVICE", "ORDER", "LIMIT", "OFFSET", "GROUP",
    "HAVING", "CONSTRUCT", "ASK", "DESCRIBE", "FROM", "BASE",
];

fn keyword(tok: &Tok) -> Option<String> {
    match tok {
        Tok::Word(w) => Some(w.to_ascii_uppercase()),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    fn peek_keyword(&self) -> Option<String> {
        self.peek().and_then(|t| keyword(&t.tok))
    }

    fn next(&mut self, expecting: &str) -> Result<Token, QueryError> {
        let tok = self
            .tokens
            .get(self.idx)
            .cloned()
            .ok_or_else(|| SyntaxError::at(self.end, format!("unexpected end of query: expected {expecting}")))?;
        self.idx += 1;
        Ok(tok)
    }

    fn expect_punct(&mut self, c: char) -> Result<(), QueryError> {
        let t = self.next(&format!("'{c}'"))?;
        if t.tok == Tok::Punct(c) {
            Ok(())
        } else {
            Err(SyntaxError::at(t.pos, format!("expected '{c}', found {}", t.tok)).into())
        }
    }

    fn unsupported_check(&self) -> Result<(), QueryError> {
        if let Some(t) = self.peek() {
            if let Some(kw) = keyword(&t.tok) {
                if UNSUPPORTED_KEYWORDS.contains(&kw.as_str()) {
                    return Err(QueryError::Unsupported { construct: kw, line: t.pos.line, column: t.pos.column });
                }
            }
        }
        Ok(())
    }

    fn query(&mut self) -> Result<Query, QueryError> {
        loop {
            self.unsupported_check()?;
            match self.peek_keyword().as_deref() {
                Some("PREFIX") => {
                    self.idx += 1;
                    self.prefix_decl()?;
                }
                Some("SELECT") => {
                    self.idx += 1;
                    break;
                }
                _ => {
                    let t = self.next("SELECT")?;
                    return Err(SyntaxError::at(t.pos, format!("expected SELECT, found {}", t.tok)).into());
                }
            }
        }

        if matches!(self.peek_keyword().as_deref(), Some("DISTINCT" | "REDUCED")) {
            // Results are already sets.
            self.idx += 1;
        }
        let mut projection = Vec::new();
        while let Some(t) = self.peek() {
            match &t.tok {
                Tok::Var(v) => {
                    projection.push(Variable::new(v.as_str()));
                    self.idx += 1;
                }
                Tok::Punct('*') => {
                    return Err(QueryError::Unsupported {
                        construct: "SELECT *".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    })
                }
                Tok::Punct('(') => {
                    return Err(QueryError::Unsupported {
                        construct: "projection expression".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    })
                }
                _ => break,
            }
        }
        self.unsupported_check()?;
        if self.peek_keyword().as_deref() == Some("WHERE") {
            self.idx += 1;
        }
        self.expect_punct('{')?;

        let mut required = Vec::new();
        let mut optional_groups = Vec::new();
        loop {
            self.unsupported_check()?;
            let Some(t) = self.peek().cloned() else {
                return Err(SyntaxError::at(self.end, "unbalanced '{': missing '}'").into());
            };
            match (&t.tok, keyword(&t.tok).as_deref()) {
                (Tok::Punct('}'), _) => {
                    self.idx += 1;
                    break;
                }
                (Tok::Punct('.'), _) => self.idx += 1,
                (Tok::Punct('{'), _) => {
                    return Err(QueryError::Unsupported {
                        construct: "nested group".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    })
                }
                (_, Some("OPTIONAL")) => {
                    self.idx += 1;
                    optional_groups.push(self.optional_group()?);
                }
                _ => self.triples_same_subject(&mut required)?,
            }
        }

        self.unsupported_check()?;
        if let Some(t) = self.peek() {
            return Err(SyntaxError::at(t.pos, format!("unexpected {} after query body", t.tok)).into());
        }
        Query::new(projection, required, optional_groups)
    }

    fn optional_group(&mut self) -> Result<Vec<TriplePattern>, QueryError> {
        self.expect_punct('{')?;
        let mut patterns = Vec::new();
        loop {
            self.unsupported_check()?;
            let Some(t) = self.peek().cloned() else {
                return Err(SyntaxError::at(self.end, "unbalanced '{': OPTIONAL group not closed").into());
            };
            match (&t.tok, keyword(&t.tok).as_deref()) {
                (Tok::Punct('}'), _) => {
                    self.idx += 1;
                    return Ok(patterns);
                }
                (Tok::Punct('.'), _) => self.idx += 1,
                (_, Some("OPTIONAL")) => {
                    return Err(QueryError::Unsupported {
                        construct: "nested OPTIONAL".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    })
                }
                (Tok::Punct('{'), _) => {
                    return Err(QueryError::Unsupported {
                        construct: "nested group".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    })
                }
                _ => self.triples_same_subject(&mut patterns)?,
            }
        }
    }

    fn prefix_decl(&mut self) -> Result<(), QueryError> {
        let t = self.next("prefix label")?;
        let Tok::PName { prefix, local } = t.tok else {
            return Err(SyntaxError::at(t.pos, "expected prefix label like 'foaf:'").into());
        };
        if !local.is_empty() {
            return Err(SyntaxError::at(t.pos, "prefix label must end with ':'").into());
        }
        let t = self.next("namespace IRI")?;
        let Tok::IriRef(ns) = t.tok else {
            return Err(SyntaxError::at(t.pos, "expected namespace IRI").into());
        };
        let ns = Iri::parse(ns).map_err(|e| SyntaxError::at(t.pos, e.to_string()))?;
        self.prefixes.insert(prefix, ns.into_string());
        Ok(())
    }

    /// subject verb objects (';' verb objects)* ; a trailing '.' is left for the caller.
    fn triples_same_subject(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.term("subject", false)?;
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.term("object", true)?;
                out.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Punct(','))) {
                    self.idx += 1;
                    continue;
                }
                break;
            }
            if matches!(self.peek().map(|t| &t.tok), Some(Tok::Punct(';'))) {
                while matches!(self.peek().map(|t| &t.tok), Some(Tok::Punct(';'))) {
                    self.idx += 1;
                }
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Punct('.' | '}'))) {
                    return Ok(());
                }
                continue;
            }
            return match self.peek() {
                None => Ok(()),
                Some(t) if matches!(t.tok, Tok::Punct('.' | '}')) => Ok(()),
                Some(t) if keyword(&t.tok).is_some_and(|k| k == "OPTIONAL" || UNSUPPORTED_KEYWORDS.contains(&k.as_str())) => Ok(()),
                Some(t) => Err(SyntaxError::at(t.pos, format!("expected '.', ';', ',' or '}}', found {}", t.tok)).into()),
            };
        }
    }

    fn verb(&mut self) -> Result<PatternTerm, QueryError> {
        if let Some(Token { tok: Tok::Word(w), .. }) = self.peek() {
            if w == "a" {
                self.idx += 1;
                return Ok(PatternTerm::iri(RDF_TYPE));
            }
        }
        let t = self.peek().cloned();
        let term = self.term("predicate", false)?;
        if let (PatternTerm::Const(_), Some(t)) = (&term, &t) {
            if let Some(Tok::Punct(c @ ('/' | '|' | '*' | '+' | '^'))) = self.peek().map(|x| &x.tok) {
                return Err(QueryError::Unsupported {
                    construct: format!("property path '{c}'"),
                    line: t.pos.line,
                    column: t.pos.column,
                });
            }
        }
        Ok(term)
    }

    fn term(&mut self, role: &str, allow_literal: bool) -> Result<PatternTerm, QueryError> {
        let t = self.next(role)?;
        match t.tok {
            Tok::Var(v) => Ok(PatternTerm::Var(Variable::new(v))),
            Tok::IriRef(r) => Iri::parse(r.as_str())
                .map(PatternTerm::from)
                .map_err(|_| SyntaxError::at(t.pos, format!("relative IRI <{r}> not allowed in queries")).into()),
            Tok::PName { prefix, local } => {
                if prefix == "_" {
                    return Err(QueryError::Unsupported {
                        construct: "blank node".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    });
                }
                let ns = self
                    .prefixes
                    .get(&prefix)
                    .ok_or_else(|| SyntaxError::at(t.pos, format!("unknown prefix '{prefix}:'")))?;
                Iri::parse(format!("{ns}{local}"))
                    .map(PatternTerm::from)
                    .map_err(|e| SyntaxError::at(t.pos, e.to_string()).into())
            }
            Tok::Literal { value, language } if allow_literal => {
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::DatatypeMarker)) {
                    return Err(QueryError::Unsupported {
                        construct: "datatyped literal".into(),
                        line: t.pos.line,
                        column: t.pos.column,
                    });
                }
                Ok(PatternTerm::Const(Term::Literal(Literal { value, language })))
            }
            Tok::Punct('[') | Tok::Punct('(') => Err(QueryError::Unsupported {
                construct: "blank node or collection".into(),
                line: t.pos.line,
                column: t.pos.column,
            }),
            other => Err(SyntaxError::at(t.pos, format!("expected {role}, found {other}")).into()),
        }
    }
}
