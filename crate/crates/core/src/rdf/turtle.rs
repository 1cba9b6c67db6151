//! A small Turtle subset: IRIs, prefixed names, plain and language-tagged
//! literals, `;` and `,` lists, `@prefix`/`PREFIX`. No blank nodes,
//! collections, datatypes or in-document base.

use crate::syntax::{tokenize, Pos, PrefixMap, SyntaxError, Tok, Token, RDF_TYPE};

use super::{Graph, Iri, Literal, RdfError, Term, Triple};

pub fn parse_turtle(text: &str, base: &Iri, prefixes: &PrefixMap) -> Result<Graph, RdfError> {
    let tokens = tokenize(text)?;
    let end = end_pos(text);
    let mut parser = Parser { tokens, idx: 0, end, base, prefixes: prefixes.clone(), graph: Graph::new() };
    parser.document()?;
    Ok(parser.graph)
}

fn end_pos(text: &str) -> Pos {
    let line = text.matches('\n').count() + 1;
    let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Pos { line, column }
}

struct Parser<'a> {
    tokens: Vec<Token>,
    idx: usize,
    end: Pos,
    base: &'a Iri,
    prefixes: PrefixMap,
    graph: Graph,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    fn next(&mut self, expecting: &str) -> Result<Token, SyntaxError> {
        let tok = self
            .tokens
            .get(self.idx)
            .cloned()
            .ok_or_else(|| SyntaxError::at(self.end, format!("unterminated statement: expected {expecting}")))?;
        self.idx += 1;
        Ok(tok)
    }

    fn document(&mut self) -> Result<(), RdfError> {
        while let Some(token) = self.peek().cloned() {
            match &token.tok {
                Tok::Directive(d) if d == "prefix" => {
                    self.idx += 1;
                    self.prefix_decl()?;
                    self.expect_punct('.', "'.' after @prefix")?;
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("prefix") => {
                    self.idx += 1;
                    self.prefix_decl()?;
                }
                Tok::Directive(d) if d == "base" => {
                    return Err(unsupported(token.pos, "@base directive").into());
                }
                Tok::Word(w) if w.eq_ignore_ascii_case("base") => {
                    return Err(unsupported(token.pos, "BASE directive").into());
                }
                _ => self.triples()?,
            }
        }
        Ok(())
    }

    fn prefix_decl(&mut self) -> Result<(), RdfError> {
        let token = self.next("prefix label")?;
        let Tok::PName { prefix, local } = token.tok else {
            return Err(SyntaxError::at(token.pos, "expected prefix label like 'foaf:'").into());
        };
        if !local.is_empty() {
            return Err(SyntaxError::at(token.pos, "prefix label must end with ':'").into());
        }
        let token = self.next("namespace IRI")?;
        let Tok::IriRef(ns) = token.tok else {
            return Err(SyntaxError::at(token.pos, "expected namespace IRI in angle brackets").into());
        };
        let ns = self.base.resolve(&ns)?;
        self.prefixes.insert(prefix, ns.into_string());
        Ok(())
    }

    fn expect_punct(&mut self, c: char, what: &str) -> Result<(), SyntaxError> {
        let token = self.next(what)?;
        if token.tok == Tok::Punct(c) {
            Ok(())
        } else {
            Err(SyntaxError::at(token.pos, format!("expected {what}, found {}", token.tok)))
        }
    }

    fn triples(&mut self) -> Result<(), RdfError> {
        let subject = self.iri("subject")?;
        loop {
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
                let token = self.next("'.', ';' or ','")?;
                match token.tok {
                    Tok::Punct(',') => continue,
                    Tok::Punct(';') => {
                        // `;` may be repeated or directly precede the terminator.
                        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Punct(';'))) {
                            self.idx += 1;
                        }
                        match self.peek().map(|t| &t.tok) {
                            Some(Tok::Punct('.')) => {
                                self.idx += 1;
                                return Ok(());
                            }
                            None => {
                                return Err(SyntaxError::at(self.end, "unterminated statement: expected '.'").into())
                            }
                            _ => break,
                        }
                    }
                    Tok::Punct('.') => return Ok(()),
                    other => {
                        return Err(SyntaxError::at(token.pos, format!("expected '.', ';' or ',', found {other}")).into())
                    }
                }
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, RdfError> {
        if let Some(Token { tok: Tok::Word(w), .. }) = self.peek() {
            if w == "a" {
                self.idx += 1;
                return Iri::parse(RDF_TYPE);
            }
        }
        self.iri("predicate")
    }

    fn iri(&mut self, role: &str) -> Result<Iri, RdfError> {
        let token = self.next(role)?;
        self.term_iri(token, role)
    }

    fn term_iri(&self, token: Token, role: &str) -> Result<Iri, RdfError> {
        match token.tok {
            Tok::IriRef(r) => Ok(self.base.resolve(&r)?),
            Tok::PName { prefix, local } => {
                if prefix == "_" {
                    return Err(unsupported(token.pos, "blank node").into());
                }
                let ns = self
                    .prefixes
                    .get(&prefix)
                    .ok_or_else(|| SyntaxError::at(token.pos, format!("unknown prefix '{prefix}:'")))?;
                Ok(self.base.resolve(&format!("{ns}{local}"))?)
            }
            Tok::Punct(c @ ('[' | '(')) => Err(unsupported(token.pos, if c == '[' { "blank node" } else { "collection" }).into()),
            Tok::Punct(c @ (']' | ')' | '}' | '{')) => Err(SyntaxError::at(token.pos, format!("unbalanced '{c}'")).into()),
            other => Err(SyntaxError::at(token.pos, format!("expected {role} IRI, found {other}")).into()),
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        let token = self.next("object")?;
        match token.tok {
            Tok::Literal { value, language } => {
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::DatatypeMarker)) {
                    return Err(unsupported(token.pos, "datatyped literal").into());
                }
                Ok(Term::Literal(Literal { value, language }))
            }
            Tok::Number(_) => Err(unsupported(token.pos, "numeric literal").into()),
            Tok::Word(w) if w == "true" || w == "false" => Err(unsupported(token.pos, "boolean literal").into()),
            _ => Ok(Term::Iri(self.term_iri(token, "object")?)),
        }
    }
}

fn unsupported(pos: Pos, what: &str) -> SyntaxError {
    SyntaxError::at(pos, format!("unsupported construct: {what}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{default_prefixes, FOAF};

    pub(crate) const BODY_UMA: &str = "<https://uma.ex/#me> foaf:knows\n  <https://ann.ex/#me>, <https://bob.ex/#me>.\n<https://bob.ex/#me> foaf:img <bob.jpg>.\n";
    const BODY_ANN_DETAILS: &str =
        "<https://ann.ex/#me> foaf:name \"Ann\";\n  foaf:mbox <mailto:me@ann.ex>;\n  foaf:img <ann.jpg>.\n";

    fn parse(text: &str, base: &str) -> Result<Graph, RdfError> {
        parse_turtle(text, &Iri::parse(base).unwrap(), &default_prefixes())
    }

    fn foaf(local: &str) -> Iri {
        Iri::parse(format!("{FOAF}{local}")).unwrap()
    }

    #[test]
    fn uma_profile_resolves_relative_image() {
        let g = parse(BODY_UMA, "https://uma.ex/").unwrap();
        assert_eq!(g.len(), 3);
        let uma = Iri::parse("https://uma.ex/#me").unwrap();
        assert!(g.contains(&Triple::new(uma.clone(), foaf("knows"), Term::iri("https://ann.ex/#me"))));
        assert!(g.contains(&Triple::new(uma, foaf("knows"), Term::iri("https://bob.ex/#me"))));
        assert!(g.contains(&Triple::new(
            Iri::parse("https://bob.ex/#me").unwrap(),
            foaf("img"),
            Term::iri("https://uma.ex/bob.jpg")
        )));
    }

    #[test]
    fn predicate_object_list_shares_subject() {
        let g = parse(BODY_ANN_DETAILS, "https://ann.ex/about/").unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|t| t.subject.as_str() == "https://ann.ex/#me"));
        assert!(g.contains(&Triple::new(
            Iri::parse("https://ann.ex/#me").unwrap(),
            foaf("img"),
            Term::iri("https://ann.ex/about/ann.jpg")
        )));
    }

    #[test]
    fn empty_text_is_empty_graph() {
        assert!(parse("", "https://x.ex/").unwrap().is_empty());
        assert!(parse("  # only a comment\n", "https://x.ex/").unwrap().is_empty());
    }

    #[test]
    fn trailing_semicolon_at_end_of_document_is_unterminated() {
        let err = parse("<https://ann.ex/#me> foaf:name \"Felix\";", "https://bob.ex/").unwrap_err();
        let RdfError::Syntax(e) = err else { panic!("{err:?}") };
        assert!(e.message.contains("unterminated"), "{e}");
        assert_eq!(e.line, 1);
    }

    #[test]
    fn semicolon_before_dot_is_accepted() {
        let g = parse("<https://a.ex/#x> foaf:name \"X\"; .", "https://a.ex/").unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn missing_terminator_reports_end_of_input() {
        let err = parse("<https://a.ex/#x> foaf:name \"X\"\n", "https://a.ex/").unwrap_err();
        let RdfError::Syntax(e) = err else { panic!() };
        assert!(e.message.contains("unterminated"));
        assert_eq!((e.line, e.column), (2, 1));
    }

    #[test]
    fn unknown_prefix_carries_location() {
        let err = parse("<https://a.ex/#x>\n  ex:p \"X\".", "https://a.ex/").unwrap_err();
        let RdfError::Syntax(e) = err else { panic!() };
        assert!(e.message.contains("unknown prefix 'ex:'"));
        assert_eq!((e.line, e.column), (2, 3));
    }

    #[test]
    fn unbalanced_brackets_are_errors() {
        assert!(parse("<https://a.ex/#x> foaf:p <oops .", "https://a.ex/").is_err());
        assert!(parse("<https://a.ex/#x> foaf:p ] .", "https://a.ex/").is_err());
        assert!(parse("<https://a.ex/#x> foaf:p [ foaf:q \"v\" ] .", "https://a.ex/").is_err());
    }

    #[test]
    fn declared_prefix_and_a_keyword() {
        let text = "@prefix ex: <http://ex.org/ns#> .\nPREFIX rel: <rel/>\n<#x> a ex:Thing ; rel:p \"v\"@EN .";
        let g = parse(text, "https://a.ex/doc").unwrap();
        let x = Iri::parse("https://a.ex/doc#x").unwrap();
        assert!(g.contains(&Triple::new(x.clone(), Iri::parse(RDF_TYPE).unwrap(), Term::iri("http://ex.org/ns#Thing"))));
        assert!(g.contains(&Triple::new(x, Iri::parse("https://a.ex/rel/p").unwrap(), Literal::lang("v", "en"))));
    }

    #[test]
    fn datatypes_and_base_are_rejected() {
        assert!(parse("<https://a.ex/#x> foaf:age \"3\"^^<http://www.w3.org/2001/XMLSchema#int> .", "https://a.ex/").is_err());
        assert!(parse("@base <https://b.ex/> .", "https://a.ex/").is_err());
        assert!(parse("<https://a.ex/#x> foaf:age 3 .", "https://a.ex/").is_err());
    }
}
