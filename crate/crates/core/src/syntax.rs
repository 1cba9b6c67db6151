//! Tokenizer shared by the Turtle-subset and query parsers.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Prefix label (without colon) to namespace IRI.
pub type PrefixMap = BTreeMap<String, String>;

pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";
pub const DBR: &str = "http://dbpedia.org/resource/";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// `foaf:` and `dbr:`, which the address-book documents use undeclared.
pub fn default_prefixes() -> PrefixMap {
    [("foaf", FOAF), ("dbr", DBR)].into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { line: pos.line, column: pos.column, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Var(String),
    Literal { value: String, language: Option<String> },
    /// `@prefix`, `@base`: the word after the `@`.
    Directive(String),
    Word(String),
    Number(String),
    Punct(char),
    /// `^^`, only lexed so the parsers can reject datatyped literals by name.
    DatatypeMarker,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::IriRef(i) => write!(f, "<{i}>"),
            Tok::PName { prefix, local } => write!(f, "{prefix}:{local}"),
            Tok::Var(v) => write!(f, "?{v}"),
            Tok::Literal { value, .. } => write!(f, "\"{value}\""),
            Tok::Directive(d) => write!(f, "@{d}"),
            Tok::Word(w) | Tok::Number(w) => f.write_str(w),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::DatatypeMarker => f.write_str("^^"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    Lexer { chars: text.chars().collect(), idx: 0, line: 1, column: 1 }.run()
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.')
}

impl Lexer {
    fn pos(&self) -> Pos {
        Pos { line: self.line, column: self.column }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.idx).copied()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn run(mut self) -> Result<Vec<Token>, SyntaxError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let pos = self.pos();
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '#' => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    continue;
                }
                '<' => self.iri_ref(pos)?,
                '"' | '\'' => self.literal(pos)?,
                '?' | '$' => {
                    self.bump();
                    let name = self.name_run();
                    if name.is_empty() {
                        return Err(SyntaxError::at(pos, "empty variable name"));
                    }
                    Tok::Var(name)
                }
                '@' => {
                    self.bump();
                    Tok::Directive(self.name_run())
                }
                '^' if self.peek_at(1) == Some('^') => {
                    self.bump();
                    self.bump();
                    Tok::DatatypeMarker
                }
                '.' | ';' | ',' | '{' | '}' | '(' | ')' | '[' | ']' | '*' | '=' | '!' | '|' | '/'
                | '>' | '+' | '^' => {
                    self.bump();
                    Tok::Punct(c)
                }
                c if c.is_ascii_digit() => Tok::Number(self.name_run()),
                c if is_name_char(c) || c == ':' => self.word_or_pname(),
                other => return Err(SyntaxError::at(pos, format!("unexpected character {other:?}"))),
            };
            out.push(Token { tok, pos });
        }
        Ok(out)
    }

    /// Reads name characters, leaving a trailing `.` for the statement terminator.
    fn name_run(&mut self) -> String {
        let mut end = self.idx;
        while end < self.chars.len() && is_name_char(self.chars[end]) {
            end += 1;
        }
        while end > self.idx && self.chars[end - 1] == '.' {
            end -= 1;
        }
        let mut s = String::new();
        while self.idx < end {
            s.push(self.bump().expect("in range"));
        }
        s
    }

    fn word_or_pname(&mut self) -> Tok {
        let prefix = self.name_run();
        if self.peek() == Some(':') {
            self.bump();
            let mut end = self.idx;
            while end < self.chars.len() && (is_name_char(self.chars[end]) || matches!(self.chars[end], ':' | '%')) {
                end += 1;
            }
            while end > self.idx && self.chars[end - 1] == '.' {
                end -= 1;
            }
            let mut local = String::new();
            while self.idx < end {
                local.push(self.bump().expect("in range"));
            }
            Tok::PName { prefix, local }
        } else {
            Tok::Word(prefix)
        }
    }

    fn iri_ref(&mut self, pos: Pos) -> Result<Tok, SyntaxError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(Tok::IriRef(s)),
                Some(c) if c == '\n' || c == '<' || c == '"' || c == ' ' => {
                    return Err(SyntaxError::at(pos, "unbalanced '<': IRI reference not closed"))
                }
                Some(c) => s.push(c),
                None => return Err(SyntaxError::at(pos, "unbalanced '<': IRI reference not closed")),
            }
        }
    }

    fn literal(&mut self, pos: Pos) -> Result<Tok, SyntaxError> {
        let quote = self.bump().expect("quote");
        let mut value = String::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => break,
                Some('\\') => {
                    let escaped = match self.bump() {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('b') => '\u{8}',
                        Some('f') => '\u{c}',
                        Some(c @ ('"' | '\'' | '\\')) => c,
                        Some('u') => self.unicode_escape(pos, 4)?,
                        Some('U') => self.unicode_escape(pos, 8)?,
                        _ => return Err(SyntaxError::at(pos, "invalid escape in literal")),
                    };
                    value.push(escaped);
                }
                Some('\n') | None => return Err(SyntaxError::at(pos, "unterminated string literal")),
                Some(c) => value.push(c),
            }
        }
        let language = if self.peek() == Some('@') {
            self.bump();
            let mut tag = String::new();
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '-' {
                    tag.push(c);
                    self.bump();
                } else {
                    break;
                }
            }
            if tag.is_empty() {
                return Err(SyntaxError::at(pos, "empty language tag"));
            }
            Some(tag.to_ascii_lowercase())
        } else {
            None
        };
        Ok(Tok::Literal { value, language })
    }

    fn unicode_escape(&mut self, pos: Pos, digits: usize) -> Result<char, SyntaxError> {
        let mut hex = String::new();
        for _ in 0..digits {
            hex.push(self.bump().ok_or_else(|| SyntaxError::at(pos, "truncated unicode escape"))?);
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| SyntaxError::at(pos, "invalid unicode escape"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn pname_does_not_swallow_terminator() {
        assert_eq!(
            toks("foaf:img <bob.jpg>."),
            vec![
                Tok::PName { prefix: "foaf".into(), local: "img".into() },
                Tok::IriRef("bob.jpg".into()),
                Tok::Punct('.'),
            ]
        );
        assert_eq!(
            toks("?friend foaf:name ?name."),
            vec![
                Tok::Var("friend".into()),
                Tok::PName { prefix: "foaf".into(), local: "name".into() },
                Tok::Var("name".into()),
                Tok::Punct('.'),
            ]
        );
    }

    #[test]
    fn hash_inside_iri_is_not_a_comment() {
        assert_eq!(toks("<https://uma.ex/#me> # trailing"), vec![Tok::IriRef("https://uma.ex/#me".into())]);
    }

    #[test]
    fn literal_with_language() {
        assert_eq!(
            toks(r#""Mickey Mouse"@en"#),
            vec![Tok::Literal { value: "Mickey Mouse".into(), language: Some("en".into()) }]
        );
    }

    #[test]
    fn positions_are_one_based() {
        let err = tokenize("<a> <b>\n  <oops").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
    }
}
