use std::collections::BTreeMap;
use std::fmt;

use super::Iri;

/// A literal with an optional language tag. No datatypes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub value: String,
    pub language: Option<String>,
}

impl Literal {
    pub fn simple(value: impl Into<String>) -> Self {
        Literal { value: value.into(), language: None }
    }

    pub fn lang(value: impl Into<String>, language: impl Into<String>) -> Self {
        Literal { value: value.into(), language: Some(language.into().to_ascii_lowercase()) }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        for c in self.value.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\r' => f.write_str("\\r")?,
                '\t' => f.write_str("\\t")?,
                c => write!(f, "{c}")?,
            }
        }
        f.write_str("\"")?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")?;
        }
        Ok(())
    }
}

/// A ground RDF term. IRIs order before literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn iri(s: &str) -> Self {
        Term::Iri(Iri::parse(s).expect("absolute IRI"))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Literal(lit) => lit.fmt(f),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A query variable name, stored without the leading `?`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        let name = name.strip_prefix(['?', '$']).map(str::to_string).unwrap_or(name);
        Variable(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One position of a triple pattern: a constant or a variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Const(Term),
    Var(Variable),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(Variable::new(name))
    }

    pub fn iri(s: &str) -> Self {
        PatternTerm::Const(Term::iri(s))
    }

    pub fn as_const(&self) -> Option<&Term> {
        match self {
            PatternTerm::Const(t) => Some(t),
            PatternTerm::Var(_) => None,
        }
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }

    /// Replaces a bound variable with its value.
    pub fn substitute(&self, mapping: &SolutionMapping) -> PatternTerm {
        match self {
            PatternTerm::Var(v) => match mapping.get(v) {
                Some(t) => PatternTerm::Const(t.clone()),
                None => self.clone(),
            },
            c => c.clone(),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(iri: Iri) -> Self {
        PatternTerm::Const(Term::Iri(iri))
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Const(t) => t.fmt(f),
            PatternTerm::Var(v) => v.fmt(f),
        }
    }
}

impl fmt::Debug for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A ground triple. Subject and predicate are IRIs by construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject, predicate, object: object.into() }
    }

    /// IRIs in subject and object position. Predicates are never links.
    pub fn link_iris(&self) -> impl Iterator<Item = &Iri> {
        std::iter::once(&self.subject).chain(self.object.as_iri())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> {} .", self.subject, self.predicate, self.object)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} {:?} {:?})", self.subject, self.predicate, self.object)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        TriplePattern { subject: subject.into(), predicate: predicate.into(), object: object.into() }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }

    pub fn substitute(&self, mapping: &SolutionMapping) -> TriplePattern {
        TriplePattern {
            subject: self.subject.substitute(mapping),
            predicate: self.predicate.substitute(mapping),
            object: self.object.substitute(mapping),
        }
    }

    /// The ground triple this pattern denotes, if it has no variables left.
    pub fn to_triple(&self) -> Option<Triple> {
        let s = self.subject.as_const()?.as_iri()?.clone();
        let p = self.predicate.as_const()?.as_iri()?.clone();
        let o = self.object.as_const()?.clone();
        Some(Triple::new(s, p, o))
    }
}

impl From<&Triple> for TriplePattern {
    fn from(t: &Triple) -> Self {
        TriplePattern::new(t.subject.clone(), t.predicate.clone(), t.object.clone())
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

impl fmt::Debug for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// A partial assignment of variables to ground terms.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SolutionMapping(BTreeMap<Variable, Term>);

impl SolutionMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &Variable) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn get_name(&self, name: &str) -> Option<&Term> {
        self.0.get(&Variable::new(name))
    }

    /// Binds `var`, failing if it is already bound to something else.
    pub fn bind(&mut self, var: Variable, value: Term) -> bool {
        match self.0.get(&var) {
            Some(existing) => *existing == value,
            None => {
                self.0.insert(var, value);
                true
            }
        }
    }

    pub fn is_compatible(&self, other: &SolutionMapping) -> bool {
        let (small, large) = if self.0.len() <= other.0.len() { (self, other) } else { (other, self) };
        small.0.iter().all(|(v, t)| large.0.get(v).is_none_or(|u| u == t))
    }

    /// Union of two compatible mappings; `None` when they disagree.
    pub fn merge(&self, other: &SolutionMapping) -> Option<SolutionMapping> {
        if !self.is_compatible(other) {
            return None;
        }
        let mut out = self.clone();
        for (v, t) in &other.0 {
            out.0.entry(v.clone()).or_insert_with(|| t.clone());
        }
        Some(out)
    }

    pub fn project(&self, vars: &[Variable]) -> SolutionMapping {
        SolutionMapping(
            vars.iter().filter_map(|v| self.0.get(v).map(|t| (v.clone(), t.clone()))).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.0.iter()
    }
}

impl FromIterator<(Variable, Term)> for SolutionMapping {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        SolutionMapping(iter.into_iter().collect())
    }
}

/// Matches a ground triple against a pattern, binding its variables.
pub fn match_triple(triple: &Triple, pattern: &TriplePattern) -> Option<SolutionMapping> {
    let mut mapping = SolutionMapping::new();
    let subject = Term::Iri(triple.subject.clone());
    let predicate = Term::Iri(triple.predicate.clone());
    for (position, value) in pattern.positions().into_iter().zip([&subject, &predicate, &triple.object]) {
        match position {
            PatternTerm::Const(c) if c != value => return None,
            PatternTerm::Const(_) => {}
            PatternTerm::Var(v) => {
                if !mapping.bind(v.clone(), value.clone()) {
                    return None;
                }
            }
        }
    }
    Some(mapping)
}
