use std::fmt;

use crate::model::{Datatype, Iri, Literal, TimeInterval, TimePoint};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryTerm {
    Var(String),
    /// `prefix:local`
    Curie { prefix: String, local: String },
    Iri(Iri),
    /// `kind/localId`, resolved against the store's base IRI.
    Relative(String),
    Literal(Literal),
}

impl QueryTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            QueryTerm::Var(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeSpec {
    At(TimePoint),
    /// Matches statements overlapping the interval.
    Span(TimeInterval),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub subject: QueryTerm,
    pub property: QueryTerm,
    pub object: QueryTerm,
    pub time: Option<TimeSpec>,
}

impl Clause {
    pub fn terms(&self) -> [&QueryTerm; 3] {
        [&self.subject, &self.property, &self.object]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryAst {
    pub select: Vec<String>,
    pub clauses: Vec<Clause>,
}

impl QueryAst {
    /// First selected variable that no clause mentions.
    pub fn unbound_select(&self) -> Option<&str> {
        self.select
            .iter()
            .find(|v| {
                !self
                    .clauses
                    .iter()
                    .any(|c| c.terms().iter().any(|t| t.var() == Some(v.as_str())))
            })
            .map(String::as_str)
    }
}

impl fmt::Display for QueryTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryTerm::Var(v) => write!(f, "?{v}"),
            QueryTerm::Curie { prefix, local } => write!(f, "{prefix}:{local}"),
            QueryTerm::Iri(iri) => write!(f, "<{iri}>"),
            QueryTerm::Relative(rel) => f.write_str(rel),
            QueryTerm::Literal(lit) => {
                let mut text = String::from("\"");
                crate::model::triple_escape(lit.lexical(), &mut text);
                text.push('"');
                match (lit.language(), lit.datatype()) {
                    (Some(lang), _) => write!(f, "{text}@{lang}"),
                    (None, Datatype::String) => f.write_str(&text),
                    (None, dt) => write!(f, "{text}^^{dt}"),
                }
            }
        }
    }
}

impl fmt::Display for TimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeSpec::At(t) => write!(f, "{t}"),
            TimeSpec::Span(iv) => {
                f.write_str("[")?;
                if let Some(s) = iv.start() {
                    write!(f, "{s}")?;
                }
                f.write_str("..")?;
                if let Some(e) = iv.end() {
                    write!(f, "{e}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for QueryAst {
    /// Single-line canonical form; parses back to an equal AST.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT")?;
        for v in &self.select {
            write!(f, " ?{v}")?;
        }
        f.write_str(" WHERE {")?;
        for c in &self.clauses {
            write!(f, " {} {} {}", c.subject, c.property, c.object)?;
            if let Some(t) = &c.time {
                write!(f, " @{t}")?;
            }
            f.write_str(" .")?;
        }
        f.write_str(" }")
    }
}
