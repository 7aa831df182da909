//! Conjunctive evaluation of parsed queries.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::ast::{Clause, QueryAst, QueryTerm, TimeSpec};
use super::QueryError;
use crate::ingest::mint_iri;
use crate::model::{Iri, Term};
use crate::names::Namespaces;
use crate::store::{Pattern, Store, TimeConstraint};
use crate::vocab::{EntityKind, PREFIX};

/// Query answer: one column per selected variable, distinct rows in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl ResultTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Tab-separated text, header first, identifiers compacted.
    pub fn to_tsv(&self, ns: &Namespaces) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| format!("?{c}")).collect();
        out.push_str(&header.join("\t"));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|t| ns.compact_term(t)).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ResultTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header: Vec<String> = self.columns.iter().map(|c| format!("?{c}")).collect();
        writeln!(f, "{}", header.join("\t"))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Term::to_ntriples).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// A clause term after name resolution.
#[derive(Debug, Clone, PartialEq)]
enum Slot {
    Var(String),
    Fixed(Term),
}

#[derive(Debug, Clone)]
struct Resolved {
    terms: [Slot; 3],
    time: Option<TimeConstraint>,
}

fn resolve_term(store: &Store, base: &Iri, term: &QueryTerm) -> Result<Slot, QueryError> {
    Ok(match term {
        QueryTerm::Var(v) => Slot::Var(v.clone()),
        QueryTerm::Iri(iri) => Slot::Fixed(Term::Iri(iri.clone())),
        QueryTerm::Literal(lit) => Slot::Fixed(Term::Literal(lit.clone())),
        QueryTerm::Curie { prefix, local } => {
            if prefix != PREFIX {
                return Err(QueryError::UnknownPrefix(prefix.clone()));
            }
            Slot::Fixed(Term::Iri(store.vocab().term(local)))
        }
        QueryTerm::Relative(rel) => {
            let (segment, id) = rel.split_once('/').expect("parser guarantees kind/id");
            let iri = match EntityKind::from_segment(segment) {
                Some(kind) => mint_iri(base, kind, id).map_err(|e| QueryError::InvalidTerm(format!("{rel}: {e}")))?,
                None => base
                    .join(rel)
                    .map_err(|e| QueryError::InvalidTerm(format!("{rel}: {e}")))?,
            };
            Slot::Fixed(Term::Iri(iri))
        }
    })
}

fn resolve(store: &Store, base: &Iri, clause: &Clause) -> Result<Resolved, QueryError> {
    let s = resolve_term(store, base, &clause.subject)?;
    let p = resolve_term(store, base, &clause.property)?;
    let o = resolve_term(store, base, &clause.object)?;
    if let Slot::Fixed(prop) = &p {
        let known = prop.as_iri().is_some_and(|iri| store.vocab().get(iri).is_some());
        if !known {
            return Err(QueryError::UnknownProperty(clause.property.to_string()));
        }
    }
    let time = clause.time.map(|t| match t {
        TimeSpec::At(p) => TimeConstraint::At(p),
        TimeSpec::Span(iv) => TimeConstraint::Overlaps(iv),
    });
    Ok(Resolved {
        terms: [s, p, o],
        time,
    })
}

type Binding = HashMap<String, Term>;

fn bound<'a>(slot: &'a Slot, binding: &'a Binding) -> Option<&'a Term> {
    match slot {
        Slot::Fixed(t) => Some(t),
        Slot::Var(v) => binding.get(v),
    }
}

/// Extends `binding` with every match of `clause`.
fn extend(store: &Store, clause: &Resolved, binding: &Binding, out: &mut Vec<Binding>) -> Result<(), QueryError> {
    let [s, p, o] = &clause.terms;
    let mut pattern = Pattern::any().with_inverses().time(clause.time);
    match bound(s, binding) {
        Some(Term::Iri(iri)) => pattern = pattern.subject(iri),
        Some(Term::Literal(_)) => return Ok(()),
        None => {}
    }
    match bound(p, binding) {
        Some(Term::Iri(iri)) => {
            if store.vocab().get(iri).is_none() {
                return Ok(());
            }
            pattern = pattern.property(iri)
        }
        Some(Term::Literal(_)) => return Ok(()),
        None => {}
    }
    if let Some(obj) = bound(o, binding) {
        pattern = pattern.object(obj.clone());
    }
    let matches = store.match_pattern(&pattern)?;
    'next: for m in matches {
        let t = &m.triple;
        let values = [Term::Iri(t.subject.clone()), Term::Iri(t.property.clone()), t.object.clone()];
        let mut b = binding.clone();
        for (slot, value) in clause.terms.iter().zip(values) {
            if let Slot::Var(v) = slot {
                match b.get(v) {
                    Some(existing) if *existing != value => continue 'next,
                    Some(_) => {}
                    None => {
                        b.insert(v.clone(), value);
                    }
                }
            }
        }
        out.push(b);
    }
    Ok(())
}

/// Number of positions fixed or already bound; more is more selective.
fn boundness(clause: &Resolved, vars: &BTreeSet<&str>) -> usize {
    clause
        .terms
        .iter()
        .filter(|s| match s {
            Slot::Fixed(_) => true,
            Slot::Var(v) => vars.contains(v.as_str()),
        })
        .count()
}

/// Evaluates `ast` with inverse inference; relative identifiers resolve
/// against `base`.
pub fn eval_query(store: &Store, ast: &QueryAst, base: &Iri) -> Result<ResultTable, QueryError> {
    if let Some(v) = ast.unbound_select() {
        return Err(QueryError::UnboundSelectVariable(v.to_string()));
    }
    let pending: Vec<Resolved> = ast
        .clauses
        .iter()
        .map(|c| resolve(store, base, c))
        .collect::<Result<_, _>>()?;

    let mut bindings: Vec<Binding> = vec![Binding::new()];
    let mut vars: BTreeSet<&str> = BTreeSet::new();
    let names: Vec<Vec<String>> = pending
        .iter()
        .map(|c| {
            c.terms
                .iter()
                .filter_map(|s| match s {
                    Slot::Var(v) => Some(v.clone()),
                    Slot::Fixed(_) => None,
                })
                .collect()
        })
        .collect();
    let mut order: Vec<usize> = (0..pending.len()).collect();
    while !order.is_empty() {
        let (pos, _) = order
            .iter()
            .enumerate()
            .max_by_key(|(i, &c)| (boundness(&pending[c], &vars), std::cmp::Reverse(*i)))
            .expect("non-empty");
        let idx = order.remove(pos);
        let clause = &pending[idx];
        let mut next = Vec::new();
        for b in &bindings {
            extend(store, clause, b, &mut next)?;
        }
        bindings = next;
        for v in &names[idx] {
            vars.insert(v.as_str());
        }
        if bindings.is_empty() {
            break;
        }
    }

    let rows: BTreeSet<Vec<Term>> = bindings
        .into_iter()
        .map(|b| ast.select.iter().map(|v| b[v].clone()).collect())
        .collect();
    Ok(ResultTable {
        columns: ast.select.clone(),
        rows: rows.into_iter().collect(),
    })
}
