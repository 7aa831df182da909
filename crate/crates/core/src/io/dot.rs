//! Graphviz export of the network.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Iri, TemporalTriple, Term, Validity};
use crate::names::Namespaces;
use crate::store::Store;
use crate::vocab::{EntityKind, Prop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DotError {
    #[error("{0} does not occur in the store")]
    NotFound(Iri),
    #[error("radius must be at least 1")]
    InvalidRadius,
}

fn shape(kind: Option<EntityKind>) -> &'static str {
    match kind {
        Some(EntityKind::Person) => "ellipse",
        Some(EntityKind::CorporateBody) => "box",
        Some(EntityKind::Work) => "note",
        Some(EntityKind::Gender) => "diamond",
        Some(EntityKind::Place) => "house",
        Some(EntityKind::ExternalResource) | None => "plaintext",
    }
}

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Entity-to-entity statements drawn as edges; class assignments are not.
fn is_edge(store: &Store, t: &TemporalTriple) -> bool {
    if !matches!(t.object, Term::Iri(_)) {
        return false;
    }
    !matches!(
        store.vocab().prop_of(&t.property),
        Some(Prop::Kind | Prop::BodyKind | Prop::WorkKind)
    )
}

fn edge_label(store: &Store, ns: &Namespaces, t: &TemporalTriple) -> String {
    let name = match store.vocab().get(&t.property) {
        Some(def) => def.prop.local_name().to_string(),
        None => ns.compact(&t.property),
    };
    match t.validity {
        Validity::Always => name,
        Validity::During(iv) => format!("{name} [{iv}]"),
    }
}

/// DOT digraph of the whole store, or of the neighbourhood within
/// `radius` hops of `focus` (edges followed in both directions).
pub fn export_dot(store: &Store, focus: Option<&Iri>, radius: usize, ns: &Namespaces) -> Result<String, DotError> {
    let triples = store.triples();
    let edges: Vec<&TemporalTriple> = triples.iter().filter(|t| is_edge(store, t)).collect();

    let mut nodes: BTreeSet<Iri> = BTreeSet::new();
    for kind in EntityKind::ALL {
        nodes.extend(store.entities_of_kind(kind));
    }
    for t in &edges {
        nodes.insert(t.subject.clone());
        nodes.extend(t.object.as_iri().cloned());
    }

    if let Some(focus) = focus {
        if radius == 0 {
            return Err(DotError::InvalidRadius);
        }
        if !store.mentions(focus) {
            return Err(DotError::NotFound(focus.clone()));
        }
        let mut adjacent: HashMap<&Iri, Vec<&Iri>> = HashMap::new();
        for t in &edges {
            let o = t.object.as_iri().expect("edges have IRI objects");
            adjacent.entry(&t.subject).or_default().push(o);
            adjacent.entry(o).or_default().push(&t.subject);
        }
        let mut depth: HashMap<&Iri, usize> = HashMap::from([(focus, 0)]);
        let mut queue = VecDeque::from([focus]);
        while let Some(n) = queue.pop_front() {
            let d = depth[n];
            if d == radius {
                continue;
            }
            for m in adjacent.get(n).into_iter().flatten() {
                if !depth.contains_key(m) {
                    depth.insert(m, d + 1);
                    queue.push_back(m);
                }
            }
        }
        nodes = depth.keys().map(|n| (*n).clone()).collect();
    }

    // short ids: the local id, or the compact form when local ids collide
    let local = |iri: &Iri| -> String {
        match ns.local_id(iri) {
            Some((_, id)) => id,
            None => iri.as_str().to_string(),
        }
    };
    let mut uses: BTreeMap<String, usize> = BTreeMap::new();
    for n in &nodes {
        *uses.entry(local(n)).or_insert(0) += 1;
    }
    let ids: BTreeMap<&Iri, String> = nodes
        .iter()
        .map(|n| {
            let short = local(n);
            let id = if uses[&short] > 1 { ns.compact(n) } else { short };
            (n, id)
        })
        .collect();

    let mut out = String::from("digraph etd {\n");
    let mut node_lines: Vec<String> = ids
        .iter()
        .map(|(iri, id)| {
            let label = store
                .current_label(iri)
                .and_then(|t| t.object.as_literal().map(|l| l.lexical().to_string()))
                .unwrap_or_else(|| id.clone());
            format!(
                "  {} [label={}, shape={}];",
                quote(id),
                quote(&label),
                shape(store.kind_of(iri))
            )
        })
        .collect();
    node_lines.sort();
    for line in node_lines {
        out.push_str(&line);
        out.push('\n');
    }
    for t in edges {
        let o = t.object.as_iri().expect("edges have IRI objects");
        let (Some(s_id), Some(o_id)) = (ids.get(&t.subject), ids.get(o)) else { continue };
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(s_id),
            quote(o_id),
            quote(&edge_label(store, ns, t))
        );
    }
    out.push_str("}\n");
    Ok(out)
}
