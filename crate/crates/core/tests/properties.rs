//! Randomized checks against the independent oracles in `support`.

mod support;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use etd_core::ingest::{parse_records, print_records};
use etd_core::io::{export_dot, export_quads, export_quads_with, import_quads};
use etd_core::query::{eval_query, parse_query};
use etd_core::query::{
    gender_tally, institution_cooperation, interdisciplinary_works, mobility_by_gender, supervision_gender_matrix,
    supervisor_gender_rate, GenderKey, TallyRole, WorkFilter,
};
use etd_core::reason::{ancestors_at, members_at, RoleFilter};
use num_rational::Ratio;
use etd_core::synthetic::{random_hierarchy, random_interval, random_point, random_records, random_store, WINDOW};
use etd_core::{EntityKind, Execution, Iri, Provenance, Store, TemporalTriple, Term, TimeInterval, Validity};
use support::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

type Key = (Iri, Iri, Term, Provenance);

fn key(t: &TemporalTriple) -> Key {
    (t.subject.clone(), t.property.clone(), t.object.clone(), t.provenance.clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_predicates_match_day_sets(seed: u64) {
        let mut r = rng(seed);
        for _ in 0..20 {
            let a = random_interval(&mut r, WINDOW);
            let b = random_interval(&mut r, WINDOW);
            let t = random_point(&mut r, WINDOW);
            prop_assert_eq!(a.contains(&t), oracle_contains(&a, &t), "{:?} contains {}", a, t);
            prop_assert_eq!(a.overlaps(&b), oracle_overlaps(&a, &b), "{:?} overlaps {:?}", a, b);
            let merged = a.merge_if_coalescable(&b).map(|m| interval_days(&m));
            prop_assert_eq!(merged, oracle_merge(&a, &b), "{:?} merge {:?}", a, b);
            prop_assert_eq!(a.covers(&b), interval_days(&b).is_subset(&interval_days(&a)));
        }
    }

    #[test]
    fn interval_text_round_trips(seed: u64) {
        let mut r = rng(seed);
        let iv = random_interval(&mut r, WINDOW);
        let back: TimeInterval = iv.to_string().parse().unwrap();
        prop_assert_eq!(interval_days(&back), interval_days(&iv));
    }

    #[test]
    fn coalescing_preserves_days_and_leaves_no_mergeable_pairs(seed: u64) {
        let mut r = rng(seed);
        let source = random_store(&mut r, 60);
        let triples = source.triples();
        let (kinds, mut rest): (Vec<_>, Vec<_>) = triples
            .into_iter()
            .partition(|t| source.vocab().prop_of(&t.property) == Some(etd_core::Prop::Kind));
        // extra fragments for statements that carry an interval
        let mut extra = Vec::new();
        for t in &rest {
            if matches!(t.validity, Validity::During(iv) if !iv.is_instant()) && r.random_bool(0.5) {
                let mut piece = t.clone();
                piece.validity = Validity::during(random_interval(&mut r, WINDOW));
                extra.push(piece);
            }
        }
        rest.extend(extra);
        rest.shuffle(&mut r);

        let mut store = Store::new(source.vocab_handle());
        let mut expected: BTreeMap<Key, Days> = BTreeMap::new();
        for t in kinds.into_iter().chain(rest) {
            if store.insert(t.clone()).is_ok() {
                let e = expected.entry(key(&t)).or_default();
                *e = e.union(&validity_days(&t.validity));
            }
        }
        let mut stored: BTreeMap<Key, Vec<Validity>> = BTreeMap::new();
        for t in store.triples() {
            stored.entry(key(&t)).or_default().push(t.validity);
        }
        prop_assert_eq!(stored.len(), expected.len());
        for (k, vs) in &stored {
            let days = vs.iter().fold(Days::default(), |acc, v| acc.union(&validity_days(v)));
            prop_assert_eq!(&days, &expected[k]);
            for (i, a) in vs.iter().enumerate() {
                for b in &vs[i + 1..] {
                    let (Validity::During(a), Validity::During(b)) = (a, b) else {
                        prop_assert!(false, "Always beside another validity for {:?}", k);
                        unreachable!()
                    };
                    prop_assert!(oracle_merge(a, b).is_none(), "{:?} and {:?} should have merged", a, b);
                }
            }
        }
    }

    #[test]
    fn snapshot_matches_oracle(seed: u64) {
        let mut r = rng(seed);
        let store = random_store(&mut r, 80);
        for _ in 0..5 {
            let t = random_point(&mut r, WINDOW);
            let want = oracle_snapshot(&store, &t);
            for exec in [Execution::Sequential, Execution::Parallel] {
                let mut got = store.snapshot_at_with(t, exec);
                got.sort();
                prop_assert_eq!(&got, &want);
            }
        }
    }

    #[test]
    fn ancestors_match_reachability(seed: u64) {
        let mut r = rng(seed);
        let n = r.random_range(2..25);
        let (store, nodes) = random_hierarchy(&mut r, n);
        for _ in 0..5 {
            let node = &nodes[r.random_range(0..nodes.len())];
            let t = random_point(&mut r, WINDOW);
            let got = ancestors_at(&store, node, t).unwrap();
            let want = oracle_ancestors(&store, node, &t);
            let got_set: BTreeSet<&Iri> = got.iter().collect();
            let want_set: BTreeSet<&Iri> = want.keys().collect();
            prop_assert_eq!(got_set, want_set);
            prop_assert_eq!(got.len(), want.len());
            let depths: Vec<usize> = got.iter().map(|a| want[a]).collect();
            prop_assert!(depths.windows(2).all(|w| w[0] <= w[1]), "not nearest first: {:?}", depths);
        }
    }

    #[test]
    fn queries_match_nested_scan(seed: u64) {
        let mut r = rng(seed);
        let size = r.random_range(10..=200);
        let store = random_store(&mut r, size);
        for _ in 0..3 {
            let ast = random_query(&mut r, &store);
            let text = ast.to_string();
            let reparsed = parse_query(&text).unwrap();
            prop_assert_eq!(&reparsed, &ast, "{}", text);
            let got = eval_query(&store, &reparsed, &base()).unwrap();
            prop_assert_eq!(got.rows, oracle_query(&store, &ast), "{}", text);
        }
    }

    #[test]
    fn quads_round_trip(seed: u64) {
        let mut r = rng(seed);
        let store = random_store(&mut r, 60);
        let doc = export_quads(&store, &base());
        prop_assert_eq!(&doc, &export_quads_with(&store, &base(), Execution::Sequential));
        let text = doc.to_string();
        let back = import_quads(&text).unwrap();
        let mut a = store.triples();
        let mut b = back.triples();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        prop_assert_eq!(export_quads(&back, &base()).to_string(), text);
    }

    #[test]
    fn records_round_trip_and_ingest(seed: u64) {
        let mut r = rng(seed);
        let records = random_records(&mut r, 20);
        let text = print_records(&records);
        prop_assert_eq!(parse_records(&text).unwrap(), records.clone());
        let store = ingest(&records);
        let doc = export_quads(&store, &base());
        let back = import_quads(&doc.to_string()).unwrap();
        prop_assert_eq!(back.len(), store.len());
    }

    #[test]
    fn analytics_agree_across_execution_modes(seed: u64) {
        let mut r = rng(seed);
        let store = ingest(&random_records(&mut r, 30));
        let iv = random_interval(&mut r, WINDOW);
        let (seq, par) = (Execution::Sequential, Execution::Parallel);

        let rates = supervisor_gender_rate(&store, &iv, WorkFilter::Any, seq);
        prop_assert_eq!(&rates, &supervisor_gender_rate(&store, &iv, WorkFilter::Any, par));
        if !rates.by_gender.is_empty() {
            let sum: Ratio<u64> = rates.by_gender.values().map(|e| e.share).sum();
            prop_assert_eq!(sum, Ratio::from_integer(1));
        }

        let matrix = supervision_gender_matrix(&store, &iv, WorkFilter::Any, seq);
        prop_assert_eq!(&matrix, &supervision_gender_matrix(&store, &iv, WorkFilter::Any, par));
        let cells: usize = matrix.values().flat_map(|row| row.values()).sum();
        prop_assert_eq!(cells, rates.total());
        for (gender, entry) in &rates.by_gender {
            let row: usize = matrix[&GenderKey::Specified(gender.clone())].values().sum();
            prop_assert_eq!(row, entry.supervisions);
        }

        prop_assert_eq!(
            interdisciplinary_works(&store, &iv, seq).unwrap(),
            interdisciplinary_works(&store, &iv, par).unwrap()
        );
        let mobility = mobility_by_gender(&store, &iv, seq).unwrap();
        prop_assert_eq!(&mobility, &mobility_by_gender(&store, &iv, par).unwrap());
        let moves: usize = mobility.by_gender.values().map(|s| s.moves).sum();
        prop_assert_eq!(moves, mobility.events.len());
        prop_assert!(mobility.events.iter().all(|e| iv.contains(&e.arrival)));

        let co = institution_cooperation(&store, &iv, seq).unwrap();
        prop_assert_eq!(&co, &institution_cooperation(&store, &iv, par).unwrap());
        prop_assert!(co.windows(2).all(|w| w[0].shared_works >= w[1].shared_works));
        prop_assert!(co.iter().all(|c| c.first < c.second));

        let t = random_point(&mut r, WINDOW);
        for body in store.entities_of_kind(EntityKind::CorporateBody) {
            let tally = gender_tally(&store, &body, TallyRole::Student, t, true).unwrap();
            prop_assert_eq!(tally.total(), tally.persons.len());
            let members = members_at(&store, &body, t, RoleFilter::Student, true, false).unwrap();
            prop_assert_eq!(&tally.persons, &members);
        }
    }

    #[test]
    fn dot_edges_join_declared_nodes(seed: u64) {
        let mut r = rng(seed);
        let store = random_store(&mut r, 60);
        let dot = export_dot(&store, None, 1, &ns(&store)).unwrap();
        check_dot(&dot)?;
    }
}

/// Structural check of the DOT subset the exporter writes.
fn check_dot(dot: &str) -> Result<(), TestCaseError> {
    let mut lines = dot.lines();
    prop_assert_eq!(lines.next(), Some("digraph etd {"));
    prop_assert_eq!(dot.lines().last(), Some("}"));
    let mut nodes = BTreeSet::new();
    for line in dot.lines().skip(1).filter(|l| *l != "}") {
        let body = line.strip_prefix("  ").and_then(|l| l.strip_suffix("];"));
        prop_assert!(body.is_some(), "malformed line {:?}", line);
        let body = body.unwrap();
        let (head, attrs) = body.split_once(" [").unwrap();
        prop_assert!(attrs.starts_with("label=\""));
        let ids = quoted(head);
        match ids.len() {
            1 => {
                nodes.insert(ids[0].clone());
            }
            2 => {
                prop_assert!(head.contains("\" -> \""));
                prop_assert!(nodes.contains(&ids[0]) && nodes.contains(&ids[1]), "edge before nodes: {}", line);
            }
            _ => prop_assert!(false, "bad statement {:?}", line),
        }
    }
    Ok(())
}

/// Quoted strings in `text`, unescaped.
fn quoted(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '"' {
            continue;
        }
        let mut s = String::new();
        while let Some(c) = chars.next() {
            match c {
                '\\' => s.extend(chars.next()),
                '"' => break,
                c => s.push(c),
            }
        }
        out.push(s);
    }
    out
}
