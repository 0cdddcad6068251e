use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::cspd::Caps;
use crate::trees::tests::{grigorchuk, gupta_sidki};
use crate::trees::{GeneratorMap, Group};

fn pairs(v: &[(&str, &str)]) -> BTreeMap<String, String> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn grigorchuk_group() -> Group {
    let gens = pairs(&[("a", "a"), ("b", "b"), ("c", "c"), ("d", "d")]);
    let inv = gens.clone();
    Group::new(grigorchuk(), gens, inv, None).unwrap()
}

fn gupta_sidki_group() -> Group {
    let gens = pairs(&[("a", "a"), ("A", "A"), ("g", "g"), ("G", "G")]);
    let inv = pairs(&[("a", "A"), ("A", "a"), ("g", "G"), ("G", "g")]);
    Group::new(gupta_sidki(), gens, inv, None).unwrap()
}

fn accepts(cm: &CowordMachine, text: &str, max_check: usize) -> crate::cspd::RunResult {
    let m = &cm.machine;
    let input = m.word(text).unwrap();
    m.accepts_any(&input, max_check, Caps::default()).unwrap()
}

#[test]
fn machine_is_well_formed() {
    let cm = build_coword_machine(&grigorchuk_group()).unwrap();
    assert!(cm.machine.validate().is_empty(), "{:?}", cm.machine.validate());
    assert!(matches!(cm.generators["a"], GeneratorData::Finitary(ref f) if f.depth == 1));
    assert!(matches!(cm.generators["d"], GeneratorData::Directed(_)));
}

#[test]
fn accepts_nontrivial_and_rejects_trivial_words() {
    let cm = build_coword_machine(&grigorchuk_group()).unwrap();
    let ab = accepts(&cm, "a b", 3);
    assert!(ab.accepted);
    let v = cm.witness_vertex(ab.witness.as_ref().unwrap()).unwrap();
    assert_eq!(cm.machine.render(ab.witness.as_ref().unwrap()), "1𝔱");
    assert_eq!(v, vec![0]);
    assert!(!accepts(&cm, "a a", 4).accepted);
    assert!(!accepts(&cm, "", 4).accepted);
    assert!(!accepts(&cm, "b c d", 4).accepted);
}

#[test]
fn missing_inverse_is_refused() {
    let gens = pairs(&[("a", "a"), ("g", "g")]);
    let g = Group::new(gupta_sidki(), gens, pairs(&[("a", "a")]).into_iter().filter(|_| false).collect(), None).unwrap();
    assert!(matches!(build_coword_machine(&g), Err(crate::Error::Symmetry(_))));
}

#[test]
fn precomputed_tables_match_the_automaton() {
    let g = gupta_sidki_group();
    let t = g.automaton();
    let d = precompute_directed(t, "g", g.generator("g").unwrap()).unwrap();
    assert!(d.spine.iota.is_empty());
    assert_eq!(d.spine.pi, vec![2]);
    assert_eq!(d.pi_exits[0].len(), 2);
    for e in &d.pi_exits[0] {
        for (u, img) in &e.rest.table {
            assert_eq!(&t.apply(e.rest.state, u), img);
        }
    }
    let f = precompute_finitary(t, "a", g.generator("a").unwrap()).unwrap();
    assert_eq!(f.table.len(), 4);
    assert_eq!(f.apply(&[0, 1, 2]), vec![1, 1, 2]);
}

#[test]
fn generator_map_is_applied() {
    let base = grigorchuk_group();
    let map = GeneratorMap {
        images: [("x", vec!["a", "b"]), ("y", vec!["b", "a"]), ("z", vec![])]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.into_iter().map(String::from).collect()))
            .collect(),
    };
    let cm = apply_generator_map(&base, &map).unwrap();
    assert!(cm.machine.validate().is_empty());
    assert!(accepts(&cm, "x", 4).accepted);
    assert!(!accepts(&cm, "x y", 5).accepted);
    assert!(!accepts(&cm, "z", 3).accepted);
}

#[test]
fn oracle_agrees_on_short_gupta_sidki_words() {
    let g = gupta_sidki_group();
    let cm = build_coword_machine(&g).unwrap();
    let report = crosscheck_oracle(&g, &cm, CowordOptions { max_len: 2, ..Default::default() }).unwrap();
    assert!(report.agrees(), "{report:?}");
    assert_eq!(report.words_checked, 21);
}

/// Between input letters, the pushdown holds the image of the check-stack
/// vertex under the prefix read so far.
fn check_trace(g: &Group, cm: &CowordMachine, names: &[String]) {
    let m = &cm.machine;
    let input: Vec<_> = names.iter().map(|n| m.sym(n).unwrap()).collect();
    let states = g.resolve(names).unwrap();
    let t = g.automaton();
    let bound = t.tuple_space(&states).diameter + 2;
    let run = m.accepts_any(&input, bound, Caps::default()).unwrap();
    let Some(check) = run.witness else {
        assert!(t.is_trivial(&states));
        return;
    };
    let v = cm.witness_vertex(&check).unwrap();
    let trace = run.trace.unwrap();
    let configs = m.replay(&check, &input, &trace).unwrap();
    let mut seen = 0;
    for c in configs.iter().filter(|c| c.state == cm.comp) {
        let prefix = &states[..c.position];
        assert_eq!(cm.pushdown_vertex(c), Some(t.eval_vertex(prefix, &v)));
        seen += 1;
    }
    assert!(seen > names.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pushdown_tracks_the_action(w in proptest::collection::vec(0usize..4, 0..4)) {
        let g = grigorchuk_group();
        let cm = build_coword_machine(&g).unwrap();
        let names: Vec<String> = w.iter().map(|&i| ["a", "b", "c", "d"][i].to_string()).collect();
        check_trace(&g, &cm, &names);
    }

    #[test]
    fn pushdown_tracks_the_action_gupta_sidki(w in proptest::collection::vec(0usize..4, 0..3)) {
        let g = gupta_sidki_group();
        let cm = build_coword_machine(&g).unwrap();
        let names: Vec<String> = w.iter().map(|&i| ["a", "A", "g", "G"][i].to_string()).collect();
        check_trace(&g, &cm, &names);
    }
}
