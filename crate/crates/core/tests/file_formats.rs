use et0l_core::corpus;
use et0l_core::cspd::{normalize, Caps};
use et0l_core::equivalence::{cspd_to_grammar, grammar_to_cspd};
use et0l_core::et0l::{reduce_extended, Bounds};
use et0l_core::io::*;
use et0l_core::Error;

#[test]
fn corpus_files_round_trip() {
    for (name, text) in corpus::GRAMMARS {
        let g = parse_grammar(text).unwrap();
        let out = serialize_grammar(&g).unwrap();
        let again = parse_grammar(&out).unwrap();
        assert_eq!(serialize_grammar(&again).unwrap(), out, "{name}");
        let b = Bounds::default();
        assert_eq!(g.enumerate_language(5, b), again.enumerate_language(5, b), "{name}");
    }
    for (name, text) in corpus::MACHINES {
        let m = parse_machine(text).unwrap();
        let out = serialize_machine(&m);
        let again = parse_machine(&out).unwrap();
        assert_eq!(serialize_machine(&again), out, "{name}");
        assert_eq!(again.transitions, m.transitions, "{name}");
    }
    for (name, text) in corpus::GROUPS {
        let g = parse_group(text).unwrap();
        let out = serialize_group(&g);
        let again = parse_group(&out).unwrap();
        assert_eq!(again, g, "{name}");
    }
}

#[test]
fn power_grammar_file() {
    let g = corpus::power_grammar().unwrap();
    let names: Vec<&str> = g.tables().iter().map(|t| t.name()).collect();
    assert_eq!(names, ["α", "β", "γ"]);
    assert_eq!(g.control_text(), "α*β*γ");
    // A and B have no rule in α, S none in β and γ
    let a = g.sym("A").unwrap();
    assert_eq!(g.tables()[0].replacements(a).unwrap(), &[vec![a]]);
}

#[test]
fn grammar_schema_errors() {
    let bad_start = r#"{"terminals":["a"],"nonterminals":["S"],"start":"T","tables":{"t":{"S":["a"]}},"control":"t"}"#;
    assert!(matches!(parse_grammar(bad_start), Err(Error::Schema { .. })));
    let not_nonterminal = r#"{"terminals":["a"],"nonterminals":["S"],"start":"a","tables":{"t":{"S":["a"]}},"control":"t"}"#;
    assert!(matches!(parse_grammar(not_nonterminal), Err(Error::Schema { .. })));
    let broken = "{\"terminals\": [\"a\"],\n \"nonterminals\": }";
    match parse_grammar(broken) {
        Err(Error::Schema { at, .. }) => assert!(at.contains("line 2"), "{at}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn machine_schema_errors() {
    let text = corpus::COUNTER.replace(r#""to": "q1""#, r#""to": "q9""#);
    match parse_machine(&text) {
        Err(Error::Schema { at, msg }) => {
            assert!(at.starts_with("machine.transitions["), "{at}");
            assert!(msg.contains("q9"));
        }
        other => panic!("{other:?}"),
    }
    let text = corpus::COUNTER.replace(r#""push": "A A""#, r#""push": "A Z""#);
    assert!(matches!(parse_machine(&text), Err(Error::Schema { .. })));
    let text = corpus::COUNTER.replace(r#""trigger": "bottom""#, r#""trigger": "nowhere""#);
    assert!(matches!(parse_machine(&text), Err(Error::Schema { .. })));
}

#[test]
fn group_files() {
    let g = corpus::grigorchuk().unwrap();
    assert_eq!(g.generators().len(), 4);
    assert_eq!(g.automaton().num_states(), 5);
    let t = g.automaton();
    for rel in ["aa", "bb", "cc", "dd", "bcd"] {
        assert!(t.is_trivial(&g.word(rel).unwrap()), "{rel}");
    }
    let dup = corpus::GRIGORCHUK.replace(r#""perm": ["2", "1"]"#, r#""perm": ["2", "2"]"#);
    assert_eq!(parse_group(&dup), Err(Error::Permutation("a".into())));
    let bad_inverse = corpus::GUPTA_SIDKI.replace(r#""a": "A", "A""#, r#""a": "a", "A""#);
    assert!(matches!(parse_group(&bad_inverse), Err(Error::Schema { .. })));
    let pairs = parse_group(corpus::GRIGORCHUK_PAIRS).unwrap();
    let map = pairs.map().unwrap();
    assert_eq!(map.apply(&["x".into(), "z".into()]).unwrap(), ["a", "b", "a", "d"]);
}

#[test]
fn generated_objects_round_trip() {
    let g = corpus::power_grammar().unwrap();
    let m = grammar_to_cspd(&g).unwrap();
    let again = parse_machine(&serialize_machine(&m)).unwrap();
    for w in ["ab", "abab", "aab"] {
        let input = m.word(w).unwrap();
        let r1 = m.accepts_any(&input, 4, Caps::default()).unwrap();
        let r2 = again.accepts_any(&again.word(w).unwrap(), 4, Caps::default()).unwrap();
        assert_eq!(r1.accepted, r2.accepted, "{w}");
    }

    let counter = corpus::counter().unwrap();
    let reduced = reduce_extended(&cspd_to_grammar(&normalize(&counter).unwrap()).unwrap()).unwrap();
    let text = serialize_grammar(&reduced).unwrap();
    let back = parse_grammar(&text).unwrap();
    assert_eq!(serialize_grammar(&back).unwrap(), text);
}
