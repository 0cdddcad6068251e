use std::time::Instant;

use super::*;
use crate::cspd::tests::{climber, counter};
use crate::cspd::{normalize, Caps};
use crate::et0l::power_grammar;
use crate::et0l::reduce_extended;

fn sym_word(m: &crate::cspd::CspdMachine, s: &str) -> Vec<u32> {
    m.word(s).unwrap()
}

#[test]
fn machine_from_grammar_accepts_its_words() {
    let g = power_grammar();
    let m = grammar_to_cspd(&g).unwrap();
    assert!(m.validate().is_empty(), "{:?}", m.validate());
    let run = m.accepts_any(&sym_word(&m, "aabb"), 8, Caps::default()).unwrap();
    assert!(run.accepted);
    assert_eq!(m.render(run.witness.as_ref().unwrap()), "αββγ𝔱");
    for w in ["", "ab", "abab", "aabb"] {
        assert!(m.accepts_any(&sym_word(&m, w), 8, Caps::default()).unwrap().accepted, "{w}");
    }
    for w in ["ba", "aab", "abb", "a"] {
        assert!(!m.accepts_any(&sym_word(&m, w), 8, Caps::default()).unwrap().accepted, "{w}");
    }
    let check = sym_word(&m, "γ𝔱");
    assert!(!m.accepts_with(&check, &sym_word(&m, "ab"), Caps::default()).unwrap().accepted);
}

#[test]
fn grammar_and_its_machine_agree() {
    let g = power_grammar();
    let m = grammar_to_cspd(&g).unwrap();
    let report = cross_check(&g, &m, 4, CrossCheckOptions::default()).unwrap();
    assert!(report.agrees(), "{:?}", report.disagreements);
    assert!(report.inconclusive.is_empty());
    assert_eq!(report.words_checked, 31);
    assert_eq!(report.accepted_by_both, 4);
}

#[test]
fn machine_to_grammar_round_trip() {
    let g = power_grammar();
    let m1 = grammar_to_cspd(&g).unwrap();
    let n = normalize(&m1).unwrap();
    let t = Instant::now();
    let e = cspd_to_grammar(&n).unwrap();
    let h = reduce_extended(&e).unwrap();
    eprintln!(
        "extended: {} nonterminals; reduced: {} symbols, {} tables ({:?})",
        e.nonterminals().len(),
        h.symbols().len(),
        h.tables().len(),
        t.elapsed()
    );
    let report = cross_check(&h, &m1, 4, long_control()).unwrap();
    eprintln!("{report:?} ({:?})", t.elapsed());
    assert!(report.agrees(), "{:?}", report.disagreements);
    assert!(report.inconclusive.is_empty());
    assert_eq!(report.accepted_by_both, 4);
}

fn long_control() -> CrossCheckOptions {
    CrossCheckOptions {
        bounds: crate::et0l::Bounds {
            max_control: 64,
            max_form: 64,
        },
        ..CrossCheckOptions::default()
    }
}

#[test]
fn toy_machines_survive_the_round_trip() {
    for m in [counter(), climber()] {
        let e = cspd_to_grammar(&normalize(&m).unwrap()).unwrap();
        let h = reduce_extended(&e).unwrap();
        let report = cross_check(&h, &m, 4, long_control()).unwrap();
        assert!(report.agrees(), "{:?}", report.disagreements);
        assert!(report.inconclusive.is_empty());
    }
}

#[test]
fn unnormalized_machine_is_refused() {
    assert!(matches!(
        cspd_to_grammar(&climber()),
        Err(crate::Error::NotNormalized(_))
    ));
}


