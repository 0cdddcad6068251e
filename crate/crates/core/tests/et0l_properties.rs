use std::collections::BTreeSet;

use et0l_core::et0l::{Bounds, Et0lGrammar, Membership, DEAD};
use et0l_core::symbol::Sym;
use proptest::prelude::*;

const SYMBOLS: [&str; 5] = ["a", "b", "S", "A", "B"];

/// Rule bodies indexed as [table][nonterminal] -> bodies, each body a list
/// of indices into `SYMBOLS`.
type Spec = Vec<Vec<Vec<Vec<usize>>>>;

fn spec() -> impl Strategy<Value = Spec> {
    let body = prop::collection::vec(0usize..5, 0..=2);
    let bodies = prop::collection::vec(body, 1..=2);
    let table = prop::collection::vec(bodies, 3);
    prop::collection::vec(table, 1..=3)
}

fn build(spec: &Spec) -> Et0lGrammar {
    let names: Vec<String> = (0..spec.len()).map(|i| format!("t{i}")).collect();
    let bodies: Vec<Vec<(String, Vec<String>)>> = spec
        .iter()
        .map(|table| {
            table
                .iter()
                .enumerate()
                .map(|(x, bs)| {
                    (
                        SYMBOLS[2 + x].to_string(),
                        bs.iter()
                            .map(|b| b.iter().map(|&i| SYMBOLS[i]).collect::<Vec<_>>().join(" "))
                            .collect(),
                    )
                })
                .collect()
        })
        .collect();
    let rules: Vec<Vec<(&str, Vec<&str>)>> = bodies
        .iter()
        .map(|t| {
            t.iter()
                .map(|(h, bs)| (h.as_str(), bs.iter().map(String::as_str).collect()))
                .collect()
        })
        .collect();
    let rule_slices: Vec<Vec<(&str, &[&str])>> = rules
        .iter()
        .map(|t| t.iter().map(|(h, bs)| (*h, bs.as_slice())).collect())
        .collect();
    let tables: Vec<(&str, &[(&str, &[&str])])> = names
        .iter()
        .zip(&rule_slices)
        .map(|(n, r)| (n.as_str(), r.as_slice()))
        .collect();
    let control = format!("({})*", names.iter().map(|n| format!("'{n}'")).collect::<Vec<_>>().join("|"));
    Et0lGrammar::from_names(&["a", "b"], &["S", "A", "B"], "S", &tables, &control).unwrap()
}

/// Replaces every non-terminal independently, by plain recursion on the word.
fn naive_apply(spec: &Spec, t: usize, w: &[usize]) -> BTreeSet<Vec<usize>> {
    let Some((&x, rest)) = w.split_first() else {
        return BTreeSet::from([Vec::new()]);
    };
    let heads: Vec<Vec<usize>> = if x < 2 { vec![vec![x]] } else { spec[t][x - 2].clone() };
    let tails = naive_apply(spec, t, rest);
    let mut out = BTreeSet::new();
    for h in &heads {
        for tail in &tails {
            let mut v = h.clone();
            v.extend(tail);
            out.insert(v);
        }
    }
    out
}

fn to_syms(g: &Et0lGrammar, w: &[usize]) -> Vec<Sym> {
    w.iter().map(|&i| g.sym(SYMBOLS[i]).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derive_all_matches_naive_expansion(spec in spec(), control in prop::collection::vec(0usize..3, 0..=4)) {
        let g = build(&spec);
        let control: Vec<usize> = control.into_iter().map(|c| c % spec.len()).collect();
        let mut forms = BTreeSet::from([vec![2usize]]);
        for &t in &control {
            forms = forms
                .iter()
                .flat_map(|f| naive_apply(&spec, t, f))
                .filter(|f| f.len() <= 64)
                .collect();
        }
        let want: BTreeSet<Vec<Sym>> = forms.iter().map(|f| to_syms(&g, f)).collect();
        let names: Vec<String> = control.iter().map(|t| format!("t{t}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let got = g.derive_all(&refs, 64).unwrap();
        prop_assert_eq!(got.forms, want);
    }

    #[test]
    fn application_is_context_free(
        spec in spec(),
        u in prop::collection::vec(0usize..5, 0..=3),
        v in prop::collection::vec(0usize..5, 0..=3),
    ) {
        let g = build(&spec);
        let (u, v) = (to_syms(&g, &u), to_syms(&g, &v));
        let uv: Vec<Sym> = u.iter().chain(&v).copied().collect();
        let whole = g.apply_table("t0", &uv).unwrap();
        let left = g.apply_table("t0", &u).unwrap();
        let right = g.apply_table("t0", &v).unwrap();
        let glued: BTreeSet<Vec<Sym>> = left
            .iter()
            .flat_map(|l| right.iter().map(move |r| l.iter().chain(r).copied().collect()))
            .collect();
        prop_assert_eq!(whole, glued);
    }

    #[test]
    fn found_words_are_derivable(spec in spec()) {
        let g = build(&spec);
        let bounds = Bounds { max_control: 4, max_form: 16 };
        let sample = g.enumerate_language(3, bounds);
        for w in &sample.words {
            let verdict = g.contains(w, bounds).unwrap();
            let Membership::Yes { certificate } = verdict else {
                return Err(TestCaseError::fail("enumerated word not contained"));
            };
            let refs: Vec<&str> = certificate.iter().map(String::as_str).collect();
            prop_assert!(g.derive_all(&refs, 16).unwrap().forms.contains(w));
        }
    }
}

#[test]
fn dead_symbol_blocks_every_control() {
    let g = Et0lGrammar::from_names(
        &["a"],
        &["S", "A", DEAD],
        "S",
        &[
            ("x", &[("S", &["a", "A", ""]), ("A", &["a a", ""])]),
            ("y", &[("S", &["S S"]), ("A", &["S"])]),
        ],
        "(x|y)*",
    )
    .unwrap();
    let d = g.sym(DEAD).unwrap();
    let bounds = Bounds { max_control: 6, max_form: 64 };
    for from in [vec![d], vec![g.sym("S").unwrap(), d], vec![d, g.sym("A").unwrap()]] {
        for target in ["", "a", "aa", "aaa"] {
            let w = g.word(target).unwrap();
            assert_eq!(
                g.contains_from(&from, &w, bounds).unwrap(),
                Membership::NoWithinBounds
            );
        }
    }
}
