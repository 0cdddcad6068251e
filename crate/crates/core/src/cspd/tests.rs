use super::*;

/// `a^n b^n`, counting on the pushdown; needs a check-stack of at least `n` cells.
pub(crate) fn counter() -> CspdMachine {
    let mut b = MachineBuilder::new();
    b.input_alphabet(&["a", "b"])
        .pushdown_alphabet(&["A"])
        .check_alphabet(&["c"])
        .check_language("c*")
        .start("q0")
        .accepting("f");
    b.bottom("q0", "", "f", "#b").unwrap();
    b.bottom("q0", "a", "q0", "A #b").unwrap();
    b.pair("q0", "a", "c", "A", "q0", "A A").unwrap();
    b.pair("q0", "b", "c", "A", "q1", "").unwrap();
    b.pair("q1", "b", "c", "A", "q1", "").unwrap();
    b.bottom("q1", "", "f", "#b").unwrap();
    b.build().unwrap()
}

/// Accepts `a*` with stack-free pushes, so runs climb past the check-stack.
pub(crate) fn climber() -> CspdMachine {
    let mut b = MachineBuilder::new();
    b.input_alphabet(&["a"])
        .pushdown_alphabet(&["X"])
        .check_alphabet(&["c"])
        .check_language("c*")
        .start("p")
        .accepting("p");
    b.free("p", "a", "p", "X").unwrap();
    b.build().unwrap()
}

fn w(m: &CspdMachine, s: &str) -> Vec<u32> {
    m.word(s).unwrap()
}

fn generous() -> Caps {
    Caps {
        slack: Some(8),
        order: Order::BreadthFirst,
    }
}

#[test]
fn well_formed_machines_validate() {
    assert!(counter().validate().is_empty());
    assert!(climber().validate().is_empty());
}

#[test]
fn bottom_pushed_mid_word_is_reported() {
    let mut m = counter();
    m.transitions[1].push.insert(0, PushSym::Bottom);
    let report = m.validate();
    assert_eq!(report.len(), 1);
    assert_eq!(report[0].transition, Some(1));
}

#[test]
fn undeclared_state_is_reported() {
    let mut m = counter();
    m.transitions[0].to = 17;
    assert!(m.validate().iter().any(|v| v.message.contains("undeclared state")));
}

#[test]
fn bottom_step_pushes_word() {
    let m = counter();
    let c = Configuration::initial(m.start);
    let next = m.step(&w(&m, "cc"), &w(&m, "ab"), &c).unwrap();
    let heights: Vec<usize> = next.iter().map(|(_, c)| c.height()).collect();
    assert_eq!(heights, vec![0, 1]);
}

#[test]
fn push_two_then_pop_one() {
    let mut b = MachineBuilder::new();
    b.input_alphabet(&["x"])
        .pushdown_alphabet(&["a1", "a2"])
        .check_alphabet(&["d"])
        .check_language("d d")
        .start("s");
    b.bottom("s", "", "t", "a1 a2 #b").unwrap();
    b.pair("t", "", "d", "a1", "u", "").unwrap();
    let m = b.build().unwrap();
    let a1 = m.sym("a1").unwrap();
    let a2 = m.sym("a2").unwrap();
    let cs = w(&m, "d d");
    let run = m.replay(&cs, &[], &[0, 1]).unwrap();
    assert_eq!(run[1].pushdown, vec![a2, a1]);
    assert_eq!(run[2].pushdown, vec![a2]);
    assert_eq!(run[2].height(), 1);
}

#[test]
fn stuck_configuration_has_no_successors() {
    let m = counter();
    let c = Configuration {
        state: m.state("f").unwrap(),
        position: 0,
        pushdown: Vec::new(),
    };
    assert!(m.step(&[], &[], &c).unwrap().is_empty());
}

#[test]
fn counter_language() {
    let m = counter();
    for (input, want) in [("", true), ("ab", true), ("aabb", true), ("aab", false), ("ba", false)] {
        let r = m.accepts_any(&w(&m, input), 4, Caps::default()).unwrap();
        assert_eq!(r.accepted, want, "{input}");
    }
    let r = m.accepts_any(&w(&m, "aaabbb"), 2, Caps::default()).unwrap();
    assert!(!r.accepted);
    let r = m.accepts_with(&w(&m, "ccc"), &w(&m, "aaabbb"), Caps::default()).unwrap();
    assert!(r.accepted);
    assert!(matches!(
        m.accepts_with(&w(&m, "a"), &[], Caps::default()),
        Err(crate::Error::CheckStackRejected(_))
    ));
}

#[test]
fn breadth_and_depth_first_agree() {
    for m in [counter(), climber()] {
        for input in ["", "a", "ab", "aabb", "aaa", "abab"] {
            let Ok(word) = m.word(input) else { continue };
            if word.iter().any(|a| !m.input_alphabet.contains(a)) {
                continue;
            }
            let bfs = m.accepts_any(&word, 4, generous()).unwrap();
            let dfs = m
                .accepts_any(&word, 4, Caps { order: Order::DepthFirst, ..generous() })
                .unwrap();
            assert_eq!(bfs.accepted, dfs.accepted, "{input}");
        }
    }
}

#[test]
fn normalized_form_holds() {
    for m in [counter(), climber()] {
        let n = normalize(&m).unwrap();
        assert!(n.validate().is_empty());
        check_normalized(&n).unwrap();
    }
}

#[test]
fn long_push_becomes_a_chain() {
    let mut b = MachineBuilder::new();
    b.input_alphabet(&["x"])
        .pushdown_alphabet(&["g"])
        .check_alphabet(&["d"])
        .check_language("d d d")
        .start("s")
        .accepting("f");
    b.bottom("s", "x", "f", "g g g #b").unwrap();
    let m = b.build().unwrap();
    let n = normalize(&m).unwrap();
    let x = n.word("x").unwrap();
    let r = n.accepts_any(&x, 6, Caps::default()).unwrap();
    assert!(r.accepted);
    let trace = r.trace.unwrap();
    let pushes = trace
        .iter()
        .filter(|&&i| n.transitions[i].height_change() == 1)
        .count();
    assert_eq!(pushes, 3);
    assert!(!r.above_check_stack);
}

#[test]
fn normalization_preserves_small_languages() {
    for m in [counter(), climber()] {
        let n = normalize(&m).unwrap();
        let letters: Vec<u32> = m.input_alphabet.iter().copied().collect();
        let mut words = vec![Vec::new()];
        for len in 1..=4 {
            let mut next = Vec::new();
            for p in words.iter().filter(|p: &&Vec<u32>| p.len() == len - 1) {
                for &a in &letters {
                    let mut v = p.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            words.extend(next);
        }
        for word in &words {
            let a = m.accepts_any(word, 4, generous()).unwrap();
            let b = n.accepts_any(word, 4 + m.max_push().max(1), generous()).unwrap();
            assert_eq!(a.accepted, b.accepted, "{}", m.render(word));
            assert!(!b.above_check_stack, "{}", m.render(word));
        }
    }
}
