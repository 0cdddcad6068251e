use std::collections::HashMap;

use super::machine::{CspdMachine, PushSym, State, Transition, Trigger};
use crate::error::{Error, Result};
use crate::regular::Regex;
use crate::symbol::Sym;

/// Names of the states added by [`normalize`].
pub const FINISH: &str = "q_finish";
pub const ACCEPT: &str = "q_accept";

struct Normalizer<'m> {
    m: &'m CspdMachine,
    out: CspdMachine,
    top_marker: Sym,
    filler: Sym,
    /// States keyed by a description of their role.
    made: HashMap<String, State>,
}

impl Normalizer<'_> {
    fn new_state(&mut self, key: String) -> (State, bool) {
        if let Some(&q) = self.made.get(&key) {
            return (q, false);
        }
        let mut name = key.clone();
        while self.out.states.contains(&name) {
            name.push('\'');
        }
        self.out.states.push(name);
        let q = self.out.states.len() - 1;
        self.made.insert(key, q);
        (q, true)
    }

    fn add(&mut self, from: State, reads: &[Sym], trigger: Trigger, to: State, push: Vec<PushSym>) {
        self.out.transitions.push(Transition {
            from,
            reads: reads.to_vec(),
            trigger,
            to,
            push,
        });
    }

    /// Pairs whose check letter is an original one, plus the bottom.
    fn below_top_triggers(&self) -> Vec<Trigger> {
        let mut v = vec![Trigger::Bottom];
        for &c in &self.m.check_alphabet {
            for &x in &self.out.pushdown_alphabet {
                v.push(Trigger::Pair { check: c, top: x });
            }
        }
        v
    }

    fn top_triggers(&self) -> Vec<Trigger> {
        self.out
            .pushdown_alphabet
            .iter()
            .map(|&x| Trigger::Pair {
                check: self.top_marker,
                top: x,
            })
            .collect()
    }

    fn all_pairs(&self) -> Vec<Trigger> {
        let mut v = self.below_top_triggers();
        v.remove(0);
        v.extend(self.top_triggers());
        v
    }

    /// Pushes `x` over whatever the trigger saw.
    fn over(trigger: Trigger, x: Sym) -> Vec<PushSym> {
        match trigger {
            Trigger::Pair { top, .. } => vec![PushSym::Sym(x), PushSym::Sym(top)],
            _ => vec![PushSym::Sym(x), PushSym::Bottom],
        }
    }

    /// A state that pushes `letters` (last letter first) and then behaves as
    /// `s`. Landing on a top marker means the original run has left the
    /// check-stack, so the remaining pushes are abandoned for tail mode.
    fn chain(&mut self, s: State, letters: &[Sym]) -> State {
        if letters.is_empty() {
            return s;
        }
        let key = format!(
            "push[{}|{}]",
            self.m.states[s],
            letters.iter().map(|&x| self.m.symbols.name(x)).collect::<Vec<_>>().join(",")
        );
        let (q, fresh) = self.new_state(key);
        if fresh {
            let (&last, rest) = letters.split_last().expect("non-empty");
            let next = self.chain(s, rest);
            for t in self.below_top_triggers() {
                self.add(q, &[], t, next, Self::over(t, last));
            }
            let up = self.resume(s);
            for t in self.top_triggers() {
                self.add(q, &[], t, up, Vec::new());
            }
        }
        q
    }

    /// After a pop at the top marker: push a filler back and continue as `s`.
    fn resume(&mut self, s: State) -> State {
        let (q, fresh) = self.new_state(format!("resume[{}]", self.m.states[s]));
        if fresh {
            let mut triggers = self.all_pairs();
            triggers.push(Trigger::Bottom);
            for t in triggers {
                self.add(q, &[], t, s, Self::over(t, self.filler));
            }
        }
        q
    }

    /// After pushing a filler: pop it and continue as `s`.
    fn unwind(&mut self, s: State) -> State {
        let (q, fresh) = self.new_state(format!("unwind[{}]", self.m.states[s]));
        if fresh {
            for t in self.all_pairs() {
                if let Trigger::Pair { top, .. } = t {
                    if top == self.filler {
                        self.add(q, &[], t, s, Vec::new());
                    }
                }
            }
        }
        q
    }

    /// Starts a transition seen through `trigger` that pops nothing and then
    /// pushes `letters`.
    fn start_push(&mut self, p: State, reads: &[Sym], trigger: Trigger, s: State, letters: &[Sym]) {
        match letters.split_last() {
            None => {
                let q = self.unwind(s);
                self.add(p, reads, trigger, q, Self::over(trigger, self.filler));
            }
            Some((&last, rest)) => {
                let q = self.chain(s, rest);
                self.add(p, reads, trigger, q, Self::over(trigger, last));
            }
        }
    }
}

/// Rewrites a machine into the restricted form: check-stacks end in `N`
/// copies of a fresh top marker (`N` the longest push, at least one), a
/// single accepting state entered only with an empty pushdown and without
/// changing it, and every other transition pushing or popping exactly one
/// letter. No transition consults neither stack.
///
/// Each original transition becomes a pop (if it had a pair trigger)
/// followed by a chain of single pushes; a move that leaves the height
/// unchanged pushes and pops a fresh filler letter. Once the original run
/// climbs above its check-stack only stack-free transitions can follow;
/// these are simulated on the first marker cell by popping and pushing a
/// filler.
pub fn normalize(m: &CspdMachine) -> Result<CspdMachine> {
    if let Some(v) = m.validate().first() {
        return Err(Error::Configuration(v.to_string()));
    }
    let mut out = m.clone();
    let top_marker = out.symbols.fresh("#t");
    let filler = out.symbols.fresh("#z");
    out.check_alphabet.insert(top_marker);
    out.pushdown_alphabet.insert(filler);
    let n = m.max_push().max(1);
    out.check_language = Regex::concat(vec![
        m.check_language.clone(),
        Regex::word(&vec![top_marker; n]),
    ]);
    out.transitions.clear();
    out.accepting.clear();
    let mut nz = Normalizer {
        m,
        out,
        top_marker,
        filler,
        made: HashMap::new(),
    };
    let (finish, _) = nz.new_state(FINISH.to_string());
    let (accept, _) = nz.new_state(ACCEPT.to_string());

    for t in &m.transitions {
        let letters: Vec<Sym> = t.pushed().collect();
        match t.trigger {
            Trigger::Pair { .. } => {
                let q = nz.chain(t.to, &letters);
                nz.add(t.from, &t.reads, t.trigger, q, Vec::new());
            }
            Trigger::Bottom => nz.start_push(t.from, &t.reads, Trigger::Bottom, t.to, &letters),
            Trigger::Free => {
                for trig in nz.below_top_triggers() {
                    nz.start_push(t.from, &t.reads, trig, t.to, &letters);
                }
                let up = nz.resume(t.to);
                for trig in nz.top_triggers() {
                    nz.add(t.from, &t.reads, trig, up, Vec::new());
                }
            }
        }
    }
    for &f in m.accepting.iter().chain([&finish]) {
        for t in nz.all_pairs() {
            nz.add(f, &[], t, finish, Vec::new());
        }
        nz.add(f, &[], Trigger::Bottom, accept, vec![PushSym::Bottom]);
    }
    let mut out = nz.out;
    out.accepting.insert(accept);
    out.transitions.sort();
    out.transitions.dedup();
    Ok(out)
}

/// Checks the syntactic part of the restricted form and returns the
/// accepting state.
pub fn check_normalized(m: &CspdMachine) -> Result<State> {
    let fail = |msg: String| Err(Error::NotNormalized(msg));
    if let Some(v) = m.validate().first() {
        return Err(Error::Configuration(v.to_string()));
    }
    let accept = match m.accepting.iter().collect::<Vec<_>>()[..] {
        [&q] => q,
        _ => return fail("there must be exactly one accepting state".into()),
    };
    for (i, t) in m.transitions.iter().enumerate() {
        let pushed: Vec<Sym> = t.pushed().collect();
        let ok = match (t.trigger, t.to == accept) {
            (Trigger::Free, _) => false,
            (Trigger::Bottom, true) => t.push == [PushSym::Bottom],
            (Trigger::Bottom, false) => pushed.len() == 1 && t.push.len() == 2,
            (Trigger::Pair { .. }, true) => false,
            (Trigger::Pair { top, .. }, false) => {
                pushed.is_empty() || (pushed.len() == 2 && pushed[1] == top)
            }
        };
        if !ok {
            return fail(format!("transition {i} is not a single push, single pop or accepting move"));
        }
    }
    Ok(accept)
}
