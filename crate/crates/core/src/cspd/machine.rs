use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::regular::{Nfa, Regex};
use crate::symbol::{Sym, SymbolTable};

/// Index of a machine state.
pub type State = usize;

/// File spelling of the bottom-of-stack symbol.
pub const BOTTOM: &str = "#b";

/// What a transition needs to see on the two stacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trigger {
    /// Both read-heads on the bottom symbol (pushdown empty).
    Bottom,
    /// `check` under the check-stack read-head and `top` on the pushdown;
    /// `top` is popped.
    Pair { check: Sym, top: Sym },
    /// Applicable in every stack configuration; pops nothing.
    Free,
}

/// A letter of a push word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PushSym {
    Bottom,
    Sym(Sym),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: State,
    /// Input consumed atomically (possibly empty).
    pub reads: Vec<Sym>,
    pub trigger: Trigger,
    pub to: State,
    /// Pushed rightmost letter first, so `push[0]` ends on top.
    pub push: Vec<PushSym>,
}

impl Transition {
    /// Pushdown letters pushed, excluding a trailing bottom symbol.
    pub fn pushed(&self) -> impl Iterator<Item = Sym> + '_ {
        self.push.iter().filter_map(|p| match p {
            PushSym::Sym(s) => Some(*s),
            PushSym::Bottom => None,
        })
    }

    /// Change of pushdown height when the transition fires.
    pub fn height_change(&self) -> isize {
        let pushed = self.pushed().count() as isize;
        match self.trigger {
            Trigger::Pair { .. } => pushed - 1,
            _ => pushed,
        }
    }
}

/// A check-stack pushdown machine.
///
/// Input, pushdown and check-stack letters share one symbol table, so a
/// name used in several alphabets denotes the same [`Sym`].
#[derive(Debug, Clone)]
pub struct CspdMachine {
    pub states: Vec<String>,
    pub symbols: SymbolTable,
    pub input_alphabet: BTreeSet<Sym>,
    pub pushdown_alphabet: BTreeSet<Sym>,
    pub check_alphabet: BTreeSet<Sym>,
    pub check_language: Regex<Sym>,
    pub transitions: Vec<Transition>,
    pub start: State,
    pub accepting: BTreeSet<State>,
}

/// A snapshot of a run on a fixed check-stack.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: State,
    /// Number of input letters consumed.
    pub position: usize,
    /// Pushdown letters from the bottom up; the bottom symbol is implicit.
    pub pushdown: Vec<Sym>,
}

impl Configuration {
    pub fn initial(start: State) -> Self {
        Configuration {
            state: start,
            position: 0,
            pushdown: Vec::new(),
        }
    }

    pub fn height(&self) -> usize {
        self.pushdown.len()
    }
}

/// Limits for simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Pushdown height allowed above the check-stack length; `None` uses
    /// one more than the longest push word.
    pub slack: Option<usize>,
    pub order: Order,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            slack: None,
            order: Order::BreadthFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    BreadthFirst,
    DepthFirst,
}

/// Verdict of a simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub accepted: bool,
    /// Check-stack of an accepting run (without the bottom cell).
    pub witness: Option<Vec<Sym>>,
    /// Transition indices of an accepting run.
    pub trace: Option<Vec<usize>>,
    /// Some configuration exceeded the height cap and was dropped.
    pub capped: bool,
    /// Some reachable configuration had a pushdown higher than the
    /// check-stack.
    pub above_check_stack: bool,
    /// Configurations explored over all check-stacks tried.
    pub explored: usize,
}

impl RunResult {
    fn rejected() -> Self {
        RunResult {
            accepted: false,
            witness: None,
            trace: None,
            capped: false,
            above_check_stack: false,
            explored: 0,
        }
    }
}

/// One structural problem found by [`CspdMachine::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Transition index, when the problem is in a transition.
    pub transition: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.transition {
            Some(i) => write!(f, "transition {i}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl CspdMachine {
    pub fn state_name(&self, q: State) -> &str {
        &self.states[q]
    }

    pub fn state(&self, name: &str) -> Result<State> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Configuration(format!("unknown state `{name}`")))
    }

    pub fn sym(&self, name: &str) -> Result<Sym> {
        self.symbols
            .get(name)
            .ok_or_else(|| Error::Alphabet(name.to_string()))
    }

    /// Parses a word over the machine's symbols (see [`crate::symbol::split_word`]).
    pub fn word(&self, text: &str) -> Result<Vec<Sym>> {
        crate::symbol::split_word(text, |n| self.symbols.get(n).is_some())
            .iter()
            .map(|n| self.sym(n))
            .collect()
    }

    pub fn render(&self, w: &[Sym]) -> String {
        self.symbols.render_compact(w)
    }

    /// Longest push word, counting pushdown letters only.
    pub fn max_push(&self) -> usize {
        self.transitions
            .iter()
            .map(|t| t.pushed().count())
            .max()
            .unwrap_or(0)
    }

    pub fn check_nfa(&self) -> Result<Nfa<Sym>> {
        Nfa::compile(&self.check_language, &self.check_alphabet)
    }

    /// Every violation of the structural invariants; empty iff well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut report = |transition: Option<usize>, message: String| {
            out.push(Violation {
                transition,
                message,
            })
        };
        let n = self.states.len();
        if self.start >= n {
            report(None, format!("start state #{} is undeclared", self.start));
        }
        for &q in &self.accepting {
            if q >= n {
                report(None, format!("accepting state #{q} is undeclared"));
            }
        }
        let mut seen = HashSet::new();
        for s in &self.states {
            if !seen.insert(s) {
                report(None, format!("state `{s}` declared twice"));
            }
        }
        for (alphabet, what) in [
            (&self.input_alphabet, "input"),
            (&self.pushdown_alphabet, "pushdown"),
            (&self.check_alphabet, "check-stack"),
        ] {
            for &s in alphabet {
                if s as usize >= self.symbols.len() {
                    report(None, format!("{what} symbol #{s} has no name"));
                } else if self.symbols.name(s) == BOTTOM {
                    report(None, format!("the bottom symbol is in the {what} alphabet"));
                }
            }
        }
        if let Err(e) = self.check_language.check(&self.check_alphabet) {
            report(None, format!("check-stack language: {e}"));
        }
        let name = |s: Sym| {
            if (s as usize) < self.symbols.len() {
                self.symbols.name(s).to_string()
            } else {
                format!("#{s}")
            }
        };
        for (i, t) in self.transitions.iter().enumerate() {
            let i = Some(i);
            for q in [t.from, t.to] {
                if q >= n {
                    report(i, format!("references undeclared state #{q}"));
                }
            }
            for &a in &t.reads {
                if !self.input_alphabet.contains(&a) {
                    report(i, format!("reads `{}` outside the input alphabet", name(a)));
                }
            }
            if let Trigger::Pair { check, top } = t.trigger {
                if !self.check_alphabet.contains(&check) {
                    report(i, format!("trigger letter `{}` is not a check-stack letter", name(check)));
                }
                if !self.pushdown_alphabet.contains(&top) {
                    report(i, format!("trigger letter `{}` is not a pushdown letter", name(top)));
                }
            }
            for p in &t.push {
                if let PushSym::Sym(s) = p {
                    if !self.pushdown_alphabet.contains(s) {
                        report(i, format!("pushes `{}` outside the pushdown alphabet", name(*s)));
                    }
                }
            }
            let bottoms: Vec<usize> = t
                .push
                .iter()
                .enumerate()
                .filter(|(_, p)| **p == PushSym::Bottom)
                .map(|(k, _)| k)
                .collect();
            match t.trigger {
                Trigger::Bottom => {
                    if bottoms != [t.push.len().saturating_sub(1)] || t.push.is_empty() {
                        report(i, "a bottom transition must push a word ending in the bottom symbol, and only there".into());
                    }
                }
                _ => {
                    if !bottoms.is_empty() {
                        report(i, "pushes the bottom symbol without seeing it".into());
                    }
                }
            }
        }
        out
    }

    fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::Configuration(v.to_string())),
        }
    }

    /// Indices of transitions applicable in `c`, in declaration order.
    fn applicable<'a>(
        &'a self,
        by_state: &'a [Vec<usize>],
        check: &'a [Sym],
        input: &'a [Sym],
        c: &'a Configuration,
    ) -> impl Iterator<Item = usize> + 'a {
        let h = c.height();
        by_state[c.state].iter().copied().filter(move |&i| {
            let t = &self.transitions[i];
            let fits = match t.trigger {
                Trigger::Bottom => h == 0,
                Trigger::Pair { check: d, top: g } => {
                    h >= 1 && h <= check.len() && check[h - 1] == d && c.pushdown[h - 1] == g
                }
                Trigger::Free => true,
            };
            fits && input[c.position..].starts_with(&t.reads)
        })
    }

    fn fire(&self, t: &Transition, c: &Configuration) -> Configuration {
        let mut pushdown = c.pushdown.clone();
        if let Trigger::Pair { .. } = t.trigger {
            pushdown.pop();
        }
        pushdown.extend(t.pushed().collect::<Vec<_>>().into_iter().rev());
        Configuration {
            state: t.to,
            position: c.position + t.reads.len(),
            pushdown,
        }
    }

    fn by_state(&self) -> Vec<Vec<usize>> {
        let mut v = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            v[t.from].push(i);
        }
        v
    }

    fn check_config(&self, check: &[Sym], input: &[Sym], c: &Configuration) -> Result<()> {
        if c.state >= self.states.len() {
            return Err(Error::Configuration(format!("state #{} is undeclared", c.state)));
        }
        if c.position > input.len() {
            return Err(Error::Configuration("input position past the end".into()));
        }
        if let Some(s) = c.pushdown.iter().find(|s| !self.pushdown_alphabet.contains(s)) {
            return Err(Error::Configuration(format!("pushdown letter #{s} is undeclared")));
        }
        if let Some(s) = check.iter().find(|s| !self.check_alphabet.contains(s)) {
            return Err(Error::Configuration(format!("check-stack letter #{s} is undeclared")));
        }
        Ok(())
    }

    /// Every configuration reachable from `c` by one transition, paired
    /// with the transition index.
    pub fn step(
        &self,
        check: &[Sym],
        input: &[Sym],
        c: &Configuration,
    ) -> Result<Vec<(usize, Configuration)>> {
        self.check_config(check, input, c)?;
        let by_state = self.by_state();
        Ok(self
            .applicable(&by_state, check, input, c)
            .map(|i| (i, self.fire(&self.transitions[i], c)))
            .collect())
    }

    /// Replays a transition sequence, returning every configuration visited
    /// (starting with the initial one).
    pub fn replay(&self, check: &[Sym], input: &[Sym], trace: &[usize]) -> Result<Vec<Configuration>> {
        let by_state = self.by_state();
        let mut c = Configuration::initial(self.start);
        let mut out = vec![c.clone()];
        for &i in trace {
            if !self.applicable(&by_state, check, input, &c).any(|j| j == i) {
                return Err(Error::Configuration(format!(
                    "transition {i} is not applicable at step {}",
                    out.len() - 1
                )));
            }
            c = self.fire(&self.transitions[i], &c);
            out.push(c.clone());
        }
        Ok(out)
    }

    fn height_cap(&self, check_len: usize, caps: Caps) -> usize {
        check_len + caps.slack.unwrap_or(1 + self.max_push())
    }

    /// Acceptance of `input` with the check-stack fixed to `check`.
    pub fn accepts_with(&self, check: &[Sym], input: &[Sym], caps: Caps) -> Result<RunResult> {
        self.ensure_valid()?;
        let nfa = self.check_nfa()?;
        if !nfa.accepts(check).unwrap_or(false) {
            return Err(Error::CheckStackRejected(self.render(check)));
        }
        if let Some(&a) = input.iter().find(|a| !self.input_alphabet.contains(a)) {
            return Err(Error::Alphabet(self.symbols.name(a).to_string()));
        }
        Ok(self.search(&self.by_state(), check, input, caps))
    }

    fn search(&self, by_state: &[Vec<usize>], check: &[Sym], input: &[Sym], caps: Caps) -> RunResult {
        let cap = self.height_cap(check.len(), caps);
        let mut result = RunResult::rejected();
        let root = Configuration::initial(self.start);
        let mut parent: HashMap<Configuration, Option<(Configuration, usize)>> = HashMap::new();
        parent.insert(root.clone(), None);
        let mut work = VecDeque::from([root]);
        while let Some(c) = match caps.order {
            Order::BreadthFirst => work.pop_front(),
            Order::DepthFirst => work.pop_back(),
        } {
            result.explored += 1;
            if c.height() > check.len() {
                result.above_check_stack = true;
            }
            if c.position == input.len() && self.accepting.contains(&c.state) {
                let mut trace = Vec::new();
                let mut at = &c;
                while let Some(Some((p, i))) = parent.get(at) {
                    trace.push(*i);
                    at = p;
                }
                trace.reverse();
                result.accepted = true;
                result.witness = Some(check.to_vec());
                result.trace = Some(trace);
                return result;
            }
            for i in self.applicable(by_state, check, input, &c) {
                let next = self.fire(&self.transitions[i], &c);
                if next.height() > cap {
                    result.capped = true;
                    continue;
                }
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some((c.clone(), i)));
                work.push_back(next);
            }
        }
        result
    }

    /// Acceptance of `input` for some check-stack of length at most
    /// `max_check` in the check-stack language. The witness is the
    /// shortlex-least accepting check-stack.
    pub fn accepts_any(&self, input: &[Sym], max_check: usize, caps: Caps) -> Result<RunResult> {
        self.ensure_valid()?;
        if let Some(&a) = input.iter().find(|a| !self.input_alphabet.contains(a)) {
            return Err(Error::Alphabet(self.symbols.name(a).to_string()));
        }
        let stacks = self.check_nfa()?.enumerate(max_check);
        let by_state = self.by_state();
        let runs: Vec<RunResult> = stacks
            .par_iter()
            .map(|cs| self.search(&by_state, cs, input, caps))
            .collect();
        let mut out = RunResult::rejected();
        for r in runs {
            out.capped |= r.capped;
            out.above_check_stack |= r.above_check_stack;
            out.explored += r.explored;
            if r.accepted && !out.accepted {
                out.accepted = true;
                out.witness = r.witness;
                out.trace = r.trace;
            }
        }
        Ok(out)
    }
}
