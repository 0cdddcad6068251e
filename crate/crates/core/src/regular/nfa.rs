use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::regex::Regex;
use crate::error::{Error, Result};

pub type StateId = usize;

/// Nondeterministic automaton with empty moves (`None` labels).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa<S> {
    alphabet: BTreeSet<S>,
    transitions: Vec<Vec<(Option<S>, StateId)>>,
    initial: StateId,
    accepting: BTreeSet<StateId>,
}

impl<S: Clone + Ord + fmt::Debug> Nfa<S> {
    /// Builds an automaton from explicit parts, checking referential integrity.
    pub fn new(
        alphabet: BTreeSet<S>,
        num_states: usize,
        edges: impl IntoIterator<Item = (StateId, Option<S>, StateId)>,
        initial: StateId,
        accepting: impl IntoIterator<Item = StateId>,
    ) -> Result<Self> {
        let mut transitions = vec![Vec::new(); num_states];
        for (from, label, to) in edges {
            if from >= num_states || to >= num_states {
                return Err(Error::Configuration(format!(
                    "edge {from} -> {to} references an undeclared state"
                )));
            }
            if let Some(s) = &label {
                if !alphabet.contains(s) {
                    return Err(Error::Alphabet(format!("{s:?}")));
                }
            }
            transitions[from].push((label, to));
        }
        let accepting: BTreeSet<_> = accepting.into_iter().collect();
        if initial >= num_states || accepting.iter().any(|&q| q >= num_states) {
            return Err(Error::Configuration(
                "initial or accepting state is undeclared".to_string(),
            ));
        }
        Ok(Nfa {
            alphabet,
            transitions,
            initial,
            accepting,
        })
    }

    /// The automaton accepting nothing.
    pub fn empty_language(alphabet: BTreeSet<S>) -> Self {
        Nfa {
            alphabet,
            transitions: vec![Vec::new()],
            initial: 0,
            accepting: BTreeSet::new(),
        }
    }

    /// Inductive construction with empty moves.
    pub fn compile(regex: &Regex<S>, alphabet: &BTreeSet<S>) -> Result<Self> {
        regex.check(alphabet)?;
        let mut b = Builder {
            transitions: Vec::new(),
        };
        let (start, end) = b.build(regex);
        Ok(Nfa {
            alphabet: alphabet.clone(),
            transitions: b.transitions,
            initial: start,
            accepting: BTreeSet::from([end]),
        })
    }

    pub fn alphabet(&self) -> &BTreeSet<S> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.transitions.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn edges(&self, q: StateId) -> &[(Option<S>, StateId)] {
        &self.transitions[q]
    }

    pub fn closure(&self, seeds: impl IntoIterator<Item = StateId>) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> = BTreeSet::new();
        let mut stack: Vec<StateId> = seeds.into_iter().collect();
        while let Some(q) = stack.pop() {
            if seen.insert(q) {
                for (label, to) in &self.transitions[q] {
                    if label.is_none() && !seen.contains(to) {
                        stack.push(*to);
                    }
                }
            }
        }
        seen
    }

    fn step_set(&self, set: &BTreeSet<StateId>, sym: &S) -> BTreeSet<StateId> {
        let targets = set.iter().flat_map(|&q| {
            self.transitions[q]
                .iter()
                .filter(move |(l, _)| l.as_ref() == Some(sym))
                .map(|(_, t)| *t)
        });
        self.closure(targets.collect::<Vec<_>>())
    }

    fn is_accepting_set(&self, set: &BTreeSet<StateId>) -> bool {
        set.iter().any(|q| self.accepting.contains(q))
    }

    /// Membership by subset simulation.
    pub fn accepts(&self, word: &[S]) -> Result<bool> {
        if let Some(bad) = word.iter().find(|s| !self.alphabet.contains(s)) {
            return Err(Error::Alphabet(format!("{bad:?}")));
        }
        let mut current = self.closure([self.initial]);
        for s in word {
            current = self.step_set(&current, s);
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(self.is_accepting_set(&current))
    }

    /// States from which an accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.num_states()];
        for (q, edges) in self.transitions.iter().enumerate() {
            for (_, t) in edges {
                rev[*t].push(q);
            }
        }
        let mut live = vec![false; self.num_states()];
        let mut stack: Vec<StateId> = self.accepting.iter().copied().collect();
        while let Some(q) = stack.pop() {
            if !live[q] {
                live[q] = true;
                stack.extend(rev[q].iter().copied().filter(|&p| !live[p]));
            }
        }
        live
    }

    /// Accepted words of length at most `max_len`, in shortlex order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Vec<S>> {
        let live = self.coreachable();
        let mut out = Vec::new();
        let start = self.closure([self.initial]);
        if !start.iter().any(|&q| live[q]) {
            return out;
        }
        // Frontier kept in lexicographic order; extending each entry by the
        // sorted alphabet keeps the next level sorted as well.
        let mut frontier: Vec<(Vec<S>, BTreeSet<StateId>)> = vec![(Vec::new(), start)];
        for len in 0..=max_len {
            for (w, set) in &frontier {
                if self.is_accepting_set(set) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &frontier {
                for s in &self.alphabet {
                    let stepped = self.step_set(set, s);
                    if stepped.iter().any(|&q| live[q]) {
                        let mut w2 = w.clone();
                        w2.push(s.clone());
                        next.push((w2, stepped));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Equivalent automaton without empty moves whose states are the initial
    /// state plus targets of symbol edges, trimmed to co-reachable states.
    /// State 0 of the result is initial.
    pub fn without_epsilon(&self) -> Nfa<S> {
        let mut index: BTreeMap<StateId, StateId> = BTreeMap::new();
        let mut order = vec![self.initial];
        index.insert(self.initial, 0);
        let mut edges: Vec<Vec<(Option<S>, StateId)>> = Vec::new();
        let mut accepting = BTreeSet::new();
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            let id = index[&q];
            let cl = self.closure([q]);
            if self.is_accepting_set(&cl) {
                accepting.insert(id);
            }
            let mut out: BTreeSet<(S, StateId)> = BTreeSet::new();
            for p in &cl {
                for (l, t) in &self.transitions[*p] {
                    if let Some(s) = l {
                        let tid = *index.entry(*t).or_insert_with(|| {
                            order.push(*t);
                            queue.push_back(*t);
                            order.len() - 1
                        });
                        out.insert((s.clone(), tid));
                    }
                }
            }
            if edges.len() <= id {
                edges.resize(id + 1, Vec::new());
            }
            edges[id] = out.into_iter().map(|(s, t)| (Some(s), t)).collect();
        }
        edges.resize(order.len(), Vec::new());
        let raw = Nfa {
            alphabet: self.alphabet.clone(),
            transitions: edges,
            initial: 0,
            accepting,
        };
        raw.trim()
    }

    /// Drops states that cannot reach acceptance (keeping the initial state).
    fn trim(&self) -> Nfa<S> {
        let live = self.coreachable();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut next = 0;
        for q in 0..self.num_states() {
            if live[q] || q == self.initial {
                map[q] = next;
                next += 1;
            }
        }
        let mut transitions = vec![Vec::new(); next];
        for (q, edges) in self.transitions.iter().enumerate() {
            if map[q] == usize::MAX {
                continue;
            }
            transitions[map[q]] = edges
                .iter()
                .filter(|(_, t)| map[*t] != usize::MAX && live[*t])
                .map(|(l, t)| (l.clone(), map[*t]))
                .collect();
        }
        Nfa {
            alphabet: self.alphabet.clone(),
            transitions,
            initial: map[self.initial],
            accepting: self.accepting.iter().map(|q| map[*q]).collect(),
        }
    }
}

struct Builder<S> {
    transitions: Vec<Vec<(Option<S>, StateId)>>,
}

impl<S: Clone> Builder<S> {
    fn fresh(&mut self) -> StateId {
        self.transitions.push(Vec::new());
        self.transitions.len() - 1
    }

    fn edge(&mut self, from: StateId, label: Option<S>, to: StateId) {
        self.transitions[from].push((label, to));
    }

    fn build(&mut self, r: &Regex<S>) -> (StateId, StateId) {
        match r {
            Regex::Epsilon => {
                let s = self.fresh();
                let e = self.fresh();
                self.edge(s, None, e);
                (s, e)
            }
            Regex::Symbol(a) => {
                let s = self.fresh();
                let e = self.fresh();
                self.edge(s, Some(a.clone()), e);
                (s, e)
            }
            Regex::Concat(parts) => {
                let s = self.fresh();
                let mut cur = s;
                for p in parts {
                    let (ps, pe) = self.build(p);
                    self.edge(cur, None, ps);
                    cur = pe;
                }
                (s, cur)
            }
            Regex::Union(alts) => {
                let s = self.fresh();
                let e = self.fresh();
                for a in alts {
                    let (as_, ae) = self.build(a);
                    self.edge(s, None, as_);
                    self.edge(ae, None, e);
                }
                (s, e)
            }
            Regex::Star(inner) => {
                let s = self.fresh();
                let e = self.fresh();
                let (is, ie) = self.build(inner);
                self.edge(s, None, is);
                self.edge(s, None, e);
                self.edge(ie, None, is);
                self.edge(ie, None, e);
                (s, e)
            }
        }
    }
}
