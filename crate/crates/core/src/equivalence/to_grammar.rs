use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::cspd::{check_normalized, CspdMachine, State, Transition, Trigger, BOTTOM};
use crate::et0l::{Et0lGrammar, ExtendedGrammar, ExtendedTable, GrammarParts, Table, DEAD};
use crate::error::Result;
use crate::regular::Regex;
use crate::symbol::{Sym, SymbolTable};

/// Finite right-hand-side languages with at most this many words are
/// written out as literal alternatives.
const MAX_LITERALS: usize = 64;

/// Pushdown letter below which a path runs; `None` is the bottom symbol.
type Letter = Option<Sym>;

/// `A^g_{p,q}`: the machine has just pushed `g` entering `p`, and pops it
/// entering `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PathKey {
    g: Letter,
    p: State,
    q: State,
}

/// One edge of a right-hand-side automaton: consume `reads`, then either
/// continue with a child path `A^x_{s,t}` and move to `t`, or finish.
/// Right-hand-side automaton edges by source; `None` targets the final state.
type Edges = BTreeMap<State, Vec<(Step, Option<State>)>>;
/// Edge labels keyed by source state and edge index.
type Labels = HashMap<(State, usize), Vec<Sym>>;

#[derive(Debug, Clone)]
enum Step {
    Push { reads: Vec<Sym>, child: PathKey },
    Finish { reads: Vec<Sym> },
}

struct Builder<'m> {
    /// Transitions grouped by (from, check letter, pushdown letter).
    moves: HashMap<(State, Letter, Letter), Vec<&'m Transition>>,
    /// Check-stack letters, with `None` for the bottom cell.
    cells: Vec<Letter>,
    productive: HashSet<PathKey>,
    /// Productive paths by (letter, start state): their end states.
    ends: HashMap<(Letter, State), Vec<State>>,
}

impl<'m> Builder<'m> {
    fn new(m: &'m CspdMachine) -> Self {
        let mut moves: HashMap<_, Vec<_>> = HashMap::new();
        for t in &m.transitions {
            let key = match t.trigger {
                Trigger::Bottom => (t.from, None, None),
                Trigger::Pair { check, top } => (t.from, Some(check), Some(top)),
                Trigger::Free => unreachable!("normalized machines have no free moves"),
            };
            moves.entry(key).or_default().push(t);
        }
        let mut cells = vec![None];
        cells.extend(m.check_alphabet.iter().map(|&c| Some(c)));
        Builder {
            moves,
            cells,
            productive: HashSet::new(),
            ends: HashMap::new(),
        }
    }

    /// Edges leaving `r` in the right-hand-side automaton of `A^b_{·,q}`
    /// under cell `c`, with children restricted to productive ones.
    fn steps_from(&self, r: State, c: Letter, b: Letter, q: State) -> Vec<(Step, Option<State>)> {
        let mut out = Vec::new();
        let Some(ts) = self.moves.get(&(r, c, b)) else {
            return out;
        };
        for t in ts {
            match t.pushed().next() {
                None if t.to == q => out.push((Step::Finish { reads: t.reads.clone() }, None)),
                None => {}
                Some(x) => {
                    for &u in self.ends.get(&(Some(x), t.to)).into_iter().flatten() {
                        let child = PathKey {
                            g: Some(x),
                            p: t.to,
                            q: u,
                        };
                        out.push((
                            Step::Push {
                                reads: t.reads.clone(),
                                child,
                            },
                            Some(u),
                        ));
                    }
                }
            }
        }
        out
    }

    /// Saturates the relation "from `r` under cell `c` and pushdown letter
    /// `b`, the machine can pop `b` entering `q`", ignoring which letters
    /// may follow on the check-stack. A path `A^b_{p,q}` is productive when
    /// some cell relates `p` to `q`.
    fn compute_productive(&mut self) {
        enum Event {
            Completes(Letter, Letter, State, State),
            Productive(PathKey),
        }
        // Pushes keyed by (cell, letter below, pushed letter, target).
        let mut pushes: HashMap<(Letter, Letter, Sym, State), Vec<State>> = HashMap::new();
        let mut pushes_of: HashMap<(Sym, State), Vec<(Letter, Letter, State)>> = HashMap::new();
        let mut work = Vec::new();
        for (&(r, c, b), ts) in &self.moves {
            for t in ts {
                match t.pushed().next() {
                    Some(x) => {
                        pushes.entry((c, b, x, t.to)).or_default().push(r);
                        pushes_of.entry((x, t.to)).or_default().push((c, b, r));
                    }
                    None => work.push(Event::Completes(c, b, r, t.to)),
                }
            }
        }
        let mut completes: HashSet<(Letter, Letter, State, State)> = HashSet::new();
        let mut completes_from: HashMap<(Letter, Letter, State), Vec<State>> = HashMap::new();
        let mut by_end: HashMap<State, Vec<(Sym, State)>> = HashMap::new();
        while let Some(event) = work.pop() {
            match event {
                Event::Completes(c, b, u, q) => {
                    if !completes.insert((c, b, u, q)) {
                        continue;
                    }
                    completes_from.entry((c, b, u)).or_default().push(q);
                    work.push(Event::Productive(PathKey { g: b, p: u, q }));
                    for &(x, s) in by_end.get(&u).into_iter().flatten() {
                        for &r in pushes.get(&(c, b, x, s)).into_iter().flatten() {
                            work.push(Event::Completes(c, b, r, q));
                        }
                    }
                }
                Event::Productive(key) => {
                    if !self.productive.insert(key) {
                        continue;
                    }
                    self.ends.entry((key.g, key.p)).or_default().push(key.q);
                    let Some(x) = key.g else { continue };
                    by_end.entry(key.q).or_default().push((x, key.p));
                    for &(c, b, r) in pushes_of.get(&(x, key.p)).into_iter().flatten() {
                        for &q in completes_from.get(&(c, b, key.q)).into_iter().flatten() {
                            work.push(Event::Completes(c, b, r, q));
                        }
                    }
                }
            }
        }
        for v in self.ends.values_mut() {
            v.sort_unstable();
        }
    }

    /// Trimmed automaton for `key` under cell `c`: edges by source state,
    /// limited to states that can still finish.
    fn automaton(&self, c: Letter, key: PathKey) -> Edges {
        let mut edges = Edges::new();
        let mut seen = BTreeSet::from([key.p]);
        let mut work = vec![key.p];
        while let Some(r) = work.pop() {
            let out: Vec<_> = self
                .steps_from(r, c, key.g, key.q)
                .into_iter()
                .collect();
            for (_, next) in &out {
                if let Some(u) = next {
                    if seen.insert(*u) {
                        work.push(*u);
                    }
                }
            }
            edges.insert(r, out);
        }
        // Keep states from which the final state is reachable.
        let mut live: BTreeSet<State> = BTreeSet::new();
        loop {
            let before = live.len();
            for (&r, out) in &edges {
                if out.iter().any(|(s, n)| matches!(s, Step::Finish { .. }) || n.is_some_and(|u| live.contains(&u))) {
                    live.insert(r);
                }
            }
            if live.len() == before {
                break;
            }
        }
        edges
            .into_iter()
            .filter(|(r, _)| live.contains(r))
            .map(|(r, out)| {
                let kept = out
                    .into_iter()
                    .filter(|(_, n)| n.is_none_or(|u| live.contains(&u)))
                    .collect();
                (r, kept)
            })
            .collect()
    }
}

/// All words of an acyclic automaton, or `None` if it has a cycle or more
/// than [`MAX_LITERALS`] words.
fn finite_words(edges: &Edges, start: State, labels: &Labels) -> Option<Vec<Vec<Sym>>> {
    fn walk(
        edges: &Edges,
        labels: &Labels,
        r: State,
        on_path: &mut Vec<State>,
        prefix: &mut Vec<Sym>,
        out: &mut Vec<Vec<Sym>>,
    ) -> bool {
        if on_path.contains(&r) {
            return false;
        }
        on_path.push(r);
        for (i, (_, next)) in edges.get(&r).into_iter().flatten().enumerate() {
            let mark = prefix.len();
            prefix.extend_from_slice(&labels[&(r, i)]);
            let ok = match next {
                None => {
                    out.push(prefix.clone());
                    out.len() <= MAX_LITERALS
                }
                Some(u) => walk(edges, labels, *u, on_path, prefix, out),
            };
            prefix.truncate(mark);
            if !ok {
                return false;
            }
        }
        on_path.pop();
        true
    }
    let mut out = Vec::new();
    walk(edges, labels, start, &mut Vec::new(), &mut Vec::new(), &mut out).then_some(out)
}

/// Builds an extended grammar generating the language of a machine in
/// restricted form (see [`crate::cspd::normalize`]).
///
/// Non-terminals `A[g,p,q]` stand for pushdown excursions; table `τ_c`
/// rewrites an excursion whose letter sits on check-stack cell `c` by the
/// language of its right-hand-side automaton. Finite languages are written
/// as literal words; others become embedded one-table grammars. Only
/// excursions reachable from the start that can complete are kept.
pub fn cspd_to_grammar(m: &CspdMachine) -> Result<ExtendedGrammar> {
    let accept = check_normalized(m)?;
    let mut b = Builder::new(m);
    b.compute_productive();

    let mut symbols = SymbolTable::new();
    let terminals: BTreeSet<Sym> = m
        .input_alphabet
        .iter()
        .map(|&a| symbols.intern(m.symbols.name(a)))
        .collect();
    let letter_name = |g: Letter| g.map_or(BOTTOM.to_string(), |s| m.symbols.name(s).to_string());
    let mut names: HashMap<PathKey, Sym> = HashMap::new();
    let mut nonterminal = |k: PathKey, symbols: &mut SymbolTable| -> Sym {
        *names.entry(k).or_insert_with(|| {
            symbols.fresh(&format!(
                "A[{},{},{}]",
                letter_name(k.g),
                m.states[k.p],
                m.states[k.q]
            )
            .replace(char::is_whitespace, "_"))
        })
    };
    let dead = symbols.intern(DEAD);
    let start_key = PathKey {
        g: None,
        p: m.start,
        q: accept,
    };
    let start = nonterminal(start_key, &mut symbols);

    let mut tables: Vec<ExtendedTable> = b
        .cells
        .iter()
        .map(|&c| ExtendedTable::new(letter_name(c)))
        .collect();
    let mut nonterminals = BTreeSet::from([start, dead]);
    let mut queue = VecDeque::from([start_key]);
    let mut visited = HashSet::from([start_key]);
    while let Some(key) = queue.pop_front() {
        let head = nonterminal(key, &mut symbols);
        for (ci, &c) in b.cells.iter().enumerate() {
            if c.is_none() != key.g.is_none() || !b.productive.contains(&key) {
                tables[ci].add_word(head, vec![dead]);
                continue;
            }
            let edges = b.automaton(c, key);
            for (step, _) in edges.values().flatten() {
                if let Step::Push { child, .. } = step {
                    if visited.insert(*child) {
                        queue.push_back(*child);
                    }
                }
            }
            if !edges.contains_key(&key.p) {
                tables[ci].add_word(head, vec![dead]);
                continue;
            }
            let mut labels = Labels::new();
            for (&r, out) in &edges {
                for (i, (step, _)) in out.iter().enumerate() {
                    let (reads, child) = match step {
                        Step::Push { reads, child } => (reads, Some(*child)),
                        Step::Finish { reads } => (reads, None),
                    };
                    let mut w: Vec<Sym> = reads
                        .iter()
                        .map(|&a| symbols.get(m.symbols.name(a)).expect("input letter"))
                        .collect();
                    if let Some(k) = child {
                        w.push(nonterminal(k, &mut symbols));
                    }
                    labels.insert((r, i), w);
                }
            }
            match finite_words(&edges, key.p, &labels) {
                Some(words) => {
                    for w in words {
                        tables[ci].add_word(head, w);
                    }
                }
                None => {
                    let g = embedded_grammar(&edges, key.p, &labels, &symbols)?;
                    tables[ci].add_embedded(head, g);
                }
            }
        }
        nonterminals.insert(head);
    }
    for k in visited {
        nonterminals.insert(nonterminal(k, &mut symbols));
    }
    let control = Regex::concat(vec![
        Regex::sym(0usize),
        m.check_language.map_symbols(&|c: &Sym| {
            b.cells.iter().position(|&x| x == Some(*c)).expect("check letter")
        }),
    ]);
    ExtendedGrammar::new(symbols, terminals, nonterminals, tables, control, start)
}

/// A one-table grammar `N_r -> label N_u | label` generating the words of
/// the automaton, applied once per edge.
fn embedded_grammar(edges: &Edges, start: State, labels: &Labels, host: &SymbolTable) -> Result<Et0lGrammar> {
    let mut symbols = SymbolTable::new();
    let mut terminals = BTreeSet::new();
    let mut local = |s: Sym, symbols: &mut SymbolTable| -> Sym {
        let x = symbols.intern(host.name(s));
        terminals.insert(x);
        x
    };
    let mut state_sym: BTreeMap<State, Sym> = BTreeMap::new();
    let mut table = Table::new("step");
    let mut bodies = Vec::new();
    for (&r, out) in edges {
        for (i, (_, next)) in out.iter().enumerate() {
            let word: Vec<Sym> = labels[&(r, i)].iter().map(|&s| local(s, &mut symbols)).collect();
            bodies.push((r, word, *next));
        }
    }
    for &r in edges.keys() {
        state_sym.insert(r, symbols.fresh(&format!("N{r}")));
    }
    for (r, mut word, next) in bodies {
        if let Some(u) = next {
            word.push(state_sym[&u]);
        }
        table.add_rule(state_sym[&r], word);
    }
    let step = Regex::sym(0usize);
    Et0lGrammar::from_parts(GrammarParts {
        symbols,
        terminals,
        nonterminals: state_sym.values().copied().collect(),
        tables: vec![table],
        control: Regex::concat(vec![step.clone(), Regex::star(step)]),
        start: state_sym[&start],
        shared_terminals: false,
    })
}
