use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::precompute::{precompute_directed, precompute_finitary, DirectedData, FinitaryData, OffSpine};
use crate::cspd::{Configuration, CspdMachine, PushSym, State, Transition, Trigger};
use crate::equivalence::TOP;
use crate::error::{Error, Result};
use crate::regular::Regex;
use crate::symbol::{Sym, SymbolTable};
use crate::trees::{Classification, GeneratorMap, Group, Letter};

/// How the machine handles one generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorData {
    Finitary(FinitaryData),
    Directed(DirectedData),
}

/// A machine accepting exactly the words that act nontrivially on the
/// tree, with the bookkeeping needed to interpret its runs.
#[derive(Debug, Clone)]
pub struct CowordMachine {
    pub machine: CspdMachine,
    /// Pushdown symbol of each tree letter.
    pub letters: Vec<Sym>,
    pub top: Sym,
    pub comp: State,
    pub check: State,
    pub accept: State,
    pub generators: BTreeMap<String, GeneratorData>,
    /// States introduced for each generator.
    pub stage_states: BTreeMap<String, Vec<State>>,
}

impl CowordMachine {
    fn letter_of(&self, s: Sym) -> Option<Letter> {
        self.letters.iter().position(|&x| x == s)
    }

    /// The vertex a check-stack encodes: the cells below the top marker,
    /// read from the top down.
    pub fn witness_vertex(&self, check: &[Sym]) -> Result<Vec<Letter>> {
        let body = match check.split_last() {
            Some((&t, rest)) if t == self.top => rest,
            _ => return Err(Error::Configuration("check-stack does not end with the top marker".into())),
        };
        body.iter()
            .rev()
            .map(|&s| {
                self.letter_of(s)
                    .ok_or_else(|| Error::Configuration("check-stack holds a non-letter".into()))
            })
            .collect()
    }

    /// The vertex held in the pushdown when its top is the marker.
    pub fn pushdown_vertex(&self, c: &Configuration) -> Option<Vec<Letter>> {
        let (&t, rest) = c.pushdown.split_last()?;
        if t != self.top {
            return None;
        }
        rest.iter().rev().map(|&s| self.letter_of(s)).collect()
    }
}

struct Assembler {
    states: Vec<String>,
    index: HashMap<String, State>,
    transitions: Vec<Transition>,
    letters: Vec<Sym>,
    top: Sym,
}

impl Assembler {
    fn state(&mut self, name: String) -> State {
        if let Some(&q) = self.index.get(&name) {
            return q;
        }
        self.states.push(name.clone());
        self.index.insert(name, self.states.len() - 1);
        self.states.len() - 1
    }

    fn add(&mut self, from: State, reads: Vec<Sym>, trigger: Trigger, to: State, push: Vec<PushSym>) {
        self.transitions.push(Transition {
            from,
            reads,
            trigger,
            to,
            push,
        });
    }

    fn pair(&self, check: Letter, top: Letter) -> Trigger {
        Trigger::Pair {
            check: self.letters[check],
            top: self.letters[top],
        }
    }

    fn syms(&self, v: &[Letter]) -> Vec<PushSym> {
        v.iter().map(|&x| PushSym::Sym(self.letters[x])).collect()
    }

    fn degree(&self) -> usize {
        self.letters.len()
    }

    /// Reads the first `depth` letters of the vertex under `start`, then
    /// moves to `done` pushing `head` followed by their image. A vertex
    /// that ends early goes to `done` from the bottom.
    fn finitary(&mut self, start: State, label: &str, f: &FinitaryData, head: &[PushSym], done: State) -> Vec<State> {
        let mut made = vec![start];
        let mut level = vec![(Vec::<Letter>::new(), start)];
        for len in 0..=f.depth {
            let mut next = Vec::new();
            for (u, q) in &level {
                let mut push = head.to_vec();
                push.extend(self.syms(f.image(u)));
                if len == f.depth {
                    self.add(*q, vec![], Trigger::Free, done, push.clone());
                }
                push.push(PushSym::Bottom);
                self.add(*q, vec![], Trigger::Bottom, done, push);
                if len < f.depth {
                    for b in 0..self.degree() {
                        let mut ub = u.clone();
                        ub.push(b);
                        let r = self.state(format!("{label},{}]", render(&ub)));
                        made.push(r);
                        for c in 0..self.degree() {
                            self.add(*q, vec![], self.pair(c, b), r, vec![]);
                        }
                        next.push((ub, r));
                    }
                }
            }
            level = next;
        }
        made
    }

    /// Leaves the spine at `q` on every off-spine letter.
    fn exits(&mut self, q: State, label: &str, exits: &[OffSpine], done: State) -> Vec<State> {
        let mut made = Vec::new();
        for e in exits {
            let d = self.state(format!("{label},{},]", e.letter));
            made.push(d);
            for c in 0..self.degree() {
                self.add(q, vec![], self.pair(c, e.letter), d, vec![]);
            }
            let head = vec![PushSym::Sym(self.letters[e.image])];
            made.extend(self.finitary(d, &format!("{label},{}", e.letter), &e.rest, &head, done));
        }
        made
    }
}

fn render(u: &[Letter]) -> String {
    u.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

/// Compiles a group into a machine for its co-word problem.
///
/// Input letters are generator names; the check-stack is `Σ* 𝔱`, spelling a
/// vertex from the top marker down. The machine copies the vertex into the
/// pushdown, lets each input generator rewrite it in place, and accepts when
/// the result differs from the check-stack.
pub fn build_coword_machine(group: &Group) -> Result<CowordMachine> {
    let names = group.generators().keys().map(String::as_str);
    assemble(group, &GeneratorMap::identity(names))
}

/// The co-word machine read through `map`: each source letter runs the
/// passes of the generators in its image.
pub fn apply_generator_map(group: &Group, map: &GeneratorMap) -> Result<CowordMachine> {
    for (x, img) in &map.images {
        if let Some(y) = img.iter().find(|y| !group.generators().contains_key(*y)) {
            return Err(Error::schema(format!("map.{x}"), format!("`{y}` is not a generator")));
        }
    }
    assemble(group, map)
}

fn assemble(group: &Group, map: &GeneratorMap) -> Result<CowordMachine> {
    group.check_symmetric()?;
    let t = group.automaton();
    let mut generators = BTreeMap::new();
    for (name, &s) in group.generators() {
        let data = match t.classify(s) {
            Classification::Finitary { .. } => GeneratorData::Finitary(precompute_finitary(t, name, s)?),
            Classification::Directed { .. } => GeneratorData::Directed(precompute_directed(t, name, s)?),
            Classification::Neither => {
                return Err(Error::Classification {
                    name: name.clone(),
                    expected: "finitary or directed",
                    found: "neither".into(),
                })
            }
        };
        generators.insert(name.clone(), data);
    }

    let mut symbols = SymbolTable::new();
    let letters: Vec<Sym> = t.alphabet().iter().map(|x| symbols.intern(x)).collect();
    let inputs: BTreeMap<&str, Sym> = map.images.keys().map(|x| (x.as_str(), symbols.intern(x))).collect();
    let top = symbols.fresh(TOP);
    let mut a = Assembler {
        states: Vec::new(),
        index: HashMap::new(),
        transitions: Vec::new(),
        letters: letters.clone(),
        top,
    };
    let q0 = a.state("q0".into());
    let comp = a.state("q_comp".into());
    let check = a.state("q_check".into());
    let accept = a.state("q_accept".into());
    let tt = Trigger::Pair { check: top, top };
    let pt = PushSym::Sym(top);

    a.add(q0, vec![], Trigger::Bottom, q0, vec![pt, PushSym::Bottom]);
    for &l in &letters[..a.degree()] {
        a.add(q0, vec![], Trigger::Pair { check: l, top }, q0, vec![pt, PushSym::Sym(l)]);
    }
    a.add(q0, vec![], tt, comp, vec![pt]);

    let identity_map = map.images.iter().all(|(x, img)| img.len() == 1 && &img[0] == x);
    let mut stage_states: BTreeMap<String, Vec<State>> = BTreeMap::new();
    for (x, img) in &map.images {
        let read = vec![inputs[x.as_str()]];
        if img.is_empty() {
            a.add(comp, read, tt, comp, vec![pt]);
            continue;
        }
        let mut from = comp;
        for (i, g) in img.iter().enumerate() {
            let tag = if identity_map { g.clone() } else { format!("{x}.{i}:{g}") };
            let to = if i + 1 == img.len() {
                comp
            } else {
                a.state(format!("q_comp[{x},{}]", i + 1))
            };
            let read = if i == 0 { read.clone() } else { vec![] };
            let made = match &generators[g] {
                GeneratorData::Finitary(f) => {
                    let label = format!("q[{tag}");
                    let start = a.state(format!("{label},]"));
                    a.add(from, read, tt, start, vec![]);
                    a.finitary(start, &label, f, &[pt], to)
                }
                GeneratorData::Directed(d) => directed(&mut a, &tag, d, read, from, to),
            };
            stage_states.entry(g.clone()).or_default().extend(made);
            from = to;
        }
    }

    a.add(comp, vec![], tt, check, vec![]);
    for x in 0..a.degree() {
        for y in 0..a.degree() {
            let to = if x == y { check } else { accept };
            a.add(check, vec![], a.pair(x, y), to, vec![]);
        }
    }

    let mut pushdown: BTreeSet<Sym> = letters.iter().copied().collect();
    pushdown.insert(top);
    let letter_any = Regex::union(letters.iter().map(|&x| Regex::sym(x)).collect());
    let mut transitions = a.transitions;
    transitions.sort();
    transitions.dedup();
    let machine = CspdMachine {
        states: a.states,
        symbols,
        input_alphabet: inputs.values().copied().collect(),
        pushdown_alphabet: pushdown.clone(),
        check_alphabet: pushdown,
        check_language: Regex::concat(vec![Regex::star(letter_any), Regex::sym(top)]),
        transitions,
        start: q0,
        accepting: BTreeSet::from([accept]),
    };
    Ok(CowordMachine {
        machine,
        letters,
        top,
        comp,
        check,
        accept,
        generators,
        stage_states,
    })
}

/// Stage states for a directed generator: follow the spine, leave it
/// through a finitary restriction, then push the spine's image back.
fn directed(a: &mut Assembler, name: &str, d: &DirectedData, read: Vec<Sym>, from: State, comp: State) -> Vec<State> {
    let s = d.spine.iota.len();
    let tlen = d.spine.pi.len();
    let pt = PushSym::Sym(a.top);
    let iota_img = a.syms(&d.spine.iota_image);
    let pi_img = a.syms(&d.spine.pi_image);
    let qi: Vec<State> = (0..=s).map(|i| a.state(format!("q[{name},ι,{i}]"))).collect();
    let qp: Vec<State> = (1..=tlen).map(|j| a.state(format!("q[{name},π,{j}]"))).collect();
    let ri: Vec<State> = (0..=s).map(|i| a.state(format!("r[{name},ι,{i}]"))).collect();
    let rp: Vec<State> = (1..=tlen).map(|j| a.state(format!("r[{name},π,{j}]"))).collect();
    let loop_state = a.state(format!("r[{name},π]"));
    let mut made: Vec<State> = qi.iter().chain(&qp).chain(&ri).chain(&rp).copied().collect();
    made.push(loop_state);

    a.add(from, read, Trigger::Pair { check: a.top, top: a.top }, qi[0], vec![]);
    for i in 0..=s {
        let next = d.next_after_iota(i);
        let to = if i < s { qi[i + 1] } else { qp[0] };
        for c in 0..a.degree() {
            a.add(qi[i], vec![], a.pair(c, next), to, vec![]);
        }
        made.extend(a.exits(qi[i], &format!("q[{name},ι,{i}"), &d.iota_exits[i], ri[i]));
        a.add(qi[i], vec![], Trigger::Bottom, ri[i], vec![PushSym::Bottom]);
        let mut push = vec![pt];
        push.extend_from_slice(&iota_img[..i]);
        a.add(ri[i], vec![], Trigger::Free, comp, push);
    }
    let mut back = vec![pt];
    back.extend_from_slice(&iota_img);
    for j in 1..=tlen {
        let next = d.next_after_pi(j);
        let to = qp[j % tlen];
        for c in 0..a.degree() {
            a.add(qp[j - 1], vec![], a.pair(c, next), to, vec![]);
        }
        made.extend(a.exits(qp[j - 1], &format!("q[{name},π,{j}"), &d.pi_exits[j - 1], rp[j - 1]));
        a.add(qp[j - 1], vec![], Trigger::Bottom, rp[j - 1], vec![PushSym::Bottom]);
        a.add(rp[j - 1], vec![], Trigger::Free, loop_state, pi_img[..j].to_vec());
    }
    a.add(loop_state, vec![], Trigger::Free, loop_state, pi_img.clone());
    a.add(loop_state, vec![], Trigger::Free, comp, back);
    made
}
