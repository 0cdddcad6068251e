//! JSON file formats for grammars, machines and groups.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::cspd::{CspdMachine, MachineBuilder, PushSym, Trigger, BOTTOM};
use crate::error::{Error, Result};
use crate::et0l::Et0lGrammar;
use crate::trees::{GeneratorMap, Group, SigmaAutomaton, StateSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarFile {
    pub terminals: Vec<String>,
    pub nonterminals: Vec<String>,
    pub start: String,
    /// Table name to rules; each rule maps a non-terminal to its
    /// space-separated replacements (`""` is the empty word).
    pub tables: IndexMap<String, IndexMap<String, Vec<String>>>,
    pub control: String,
    /// Terminals may also be rewritten by tables.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub shared_terminals: bool,
}

/// A word given either as space-separated text or as a list of names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    List(Vec<String>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TriggerSpec {
    /// `"bottom"` or `"free"`.
    Named(String),
    Pair { check: String, push_top: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub from: String,
    pub reads: WordSpec,
    pub trigger: TriggerSpec,
    pub to: String,
    pub push: WordSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub states: Vec<String>,
    pub input_alphabet: Vec<String>,
    pub pushdown_alphabet: Vec<String>,
    pub checkstack_alphabet: Vec<String>,
    pub checkstack_language: String,
    pub start: String,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupStateSpec {
    pub perm: Vec<String>,
    pub children: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub alphabet: Vec<String>,
    pub states: IndexMap<String, GroupStateSpec>,
    pub identity: String,
    /// Generator name to state name.
    pub generators: BTreeMap<String, String>,
    /// Declared inverse of each generator.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inverses: BTreeMap<String, String>,
    /// Source letter to a word of generator names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, WordSpec>>,
}

fn words(w: &WordSpec) -> Vec<String> {
    match w {
        WordSpec::List(v) => v.clone(),
        WordSpec::Text(t) => t.split_whitespace().map(str::to_string).collect(),
    }
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema {
        at: format!("{what} line {}, column {}", e.line(), e.column()),
        msg: e.to_string(),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

// ---- grammars ----

pub fn grammar_from_file(f: &GrammarFile) -> Result<Et0lGrammar> {
    let tables: Vec<(String, Vec<(String, Vec<String>)>)> = f
        .tables
        .iter()
        .map(|(name, rules)| {
            (
                name.clone(),
                rules.iter().map(|(h, bs)| (h.clone(), bs.clone())).collect(),
            )
        })
        .collect();
    Et0lGrammar::from_named_rules(
        &f.terminals,
        &f.nonterminals,
        &f.start,
        &tables,
        &f.control,
        f.shared_terminals,
    )
}

/// The file form of a grammar; rules `X -> X` are left implicit.
pub fn grammar_to_file(g: &Et0lGrammar) -> Result<GrammarFile> {
    let name = |s| g.symbols().name(s).to_string();
    for &s in g.terminals().iter().chain(g.nonterminals()) {
        if name(s).is_empty() || name(s).contains(char::is_whitespace) {
            return Err(Error::schema("grammar", format!("symbol name {:?} cannot be written", name(s))));
        }
    }
    let tables = g
        .tables()
        .iter()
        .map(|t| {
            let rules = t
                .explicit_rules()
                .iter()
                .filter(|(&h, bodies)| bodies.as_slice() != [vec![h]])
                .map(|(&h, bodies)| {
                    let bodies = bodies
                        .iter()
                        .map(|b| b.iter().map(|&s| name(s)).collect::<Vec<_>>().join(" "))
                        .collect();
                    (name(h), bodies)
                })
                .collect();
            (t.name().to_string(), rules)
        })
        .collect();
    Ok(GrammarFile {
        terminals: g.terminals().iter().map(|&s| name(s)).collect(),
        nonterminals: g.nonterminals().iter().map(|&s| name(s)).collect(),
        start: name(g.start()),
        tables,
        control: g.control_text(),
        shared_terminals: g.terminals().iter().any(|t| g.nonterminals().contains(t)),
    })
}

pub fn parse_grammar(text: &str) -> Result<Et0lGrammar> {
    grammar_from_file(&from_json(text, "grammar")?)
}

pub fn serialize_grammar(g: &Et0lGrammar) -> Result<String> {
    Ok(to_json(&grammar_to_file(g)?))
}

pub fn read_grammar(path: impl AsRef<Path>) -> Result<Et0lGrammar> {
    parse_grammar(&read(path.as_ref())?)
}

// ---- machines ----

pub fn machine_from_file(f: &MachineFile) -> Result<CspdMachine> {
    let mut b = MachineBuilder::new();
    let mut declared = std::collections::HashSet::new();
    for q in &f.states {
        if !declared.insert(q.as_str()) {
            return Err(Error::schema("machine.states", format!("state `{q}` declared twice")));
        }
        b.state(q);
    }
    let known = |q: &str, at: String| {
        if declared.contains(q) {
            Ok(())
        } else {
            Err(Error::schema(at, format!("undeclared state `{q}`")))
        }
    };
    known(&f.start, "machine.start".into())?;
    for q in &f.accepting {
        known(q, "machine.accepting".into())?;
    }
    for (i, t) in f.transitions.iter().enumerate() {
        known(&t.from, format!("machine.transitions[{i}].from"))?;
        known(&t.to, format!("machine.transitions[{i}].to"))?;
    }
    fn refs(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    b.input_alphabet(&refs(&f.input_alphabet))
        .pushdown_alphabet(&refs(&f.pushdown_alphabet))
        .check_alphabet(&refs(&f.checkstack_alphabet))
        .check_language(&f.checkstack_language)
        .start(&f.start);
    for q in &f.accepting {
        b.accepting(q);
    }
    for (i, t) in f.transitions.iter().enumerate() {
        let at = format!("machine.transitions[{i}]");
        let trigger = match &t.trigger {
            TriggerSpec::Named(n) if n == "bottom" => Ok(Trigger::Bottom),
            TriggerSpec::Named(n) if n == "free" => Ok(Trigger::Free),
            TriggerSpec::Named(n) => Err(Error::schema(at.clone(), format!("unknown trigger `{n}`"))),
            TriggerSpec::Pair { check, push_top } => b.lookup(check).and_then(|check| {
                Ok(Trigger::Pair {
                    check,
                    top: b.lookup(push_top)?,
                })
            }),
        };
        let res = trigger.and_then(|trigger| {
            b.transition_names(&t.from, &words(&t.reads), trigger, &t.to, &words(&t.push))
                .map(|_| ())
        });
        res.map_err(|e| match e {
            Error::Schema { msg, .. } => Error::Schema { at: at.clone(), msg },
            other => other,
        })?;
    }
    b.build()
}

pub fn machine_to_file(m: &CspdMachine) -> MachineFile {
    let name = |s| m.symbols.name(s).to_string();
    let names = |set: &std::collections::BTreeSet<u32>| set.iter().map(|&s| name(s)).collect();
    let transitions = m
        .transitions
        .iter()
        .map(|t| TransitionSpec {
            from: m.states[t.from].clone(),
            reads: WordSpec::List(t.reads.iter().map(|&s| name(s)).collect()),
            trigger: match t.trigger {
                Trigger::Bottom => TriggerSpec::Named("bottom".into()),
                Trigger::Free => TriggerSpec::Named("free".into()),
                Trigger::Pair { check, top } => TriggerSpec::Pair {
                    check: name(check),
                    push_top: name(top),
                },
            },
            to: m.states[t.to].clone(),
            push: WordSpec::List(
                t.push
                    .iter()
                    .map(|p| match p {
                        PushSym::Bottom => BOTTOM.to_string(),
                        PushSym::Sym(s) => name(*s),
                    })
                    .collect(),
            ),
        })
        .collect();
    MachineFile {
        states: m.states.clone(),
        input_alphabet: names(&m.input_alphabet),
        pushdown_alphabet: names(&m.pushdown_alphabet),
        checkstack_alphabet: names(&m.check_alphabet),
        checkstack_language: m.check_language.render(&|&s: &u32| name(s)),
        start: m.states[m.start].clone(),
        accepting: m.accepting.iter().map(|&q| m.states[q].clone()).collect(),
        transitions,
    }
}

pub fn parse_machine(text: &str) -> Result<CspdMachine> {
    machine_from_file(&from_json(text, "machine")?)
}

pub fn serialize_machine(m: &CspdMachine) -> String {
    to_json(&machine_to_file(m))
}

pub fn read_machine(path: impl AsRef<Path>) -> Result<CspdMachine> {
    parse_machine(&read(path.as_ref())?)
}

// ---- groups ----

pub fn group_from_file(f: &GroupFile) -> Result<Group> {
    let states = f
        .states
        .iter()
        .map(|(name, s)| StateSpec {
            name: name.clone(),
            perm: s.perm.clone(),
            children: s.children.clone(),
        })
        .collect();
    let automaton = SigmaAutomaton::new(f.alphabet.clone(), states, &f.identity)?;
    let map = f.map.as_ref().map(|m| GeneratorMap {
        images: m.iter().map(|(x, w)| (x.clone(), words(w))).collect(),
    });
    Group::new(automaton, f.generators.clone(), f.inverses.clone(), map)
}

pub fn group_to_file(g: &Group) -> GroupFile {
    let t = g.automaton();
    GroupFile {
        alphabet: t.alphabet().to_vec(),
        states: t
            .state_specs()
            .into_iter()
            .map(|s| {
                (
                    s.name,
                    GroupStateSpec {
                        perm: s.perm,
                        children: s.children,
                    },
                )
            })
            .collect(),
        identity: t.state_name(t.identity()).to_string(),
        generators: g
            .generators()
            .iter()
            .map(|(n, &v)| (n.clone(), t.state_name(v).to_string()))
            .collect(),
        inverses: g.inverses().clone(),
        map: g.map().map(|m| {
            m.images
                .iter()
                .map(|(x, w)| (x.clone(), WordSpec::List(w.clone())))
                .collect()
        }),
    }
}

pub fn parse_group(text: &str) -> Result<Group> {
    group_from_file(&from_json(text, "group")?)
}

pub fn serialize_group(g: &Group) -> String {
    to_json(&group_to_file(g))
}

pub fn read_group(path: impl AsRef<Path>) -> Result<Group> {
    parse_group(&read(path.as_ref())?)
}
