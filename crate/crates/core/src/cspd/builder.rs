use std::collections::BTreeSet;

use super::machine::{CspdMachine, PushSym, State, Transition, Trigger, BOTTOM};
use crate::error::{Error, Result};
use crate::regular::Regex;
use crate::symbol::{split_word, Sym, SymbolTable};

/// Assembles a machine from names. Words are written as in
/// [`split_word`]; the bottom symbol is spelled `#b`.
#[derive(Debug, Clone, Default)]
pub struct MachineBuilder {
    symbols: SymbolTable,
    states: Vec<String>,
    input: BTreeSet<Sym>,
    pushdown: BTreeSet<Sym>,
    check: BTreeSet<Sym>,
    language: Option<String>,
    transitions: Vec<Transition>,
    start: Option<State>,
    accepting: BTreeSet<State>,
}

impl MachineBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares (or looks up) a state.
    pub fn state(&mut self, name: &str) -> State {
        match self.states.iter().position(|s| s == name) {
            Some(q) => q,
            None => {
                self.states.push(name.to_string());
                self.states.len() - 1
            }
        }
    }

    fn declare(&mut self, names: &[&str]) -> Vec<Sym> {
        names.iter().map(|n| self.symbols.intern(n)).collect()
    }

    pub fn input_alphabet(&mut self, names: &[&str]) -> &mut Self {
        let s = self.declare(names);
        self.input.extend(s);
        self
    }

    pub fn pushdown_alphabet(&mut self, names: &[&str]) -> &mut Self {
        let s = self.declare(names);
        self.pushdown.extend(s);
        self
    }

    pub fn check_alphabet(&mut self, names: &[&str]) -> &mut Self {
        let s = self.declare(names);
        self.check.extend(s);
        self
    }

    pub fn check_language(&mut self, regex: &str) -> &mut Self {
        self.language = Some(regex.to_string());
        self
    }

    pub fn start(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.start = Some(q);
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.accepting.insert(q);
        self
    }

    /// A declared symbol.
    pub fn lookup(&self, name: &str) -> Result<Sym> {
        self.symbols
            .get(name)
            .ok_or_else(|| Error::schema("machine.transitions", format!("undeclared symbol `{name}`")))
    }

    fn words(&self, text: &str) -> Vec<String> {
        split_word(text, |n| n == BOTTOM || self.symbols.get(n).is_some())
    }

    fn transition(&mut self, from: &str, reads: &str, trigger: Trigger, to: &str, push: &str) -> Result<&mut Self> {
        let (reads, push) = (self.words(reads), self.words(push));
        self.transition_names(from, &reads, trigger, to, &push)
    }

    /// Adds a transition with its words given as lists of names.
    pub fn transition_names(
        &mut self,
        from: &str,
        reads: &[String],
        trigger: Trigger,
        to: &str,
        push: &[String],
    ) -> Result<&mut Self> {
        let reads = reads
            .iter()
            .map(|n| self.lookup(n))
            .collect::<Result<Vec<_>>>()?;
        let push = push
            .iter()
            .map(|n| {
                if n == BOTTOM {
                    Ok(PushSym::Bottom)
                } else {
                    self.lookup(n).map(PushSym::Sym)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let from = self.state(from);
        let to = self.state(to);
        self.transitions.push(Transition {
            from,
            reads,
            trigger,
            to,
            push,
        });
        Ok(self)
    }

    /// Transition triggered at the bottom of both stacks; `push` must end
    /// with `#b`.
    pub fn bottom(&mut self, from: &str, reads: &str, to: &str, push: &str) -> Result<&mut Self> {
        self.transition(from, reads, Trigger::Bottom, to, push)
    }

    /// Transition triggered by check-stack letter `check` and pushdown top `top`.
    pub fn pair(&mut self, from: &str, reads: &str, check: &str, top: &str, to: &str, push: &str) -> Result<&mut Self> {
        let trigger = Trigger::Pair {
            check: self.lookup(check)?,
            top: self.lookup(top)?,
        };
        self.transition(from, reads, trigger, to, push)
    }

    /// Transition that consults neither stack.
    pub fn free(&mut self, from: &str, reads: &str, to: &str, push: &str) -> Result<&mut Self> {
        self.transition(from, reads, Trigger::Free, to, push)
    }

    /// The machine, without structural validation (see
    /// [`CspdMachine::validate`]).
    pub fn build(&self) -> Result<CspdMachine> {
        let names: BTreeSet<String> = self
            .check
            .iter()
            .map(|&s| self.symbols.name(s).to_string())
            .collect();
        let text = self.language.as_deref().unwrap_or("()");
        let language = Regex::parse(text, &names)
            .map_err(|e| Error::schema("machine.checkstack_language", e.to_string()))?
            .map_symbols(&|n: &String| self.symbols.get(n).expect("declared"));
        Ok(CspdMachine {
            states: self.states.clone(),
            symbols: self.symbols.clone(),
            input_alphabet: self.input.clone(),
            pushdown_alphabet: self.pushdown.clone(),
            check_alphabet: self.check.clone(),
            check_language: language,
            transitions: self.transitions.clone(),
            start: self
                .start
                .ok_or_else(|| Error::schema("machine.start", "no start state"))?,
            accepting: self.accepting.clone(),
        })
    }
}
