use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// A vertex of a Σ-automaton; paired with its automaton it names a tree
/// automorphism.
pub type Vertex = usize;
/// Index of a letter in the alphabet Σ.
pub type Letter = usize;

/// A Σ-automaton: every vertex carries a permutation of Σ (the output letter
/// for each input letter) and one child per input letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaAutomaton {
    alphabet: Vec<String>,
    names: Vec<String>,
    perms: Vec<Vec<Letter>>,
    children: Vec<Vec<Vertex>>,
    identity: Vertex,
    letter_index: HashMap<String, Letter>,
    vertex_index: HashMap<String, Vertex>,
}

/// A state of a Σ-automaton given by names, as in a group file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    pub name: String,
    /// Output letter for each input letter, in alphabet order.
    pub perm: Vec<String>,
    /// Target state for each input letter, in alphabet order.
    pub children: Vec<String>,
}

/// `α = (α_1, …, α_d) · σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WreathDecomp {
    /// Image of each letter on the first level.
    pub perm: Vec<Letter>,
    /// Restriction to each first-level subtree.
    pub children: Vec<Vertex>,
}

impl SigmaAutomaton {
    /// Validates and builds an automaton. The identity state must fix every
    /// letter and loop to itself.
    pub fn new(alphabet: Vec<String>, states: Vec<StateSpec>, identity: &str) -> Result<Self> {
        if alphabet.len() < 2 {
            return Err(Error::schema("alphabet", "at least two letters are required"));
        }
        let mut letter_index = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            if letter_index.insert(a.clone(), i).is_some() {
                return Err(Error::schema("alphabet", format!("duplicate letter `{a}`")));
            }
        }
        let mut vertex_index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if vertex_index.insert(s.name.clone(), i).is_some() {
                return Err(Error::schema("states", format!("duplicate state `{}`", s.name)));
            }
        }
        let d = alphabet.len();
        let mut perms = Vec::with_capacity(states.len());
        let mut children = Vec::with_capacity(states.len());
        for s in &states {
            let at = format!("states.{}", s.name);
            if s.perm.len() != d {
                return Err(Error::Permutation(s.name.clone()));
            }
            let perm: Vec<Letter> = s
                .perm
                .iter()
                .map(|a| letter_index.get(a).copied().ok_or_else(|| Error::Permutation(s.name.clone())))
                .collect::<Result<_>>()?;
            let mut seen = vec![false; d];
            for &x in &perm {
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Permutation(s.name.clone()));
                }
            }
            if s.children.len() != d {
                return Err(Error::schema(at, format!("expected {d} children")));
            }
            let kids: Vec<Vertex> = s
                .children
                .iter()
                .map(|c| {
                    vertex_index
                        .get(c)
                        .copied()
                        .ok_or_else(|| Error::schema(at.clone(), format!("unknown child state `{c}`")))
                })
                .collect::<Result<_>>()?;
            perms.push(perm);
            children.push(kids);
        }
        let identity = *vertex_index
            .get(identity)
            .ok_or_else(|| Error::schema("identity", format!("unknown state `{identity}`")))?;
        let fixes = perms[identity].iter().enumerate().all(|(i, &x)| i == x);
        if !fixes || children[identity].iter().any(|&c| c != identity) {
            return Err(Error::schema(
                "identity",
                "the identity state must fix every letter and loop to itself",
            ));
        }
        Ok(SigmaAutomaton {
            alphabet,
            names: states.into_iter().map(|s| s.name).collect(),
            perms,
            children,
            identity,
            letter_index,
            vertex_index,
        })
    }

    /// Builds from `(name, perm, children)` triples of names.
    pub fn from_names(alphabet: &[&str], states: &[(&str, &[&str], &[&str])], identity: &str) -> Result<Self> {
        let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        SigmaAutomaton::new(
            strings(alphabet),
            states
                .iter()
                .map(|(n, p, c)| StateSpec {
                    name: n.to_string(),
                    perm: strings(p),
                    children: strings(c),
                })
                .collect(),
            identity,
        )
    }

    /// The states as named specifications, in declaration order.
    pub fn state_specs(&self) -> Vec<StateSpec> {
        (0..self.names.len())
            .map(|s| StateSpec {
                name: self.names[s].clone(),
                perm: self.perms[s].iter().map(|&x| self.alphabet[x].clone()).collect(),
                children: self.children[s].iter().map(|&c| self.names[c].clone()).collect(),
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> Vertex {
        self.identity
    }

    pub fn state_name(&self, s: Vertex) -> &str {
        &self.names[s]
    }

    pub fn state(&self, name: &str) -> Result<Vertex> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Alphabet(name.to_string()))
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.letter_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Alphabet(name.to_string()))
    }

    /// Parses a tree vertex: space-separated letters, or one character per
    /// letter when there are no spaces.
    pub fn vertex(&self, text: &str) -> Result<Vec<Letter>> {
        crate::symbol::split_word(text, |n| self.letter_index.contains_key(n))
            .iter()
            .map(|n| self.letter(n))
            .collect()
    }

    /// Renders a vertex, compactly when every letter is one character.
    pub fn render(&self, v: &[Letter]) -> String {
        let sep = if self.alphabet.iter().all(|a| a.chars().count() == 1) {
            ""
        } else {
            " "
        };
        v.iter().map(|&x| self.alphabet[x].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn perm(&self, s: Vertex) -> &[Letter] {
        &self.perms[s]
    }

    pub fn child(&self, s: Vertex, x: Letter) -> Vertex {
        self.children[s][x]
    }

    pub fn wreath_decompose(&self, s: Vertex) -> WreathDecomp {
        WreathDecomp {
            perm: self.perms[s].clone(),
            children: self.children[s].clone(),
        }
    }

    /// The state reached by following the path labelled by `v`.
    pub fn restrict(&self, s: Vertex, v: &[Letter]) -> Vertex {
        v.iter().fold(s, |q, &x| self.children[q][x])
    }

    /// Image of the vertex `v` under the automorphism at state `s`.
    pub fn apply(&self, s: Vertex, v: &[Letter]) -> Vec<Letter> {
        let mut q = s;
        v.iter()
            .map(|&x| {
                let y = self.perms[q][x];
                q = self.children[q][x];
                y
            })
            .collect()
    }

    /// Image of `v` under a word of automorphisms, the first acting first.
    pub fn eval_vertex(&self, word: &[Vertex], v: &[Letter]) -> Vec<Letter> {
        word.iter().fold(v.to_vec(), |u, &s| self.apply(s, &u))
    }

    /// Number of level-`k` vertices at which the restriction of `s` is not
    /// the identity state.
    pub fn nontrivial_restrictions(&self, s: Vertex, k: usize) -> u128 {
        let mut count = vec![0u128; self.num_states()];
        count[s] = 1;
        for _ in 0..k {
            let mut next = vec![0u128; self.num_states()];
            for (q, &c) in count.iter().enumerate() {
                if c > 0 {
                    for &r in &self.children[q] {
                        next[r] += c;
                    }
                }
            }
            count = next;
        }
        count
            .iter()
            .enumerate()
            .filter(|&(q, _)| q != self.identity)
            .map(|(_, &c)| c)
            .sum()
    }
}
