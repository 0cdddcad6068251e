use std::collections::HashMap;

use serde::Serialize;

use super::automaton::{Letter, SigmaAutomaton, Vertex};
use crate::error::{Error, Result};

/// Where an automorphism sits relative to the finitary and directed classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// Trivial below level `depth`.
    Finitary { depth: usize },
    /// Finitary off one child, whose letter is `direction`, and directed there.
    Directed { direction: Letter },
    Neither,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Finitary { .. } => "finitary",
            Classification::Directed { .. } => "directed",
            Classification::Neither => "neither",
        }
    }
}

/// Eventually periodic spine `ι π^ω` of a directed automorphism with the
/// images `I`, `Π` of its sections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpineDecomp {
    /// Initial section ι.
    pub iota: Vec<Letter>,
    /// Periodic section π (non-empty).
    pub pi: Vec<Letter>,
    /// `I_i = δ|_{ι_1…ι_{i-1}}(ι_i)`.
    pub iota_image: Vec<Letter>,
    /// `Π_j = δ|_{ι π_1…π_{j-1}}(π_j)`.
    pub pi_image: Vec<Letter>,
    /// `δ|_{ι_1…ι_i}` for `0 ≤ i ≤ |ι|`.
    pub iota_restrictions: Vec<Vertex>,
    /// `δ|_{ι π_1…π_j}` for `1 ≤ j ≤ |π|`; the last equals `δ|_ι`.
    pub pi_restrictions: Vec<Vertex>,
}

impl SigmaAutomaton {
    /// Finitary depth of `s`: the longest path to the identity state, or
    /// `None` if a non-identity cycle is reachable.
    pub fn finitary_depth(&self, s: Vertex) -> Option<usize> {
        fn visit(
            a: &SigmaAutomaton,
            q: Vertex,
            memo: &mut HashMap<Vertex, Option<usize>>,
            on_path: &mut Vec<bool>,
        ) -> Option<usize> {
            if q == a.identity() {
                return Some(0);
            }
            if let Some(&d) = memo.get(&q) {
                return d;
            }
            if on_path[q] {
                return None;
            }
            on_path[q] = true;
            let mut depth = Some(0);
            for x in 0..a.degree() {
                depth = match (depth, visit(a, a.child(q, x), memo, on_path)) {
                    (Some(d), Some(c)) => Some(d.max(c + 1)),
                    _ => None,
                };
            }
            on_path[q] = false;
            memo.insert(q, depth);
            depth
        }
        visit(self, s, &mut HashMap::new(), &mut vec![false; self.num_states()])
    }

    /// Finitary, directed, or neither. Directed means: not finitary, exactly
    /// one child not finitary, and the same holds along that child forever.
    pub fn classify(&self, s: Vertex) -> Classification {
        if let Some(depth) = self.finitary_depth(s) {
            return Classification::Finitary { depth };
        }
        match self.spine_walk(s) {
            Some((letters, _)) => Classification::Directed { direction: letters[0] },
            None => Classification::Neither,
        }
    }

    /// The unique non-finitary child, if there is exactly one.
    fn direction(&self, q: Vertex) -> Option<Letter> {
        let mut found = None;
        for x in 0..self.degree() {
            if self.finitary_depth(self.child(q, x)).is_none() {
                if found.is_some() {
                    return None;
                }
                found = Some(x);
            }
        }
        found
    }

    /// Follows directions from `s` until a state repeats. Returns the
    /// letters followed and the visited states (one more than letters, the
    /// last being the first repeat).
    fn spine_walk(&self, s: Vertex) -> Option<(Vec<Letter>, Vec<Vertex>)> {
        let mut letters = Vec::new();
        let mut states = vec![s];
        let mut q = s;
        loop {
            let x = self.direction(q)?;
            letters.push(x);
            q = self.child(q, x);
            let repeat = states.contains(&q);
            states.push(q);
            if repeat {
                return Some((letters, states));
            }
        }
    }

    /// Splits the spine of the directed automorphism at `s` into `ι π^ω`,
    /// cutting at the first repeated restriction state.
    pub fn spine_decompose(&self, s: Vertex) -> Result<SpineDecomp> {
        let class = self.classify(s);
        let Classification::Directed { .. } = class else {
            return Err(Error::Classification {
                name: self.state_name(s).to_string(),
                expected: "directed",
                found: class.label().to_string(),
            });
        };
        let (letters, states) = self.spine_walk(s).expect("directed");
        let m = letters.len();
        let n = states.iter().position(|&q| q == states[m]).expect("repeat");
        let image = |i: usize| self.perm(states[i])[letters[i]];
        Ok(SpineDecomp {
            iota: letters[..n].to_vec(),
            pi: letters[n..].to_vec(),
            iota_image: (0..n).map(image).collect(),
            pi_image: (n..m).map(image).collect(),
            iota_restrictions: states[..=n].to_vec(),
            pi_restrictions: states[n + 1..=m].to_vec(),
        })
    }
}
