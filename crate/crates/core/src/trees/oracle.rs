use std::collections::HashSet;

use serde::Serialize;

use super::automaton::{Letter, SigmaAutomaton, Vertex};

/// Summary of the restriction tuples reachable from a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TupleSpace {
    /// The word acts as the identity on the whole tree.
    pub trivial: bool,
    /// Distinct reachable tuples (identity states dropped).
    pub tuples: usize,
    /// For a trivial word, the largest level at which a new tuple first
    /// appears; otherwise the level of the first tuple that moves a letter,
    /// so a witness of length `diameter + 1` exists.
    pub diameter: usize,
}

impl SigmaAutomaton {
    /// Drops identity states, which act trivially and restrict to themselves.
    fn reduce(&self, t: impl IntoIterator<Item = Vertex>) -> Vec<Vertex> {
        t.into_iter().filter(|&q| q != self.identity()).collect()
    }

    /// Image of `x` under the tuple, first state acting first.
    fn tuple_image(&self, t: &[Vertex], x: Letter) -> Letter {
        t.iter().fold(x, |y, &q| self.perm(q)[y])
    }

    fn tuple_moves(&self, t: &[Vertex]) -> Option<Letter> {
        (0..self.degree()).find(|&x| self.tuple_image(t, x) != x)
    }

    /// Restriction of the tuple's composite to the subtree below `x`.
    fn tuple_child(&self, t: &[Vertex], x: Letter) -> Vec<Vertex> {
        let mut y = x;
        self.reduce(t.iter().map(|&q| {
            let c = self.child(q, y);
            y = self.perm(q)[y];
            c
        }))
    }

    /// Level-by-level exploration of restriction tuples. `visit` sees each
    /// new tuple with the lexicographically least vertex reaching it, in
    /// shortlex order of vertices; returning `true` stops the walk.
    fn walk_tuples(&self, word: &[Vertex], mut visit: impl FnMut(&[Vertex], &[Letter]) -> bool) -> (usize, usize) {
        let root = self.reduce(word.iter().copied());
        let mut seen = HashSet::from([root.clone()]);
        let mut level = vec![(root, Vec::new())];
        let mut depth = 0;
        loop {
            for (t, v) in &level {
                if visit(t, v) {
                    return (seen.len(), depth);
                }
            }
            let mut next = Vec::new();
            for (t, v) in &level {
                for x in 0..self.degree() {
                    let c = self.tuple_child(t, x);
                    if !seen.contains(&c) {
                        seen.insert(c.clone());
                        let mut u = v.clone();
                        u.push(x);
                        next.push((c, u));
                    }
                }
            }
            if next.is_empty() {
                return (seen.len(), depth);
            }
            depth += 1;
            level = next;
        }
    }

    /// Explores every reachable tuple (stopping early if one moves a letter).
    pub fn tuple_space(&self, word: &[Vertex]) -> TupleSpace {
        let mut trivial = true;
        let (tuples, diameter) = self.walk_tuples(word, |t, _| {
            trivial = self.tuple_moves(t).is_none();
            !trivial
        });
        TupleSpace {
            trivial,
            tuples,
            diameter,
        }
    }

    /// Whether the word acts trivially on every vertex. Exact: the word is
    /// trivial iff every reachable restriction tuple fixes the first level.
    pub fn is_trivial(&self, word: &[Vertex]) -> bool {
        self.tuple_space(word).trivial
    }

    /// The shortlex-least vertex of length at most `max_depth` moved by the
    /// word.
    pub fn find_witness(&self, word: &[Vertex], max_depth: usize) -> Option<Vec<Letter>> {
        let mut witness = None;
        self.walk_tuples(word, |t, v| {
            if v.len() >= max_depth {
                return true;
            }
            if let Some(x) = self.tuple_moves(t) {
                let mut w = v.to_vec();
                w.push(x);
                witness = Some(w);
                return true;
            }
            false
        });
        witness
    }
}
