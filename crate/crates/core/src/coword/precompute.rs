use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trees::{Classification, Letter, SigmaAutomaton, SpineDecomp, Vertex};

/// A finitary automorphism tabulated on the levels where it acts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitaryData {
    pub name: String,
    pub state: Vertex,
    pub depth: usize,
    /// Image of every vertex of length at most `depth`.
    pub table: BTreeMap<Vec<Letter>, Vec<Letter>>,
}

impl FinitaryData {
    /// Image of a vertex of length at most `depth`.
    pub fn image(&self, u: &[Letter]) -> &[Letter] {
        &self.table[u]
    }

    /// Image of any vertex: the tabulated prefix, the rest unchanged.
    pub fn apply(&self, v: &[Letter]) -> Vec<Letter> {
        let k = self.depth.min(v.len());
        let mut out = self.image(&v[..k]).to_vec();
        out.extend_from_slice(&v[k..]);
        out
    }
}

/// Data for leaving the spine: after the spine prefix, the next letter is
/// `letter` instead of the spine's.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OffSpine {
    pub letter: Letter,
    /// `δ'(a)` for the restriction `δ'` at this spine position.
    pub image: Letter,
    /// `δ'|_a`, finitary.
    pub rest: FinitaryData,
}

/// A directed automorphism prepared for the machine: its spine and, for
/// every spine position, how to leave it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedData {
    pub name: String,
    pub state: Vertex,
    pub spine: SpineDecomp,
    /// For `0 ≤ i ≤ |ι|`: leaving after `ι_1…ι_i`.
    pub iota_exits: Vec<Vec<OffSpine>>,
    /// For `1 ≤ j ≤ |π|` (index `j - 1`): leaving after `ι π^k π_1…π_j`.
    pub pi_exits: Vec<Vec<OffSpine>>,
}

impl DirectedData {
    /// The spine letter expected after `ι_1…ι_i`.
    pub fn next_after_iota(&self, i: usize) -> Letter {
        self.spine.iota.get(i).copied().unwrap_or(self.spine.pi[0])
    }

    /// The spine letter expected after `… π_1…π_j`.
    pub fn next_after_pi(&self, j: usize) -> Letter {
        self.spine.pi[j % self.spine.pi.len()]
    }
}

/// Tabulates the finitary automorphism at `s`.
pub fn precompute_finitary(t: &SigmaAutomaton, name: &str, s: Vertex) -> Result<FinitaryData> {
    let class = t.classify(s);
    let Classification::Finitary { depth } = class else {
        return Err(Error::Classification {
            name: name.to_string(),
            expected: "finitary",
            found: class.label().to_string(),
        });
    };
    let mut table = BTreeMap::new();
    let mut level: Vec<Vec<Letter>> = vec![Vec::new()];
    for len in 0..=depth {
        for u in &level {
            table.insert(u.clone(), t.apply(s, u));
        }
        if len < depth {
            level = level
                .iter()
                .flat_map(|u| {
                    (0..t.degree()).map(move |x| {
                        let mut v = u.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
    }
    Ok(FinitaryData {
        name: name.to_string(),
        state: s,
        depth,
        table,
    })
}

/// Spine decomposition of the directed automorphism at `s` plus the
/// finitary restrictions off the spine.
pub fn precompute_directed(t: &SigmaAutomaton, name: &str, s: Vertex) -> Result<DirectedData> {
    let spine = t.spine_decompose(s).map_err(|e| match e {
        Error::Classification { expected, found, .. } => Error::Classification {
            name: name.to_string(),
            expected,
            found,
        },
        other => other,
    })?;
    let exits = |q: Vertex, next: Letter, at: String| -> Result<Vec<OffSpine>> {
        (0..t.degree())
            .filter(|&a| a != next)
            .map(|a| {
                Ok(OffSpine {
                    letter: a,
                    image: t.perm(q)[a],
                    rest: precompute_finitary(t, &format!("{at}{}", t.alphabet()[a]), t.child(q, a))?,
                })
            })
            .collect()
    };
    let mut data = DirectedData {
        name: name.to_string(),
        state: s,
        spine,
        iota_exits: Vec::new(),
        pi_exits: Vec::new(),
    };
    for (i, &q) in data.spine.iota_restrictions.iter().enumerate() {
        let at = format!("{name}|{}", t.render(&data.spine.iota[..i]));
        data.iota_exits.push(exits(q, data.next_after_iota(i), at)?);
    }
    for (j, &q) in data.spine.pi_restrictions.iter().enumerate() {
        let at = format!(
            "{name}|{}{}",
            t.render(&data.spine.iota),
            t.render(&data.spine.pi[..=j])
        );
        data.pi_exits.push(exits(q, data.next_after_pi(j + 1), at)?);
    }
    Ok(data)
}
