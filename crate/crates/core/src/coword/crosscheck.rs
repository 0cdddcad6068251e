use rayon::prelude::*;
use serde::Serialize;

use super::machine::CowordMachine;
use crate::cspd::Caps;
use crate::error::{Error, Result};
use crate::trees::Group;

/// Limits for [`crosscheck_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CowordOptions {
    /// Longest input word.
    pub max_len: usize,
    /// Smallest check-stack bound tried; each word also gets its tuple-space
    /// diameter plus two.
    pub max_check: usize,
    pub caps: Caps,
}

impl Default for CowordOptions {
    fn default() -> Self {
        CowordOptions {
            max_len: 3,
            max_check: 2,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CowordDisagreement {
    pub word: Vec<String>,
    /// The oracle's verdict.
    pub trivial: bool,
    pub accepted: bool,
    /// Vertex moved by the word, when the machine accepted.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CowordReport {
    pub max_len: usize,
    pub words_checked: usize,
    pub nontrivial: usize,
    pub disagreements: Vec<CowordDisagreement>,
    /// Accepted words whose witness vertex is fixed by the word.
    pub invalid_witnesses: Vec<CowordDisagreement>,
    pub machine_capped: bool,
}

impl CowordReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty() && self.invalid_witnesses.is_empty()
    }
}

/// All words of length at most `max_len` over `letters`, shortlex.
pub fn words_up_to(letters: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::<String>::new()];
    for _ in 0..max_len {
        level = level
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |x| {
                    let mut v = w.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

/// Compares the machine with the restriction-tuple oracle on every input
/// word up to the length bound. Words over a source alphabet go through the
/// group's generator map when the machine reads that alphabet.
pub fn crosscheck_oracle(group: &Group, cm: &CowordMachine, options: CowordOptions) -> Result<CowordReport> {
    let m = &cm.machine;
    let letters: Vec<String> = m.input_alphabet.iter().map(|&s| m.symbols.name(s).to_string()).collect();
    let to_generators = |w: &[String]| -> Result<Vec<String>> {
        if w.iter().all(|x| group.generators().contains_key(x)) {
            Ok(w.to_vec())
        } else {
            group
                .map()
                .ok_or_else(|| Error::Alphabet(w.join(" ")))?
                .apply(w)
        }
    };
    let t = group.automaton();
    let words = words_up_to(&letters, options.max_len);
    let results = words
        .par_iter()
        .map(|w| -> Result<(CowordDisagreement, bool, bool)> {
            let states = group.resolve(&to_generators(w)?)?;
            let space = t.tuple_space(&states);
            let input: Vec<_> = w.iter().map(|x| m.sym(x)).collect::<Result<_>>()?;
            let bound = options.max_check.max(space.diameter + 2);
            let run = m.accepts_any(&input, bound, options.caps)?;
            let vertex = run.witness.as_deref().map(|c| cm.witness_vertex(c)).transpose()?;
            let valid = vertex
                .as_ref()
                .is_none_or(|v| t.eval_vertex(&states, v) != *v);
            Ok((
                CowordDisagreement {
                    word: w.clone(),
                    trivial: space.trivial,
                    accepted: run.accepted,
                    witness: vertex.map(|v| t.render(&v)),
                },
                valid,
                run.capped,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = CowordReport {
        max_len: options.max_len,
        words_checked: results.len(),
        ..Default::default()
    };
    for (d, valid, capped) in results {
        report.machine_capped |= capped;
        if !d.trivial {
            report.nontrivial += 1;
        }
        if !valid {
            report.invalid_witnesses.push(d);
        } else if d.trivial == d.accepted {
            report.disagreements.push(d);
        }
    }
    Ok(report)
}
