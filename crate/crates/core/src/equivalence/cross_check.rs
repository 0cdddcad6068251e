use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::cspd::{Caps, CspdMachine};
use crate::error::Result;
use crate::et0l::{Bounds, Et0lGrammar, Membership};
use crate::symbol::Sym;

/// Search limits for [`cross_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrossCheckOptions {
    pub bounds: Bounds,
    /// Longest check-stack tried by the machine.
    pub max_check: usize,
    pub caps: Caps,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        CrossCheckOptions {
            bounds: Bounds::default(),
            max_check: 8,
            caps: Caps::default(),
        }
    }
}

/// A word on which the grammar and the machine gave different verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub word: String,
    pub grammar: bool,
    pub machine: bool,
    /// Control word deriving the word, if the grammar accepted.
    pub certificate: Option<Vec<String>>,
    /// Check-stack of an accepting run, if the machine accepted.
    pub witness: Option<String>,
}

/// Outcome of comparing two languages on all short words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub max_len: usize,
    pub words_checked: usize,
    pub accepted_by_both: usize,
    pub disagreements: Vec<Disagreement>,
    /// Words the grammar search could not decide within its bounds.
    pub inconclusive: Vec<String>,
    /// Some machine run hit its height cap.
    pub machine_capped: bool,
}

impl CrossCheckReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the grammar and the machine on every word of length at most
/// `max_len` over the grammar's terminals. Terminals and input letters are
/// matched by name; a word using a letter the machine lacks is rejected by
/// it.
pub fn cross_check(
    g: &Et0lGrammar,
    m: &CspdMachine,
    max_len: usize,
    options: CrossCheckOptions,
) -> Result<CrossCheckReport> {
    let sample = g.enumerate_language(max_len, options.bounds);
    let letters: Vec<Sym> = g.terminals().iter().copied().collect();
    let mut words: Vec<Vec<Sym>> = vec![Vec::new()];
    let mut layer = words.clone();
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        words.extend(layer.iter().cloned());
    }
    let outcomes: Vec<Result<Outcome>> = words
        .par_iter()
        .map(|w| compare(g, m, w, &sample.words, sample.pruned, options))
        .collect();
    let mut report = CrossCheckReport {
        max_len,
        words_checked: words.len(),
        accepted_by_both: 0,
        disagreements: Vec::new(),
        inconclusive: Vec::new(),
        machine_capped: false,
    };
    for (w, outcome) in words.iter().zip(outcomes) {
        let outcome = outcome?;
        report.machine_capped |= outcome.capped;
        let text = g.render(w);
        match outcome.grammar {
            None => report.inconclusive.push(text),
            Some(gv) if gv == outcome.machine => report.accepted_by_both += usize::from(gv),
            Some(gv) => report.disagreements.push(Disagreement {
                word: text,
                grammar: gv,
                machine: outcome.machine,
                certificate: outcome.certificate,
                witness: outcome.witness,
            }),
        }
    }
    Ok(report)
}

struct Outcome {
    grammar: Option<bool>,
    machine: bool,
    certificate: Option<Vec<String>>,
    witness: Option<String>,
    capped: bool,
}

fn compare(
    g: &Et0lGrammar,
    m: &CspdMachine,
    w: &[Sym],
    found: &BTreeSet<Vec<Sym>>,
    pruned: bool,
    options: CrossCheckOptions,
) -> Result<Outcome> {
    let (grammar, certificate) = if found.contains(w) || pruned {
        match g.contains(w, options.bounds)? {
            Membership::Yes { certificate } => (Some(true), Some(certificate)),
            Membership::NoWithinBounds => (Some(false), None),
            Membership::Unknown => (None, None),
        }
    } else {
        (Some(false), None)
    };
    let input: Option<Vec<Sym>> = w
        .iter()
        .map(|&a| m.symbols.get(g.symbols().name(a)).filter(|s| m.input_alphabet.contains(s)))
        .collect();
    let (machine, witness, capped) = match input {
        None => (false, None, false),
        Some(input) => {
            let run = m.accepts_any(&input, options.max_check, options.caps)?;
            let witness = run.witness.as_deref().map(|c| m.render(c));
            (run.accepted, witness, run.capped)
        }
    };
    Ok(Outcome {
        grammar,
        machine,
        certificate,
        witness,
        capped,
    })
}
