use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::rc::Rc;

use serde::Serialize;

use super::grammar::Et0lGrammar;
use crate::error::{Error, Result};
use crate::symbol::Sym;

/// Limit on distinct search nodes before a search gives up.
const MAX_NODES: usize = 1 << 18;

/// Bounds for derivation searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Longest control word explored.
    pub max_control: usize,
    /// Longest sentential form kept by [`Et0lGrammar::derive_all`].
    pub max_form: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_control: 8,
            max_form: 64,
        }
    }
}

/// Outcome of a bounded membership query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Membership {
    /// Derivable; `certificate` is a control word (table names) that derives it.
    Yes { certificate: Vec<String> },
    /// Not derivable with a control word within the bound.
    NoWithinBounds,
    /// The search exhausted its node budget before reaching a verdict.
    Unknown,
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes { .. })
    }
}

/// Terminal words found by [`Et0lGrammar::enumerate_language`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageSample {
    pub words: BTreeSet<Vec<Sym>>,
    /// The search stopped early, so `words` may be incomplete even
    /// relative to the control bound.
    pub pruned: bool,
}

/// Terminal words of bounded length packed into integers: the length in the
/// top byte, the letters as base-`|Σ|` digits below it.
#[derive(Debug, Clone)]
struct Codec {
    digit: HashMap<Sym, u128>,
    base: u128,
    max_len: usize,
}

const LEN_SHIFT: u32 = 120;

impl Codec {
    fn new(terminals: &BTreeSet<Sym>, max_len: usize) -> Option<Self> {
        let base = terminals.len().max(1) as u128;
        base.checked_pow(max_len as u32).filter(|&p| p < 1 << LEN_SHIFT)?;
        Some(Codec {
            digit: terminals.iter().enumerate().map(|(i, &a)| (a, i as u128)).collect(),
            base,
            max_len,
        })
    }

    fn len(code: u128) -> usize {
        (code >> LEN_SHIFT) as usize
    }

    fn letter(&self, a: Sym) -> u128 {
        (1 << LEN_SHIFT) | self.digit[&a]
    }

    fn encode(&self, w: &[Sym]) -> Option<u128> {
        if w.len() > self.max_len {
            return None;
        }
        let mut code = 0;
        for a in w {
            code = code * self.base + self.digit.get(a)?;
        }
        Some(((w.len() as u128) << LEN_SHIFT) | code)
    }

    fn decode(&self, code: u128, letters: &[Sym]) -> Vec<Sym> {
        let mut rest = code & ((1 << LEN_SHIFT) - 1);
        let mut w = vec![0; Self::len(code)];
        for slot in w.iter_mut().rev() {
            *slot = letters[(rest % self.base) as usize];
            rest /= self.base;
        }
        w
    }

    /// `A · B` restricted to words within the length limit.
    fn concat(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let mask = (1u128 << LEN_SHIFT) - 1;
        let mut out = Vec::new();
        for &x in a {
            let lx = Self::len(x);
            for &y in b {
                let ly = Self::len(y);
                if lx + ly <= self.max_len {
                    let code = (x & mask) * self.base.pow(ly as u32) + (y & mask);
                    out.push((((lx + ly) as u128) << LEN_SHIFT) | code);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn product<'p>(&self, sets: impl IntoIterator<Item = &'p [u128]>) -> Vec<u128> {
        sets.into_iter()
            .fold(vec![0], |acc, s| if acc.is_empty() { acc } else { self.concat(&acc, s) })
    }
}

/// For a control suffix `v`, the words of bounded length each symbol
/// derives under `v`; symbols deriving nothing are omitted.
type Profile = Vec<(Sym, Rc<[u128]>)>;

fn lookup(p: &Profile, x: Sym) -> Option<&[u128]> {
    p.binary_search_by_key(&x, |e| e.0).ok().map(|i| &*p[i].1)
}

/// Rules of one table indexed for sparse application.
struct TableIndex {
    /// Heads with an empty body.
    erasing: Vec<Sym>,
    /// For each symbol, the rules (head, body index) whose body mentions it.
    by_letter: HashMap<Sym, Vec<(Sym, usize)>>,
}

/// Backward search over pairs of a control state and a profile: the
/// profile at a state is what the remaining control word does to each
/// symbol. Sibling occurrences share the control word, which is exactly
/// what a profile records.
struct Summaries<'g> {
    g: &'g Et0lGrammar,
    codec: Codec,
    index: Vec<TableIndex>,
    profiles: Vec<Rc<Profile>>,
    profile_ids: HashMap<Rc<Profile>, u32>,
}

impl<'g> Summaries<'g> {
    fn new(g: &'g Et0lGrammar, codec: Codec) -> Self {
        let index = g
            .tables
            .iter()
            .map(|t| {
                let mut erasing = Vec::new();
                let mut by_letter: HashMap<Sym, Vec<(Sym, usize)>> = HashMap::new();
                for (&x, bodies) in t.explicit_rules() {
                    if !g.rewritable[x as usize] {
                        continue;
                    }
                    for (i, b) in bodies.iter().enumerate() {
                        if b.is_empty() {
                            erasing.push(x);
                        }
                        let letters: BTreeSet<Sym> = b.iter().copied().collect();
                        for y in letters {
                            by_letter.entry(y).or_default().push((x, i));
                        }
                    }
                }
                TableIndex { erasing, by_letter }
            })
            .collect();
        Summaries {
            g,
            codec,
            index,
            profiles: Vec::new(),
            profile_ids: HashMap::new(),
        }
    }

    fn intern(&mut self, p: Profile) -> u32 {
        if let Some(&id) = self.profile_ids.get(&p) {
            return id;
        }
        let p = Rc::new(p);
        let id = self.profiles.len() as u32;
        self.profiles.push(p.clone());
        self.profile_ids.insert(p, id);
        id
    }

    fn empty_suffix(&mut self, keep: &[bool]) -> u32 {
        let p: Profile = self
            .g
            .terminals
            .iter()
            .filter(|&&a| keep[a as usize])
            .map(|&a| (a, Rc::from(vec![self.codec.letter(a)])))
            .collect();
        self.intern(p)
    }

    /// The profile of `t·v` given the profile of `v`, kept only on `keep`.
    fn apply(&mut self, t: usize, pid: u32, keep: &[bool]) -> u32 {
        let p = self.profiles[pid as usize].clone();
        let mut out: BTreeMap<Sym, Vec<u128>> = BTreeMap::new();
        for (x, set) in p.iter() {
            if keep[*x as usize] && self.g.choices(t, x).is_empty() {
                out.entry(*x).or_default().extend_from_slice(set);
            }
        }
        let ix = &self.index[t];
        let mut rules: BTreeSet<(Sym, usize)> = ix.erasing.iter().map(|&x| (x, usize::MAX)).collect();
        for (y, _) in p.iter() {
            if let Some(rs) = ix.by_letter.get(y) {
                rules.extend(rs.iter().copied());
            }
        }
        for (x, i) in rules {
            if !keep[x as usize] {
                continue;
            }
            if i == usize::MAX {
                out.entry(x).or_default().push(0);
                continue;
            }
            let body = &self.g.tables[t].explicit_rules()[&x][i];
            let sets: Option<Vec<&[u128]>> = body.iter().map(|&y| lookup(&p, y)).collect();
            if let Some(sets) = sets {
                let words = self.codec.product(sets);
                if !words.is_empty() {
                    out.entry(x).or_default().extend(words);
                }
            }
        }
        let profile: Profile = out
            .into_iter()
            .map(|(x, mut v)| {
                v.sort_unstable();
                v.dedup();
                (x, Rc::from(v))
            })
            .collect();
        self.intern(profile)
    }

    /// Words of bounded length derivable from `form` under the control
    /// suffix summarised by `pid`.
    fn words_of(&self, form: &[Sym], pid: u32) -> Vec<u128> {
        let p = &self.profiles[pid as usize];
        let sets: Option<Vec<&[u128]>> = form.iter().map(|&x| lookup(p, x)).collect();
        sets.map_or_else(Vec::new, |s| self.codec.product(s))
    }
}

/// Result of a summary search from a given form.
struct Found {
    words: BTreeSet<u128>,
    certificate: Option<Vec<usize>>,
    pruned: bool,
}

impl Et0lGrammar {
    /// Terminal words of length at most `max_word` derivable with a control
    /// word of length at most `bounds.max_control` in the rational control.
    ///
    /// The search runs backwards over control suffixes, recording for each
    /// symbol the short terminal words it derives, so erasing rules and
    /// long intermediate forms cost nothing extra.
    pub fn enumerate_language(&self, max_word: usize, bounds: Bounds) -> LanguageSample {
        let Some(codec) = Codec::new(&self.terminals, max_word) else {
            return LanguageSample {
                words: BTreeSet::new(),
                pruned: true,
            };
        };
        let letters: Vec<Sym> = self.terminals.iter().copied().collect();
        let found = self.summary_search(&[self.start], codec.clone(), None, bounds);
        LanguageSample {
            words: found.words.iter().map(|&c| codec.decode(c, &letters)).collect(),
            pruned: found.pruned,
        }
    }

    /// Bounded membership of the terminal word `w`.
    pub fn contains(&self, w: &[Sym], bounds: Bounds) -> Result<Membership> {
        self.contains_from(&[self.start], w, bounds)
    }

    /// Bounded membership of `w` among the words derivable from `from`
    /// (rather than from the start symbol) under the rational control.
    pub fn contains_from(&self, from: &[Sym], w: &[Sym], bounds: Bounds) -> Result<Membership> {
        self.check_form(from)?;
        if let Some(&s) = w.iter().find(|&&s| !self.terminals.contains(&s)) {
            return Err(Error::Alphabet(self.symbols.name(s).to_string()));
        }
        let Some(codec) = Codec::new(&self.terminals, w.len()) else {
            return Ok(Membership::Unknown);
        };
        let target = codec.encode(w).expect("terminal word within the length limit");
        let found = self.summary_search(from, codec, Some(target), bounds);
        Ok(match found.certificate {
            Some(c) => Membership::Yes {
                certificate: c.iter().map(|&t| self.tables[t].name().to_string()).collect(),
            },
            None if found.pruned => Membership::Unknown,
            None => Membership::NoWithinBounds,
        })
    }

    /// For each control state, the symbols that can occur in a form
    /// derived from `from` by a control prefix leading there.
    fn occurrences(&self, from: &[Sym]) -> Vec<Vec<bool>> {
        let nfa = &self.control_nfa;
        let n = self.symbols.len();
        let mut occurs = vec![vec![false; n]; nfa.num_states()];
        let mut work: Vec<(usize, Sym)> = from.iter().map(|&x| (nfa.initial(), x)).collect();
        while let Some((q, x)) = work.pop() {
            if std::mem::replace(&mut occurs[q][x as usize], true) {
                continue;
            }
            for (label, r) in nfa.edges(q) {
                let Some(t) = label else { continue };
                let bodies = self.choices(*t, &x);
                if bodies.is_empty() {
                    work.push((*r, x));
                }
                for y in bodies.iter().flatten() {
                    work.push((*r, *y));
                }
            }
        }
        occurs
    }

    fn summary_search(&self, from: &[Sym], codec: Codec, target: Option<u128>, bounds: Bounds) -> Found {
        let nfa = &self.control_nfa;
        let mut reverse: Vec<Vec<(usize, u32)>> = vec![Vec::new(); nfa.num_states()];
        for q in 0..nfa.num_states() {
            for (label, r) in nfa.edges(q) {
                if let Some(t) = label {
                    reverse[*r].push((*t, q as u32));
                }
            }
        }
        let occurs = self.occurrences(from);
        let mut s = Summaries::new(self, codec);
        let mut found = Found {
            words: BTreeSet::new(),
            certificate: None,
            pruned: false,
        };
        // Successor toward acceptance, with the table read on the way.
        let mut next: HashMap<(u32, u32), Option<(usize, (u32, u32))>> = HashMap::new();
        let mut frontier = VecDeque::new();
        for &q in nfa.accepting() {
            let root = s.empty_suffix(&occurs[q]);
            next.insert((q as u32, root), None);
            frontier.push_back(((q as u32, root), 0usize));
        }
        let initial = nfa.initial() as u32;
        let certificate = |mut node: (u32, u32), next: &HashMap<(u32, u32), Option<(usize, (u32, u32))>>| {
            let mut tables = Vec::new();
            while let Some(Some((t, succ))) = next.get(&node) {
                tables.push(*t);
                node = *succ;
            }
            tables
        };
        while let Some((node, depth)) = frontier.pop_front() {
            if node.0 == initial {
                let words = s.words_of(from, node.1);
                match target {
                    Some(w) => {
                        if words.binary_search(&w).is_ok() {
                            found.certificate = Some(certificate(node, &next));
                            return found;
                        }
                    }
                    None => found.words.extend(words),
                }
            }
            if depth == bounds.max_control {
                continue;
            }
            for &(t, q) in &reverse[node.0 as usize] {
                let pid = s.apply(t, node.1, &occurs[q as usize]);
                let prev = (q, pid);
                if next.contains_key(&prev) {
                    continue;
                }
                if next.len() >= MAX_NODES {
                    found.pruned = true;
                    return found;
                }
                next.insert(prev, Some((t, node)));
                frontier.push_back((prev, depth + 1));
            }
        }
        found
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::et0l::grammar::tests::power_grammar;

    fn bounds(max_control: usize, max_form: usize) -> Bounds {
        Bounds {
            max_control,
            max_form,
        }
    }

    /// `(a^n b^n)^m` restricted to length at most `max`.
    pub(crate) fn power_words(max: usize) -> BTreeSet<String> {
        let mut out = BTreeSet::from([String::new()]);
        for n in 1..=max {
            let block = "a".repeat(n) + &"b".repeat(n);
            let mut m = 1;
            while m * 2 * n <= max {
                out.insert(block.repeat(m));
                m += 1;
            }
        }
        out
    }

    fn rendered(g: &Et0lGrammar, words: &BTreeSet<Vec<Sym>>) -> BTreeSet<String> {
        words.iter().map(|w| g.render(w)).collect()
    }

    #[test]
    fn language_up_to_four() {
        let g = power_grammar();
        let s = g.enumerate_language(4, bounds(6, 32));
        assert_eq!(rendered(&g, &s.words), power_words(4));
        let s = g.enumerate_language(2, bounds(6, 32));
        assert_eq!(rendered(&g, &s.words), power_words(2));
    }

    #[test]
    fn membership_verdicts() {
        let g = power_grammar();
        let b = bounds(6, 32);
        assert_eq!(
            g.contains(&g.word("aabb").unwrap(), b).unwrap(),
            Membership::Yes {
                certificate: vec!["α".into(), "β".into(), "β".into(), "γ".into()]
            }
        );
        assert_eq!(
            g.contains(&g.word("ba").unwrap(), b).unwrap(),
            Membership::NoWithinBounds
        );
        assert!(g.contains(&[], b).unwrap().is_yes());
        let s = g.sym("S").unwrap();
        assert!(matches!(g.contains(&[s], b), Err(Error::Alphabet(_))));
    }

    #[test]
    fn erasing_derivations_with_long_control_are_fast() {
        let g = power_grammar();
        let s = g.enumerate_language(6, bounds(40, 8));
        assert!(!s.pruned);
        assert_eq!(rendered(&g, &s.words), power_words(6));
    }

    #[test]
    fn no_terminal_rules_gives_empty_language() {
        let g = Et0lGrammar::from_names(
            &["a"],
            &["S", "T"],
            "S",
            &[("t", &[("S", &["S T"]), ("T", &["T"])])],
            "t*",
        )
        .unwrap();
        let s = g.enumerate_language(4, bounds(4, 16));
        assert!(s.words.is_empty());
    }

    #[test]
    fn dead_symbol_never_finishes() {
        let g = Et0lGrammar::from_names(
            &["a"],
            &["S", crate::et0l::DEAD],
            "S",
            &[("t", &[("S", &["a", ""])])],
            "t*",
        )
        .unwrap();
        let d = g.sym(crate::et0l::DEAD).unwrap();
        let s = g.sym("S").unwrap();
        let a = g.sym("a").unwrap();
        for target in [vec![], vec![a], vec![a, a]] {
            assert_eq!(
                g.contains_from(&[s, d], &target, bounds(5, 8)).unwrap(),
                Membership::NoWithinBounds
            );
        }
        assert!(g.contains_from(&[s, s], &[a], bounds(5, 8)).unwrap().is_yes());
    }
}
