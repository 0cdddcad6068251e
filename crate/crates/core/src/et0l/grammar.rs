use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::regular::{Nfa, Regex};
use crate::symbol::{split_word, Sym, SymbolTable};

/// Name of the dead-end non-terminal. Every table maps it to itself only.
pub const DEAD: &str = "#dead";

/// A named set of context-free replacement rules, applied in parallel.
///
/// A rewritable symbol without an explicit rule is replaced by itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    name: String,
    rules: BTreeMap<Sym, Vec<Vec<Sym>>>,
}

impl Table {
    pub fn new(name: impl Into<String>) -> Self {
        Table {
            name: name.into(),
            rules: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_rule(&mut self, head: Sym, body: Vec<Sym>) {
        let bodies = self.rules.entry(head).or_default();
        if !bodies.contains(&body) {
            bodies.push(body);
        }
    }

    /// Explicit rules; symbols missing here use the identity rule.
    pub fn explicit_rules(&self) -> &BTreeMap<Sym, Vec<Vec<Sym>>> {
        &self.rules
    }

    /// Replacements for `x`, or `None` when only the implicit `x -> x` applies.
    pub fn replacements(&self, x: Sym) -> Option<&[Vec<Sym>]> {
        self.rules.get(&x).map(Vec::as_slice)
    }
}

/// An ET0L grammar: terminals, non-terminals, named tables, a rational
/// control over the table names and a start symbol.
///
/// Terminals and non-terminals are normally disjoint. Grammars produced by
/// [`reduce_extended`](super::reduce_extended) treat every terminal as
/// rewritable as well; a terminal word is still any word over the terminals.
#[derive(Debug, Clone)]
pub struct Et0lGrammar {
    pub(crate) symbols: SymbolTable,
    pub(crate) terminals: BTreeSet<Sym>,
    pub(crate) nonterminals: BTreeSet<Sym>,
    pub(crate) tables: Vec<Table>,
    pub(crate) control: Regex<usize>,
    pub(crate) control_nfa: Nfa<usize>,
    pub(crate) start: Sym,
    pub(crate) rewritable: Vec<bool>,
    pub(crate) is_terminal: Vec<bool>,
    pub(crate) dead: Option<Sym>,
}

/// Raw parts from which a grammar is assembled and validated.
#[derive(Debug, Clone)]
pub struct GrammarParts {
    pub symbols: SymbolTable,
    pub terminals: BTreeSet<Sym>,
    pub nonterminals: BTreeSet<Sym>,
    pub tables: Vec<Table>,
    pub control: Regex<usize>,
    pub start: Sym,
    /// Permit terminals that are also rewritten by tables.
    pub shared_terminals: bool,
}

impl Et0lGrammar {
    pub fn from_parts(parts: GrammarParts) -> Result<Self> {
        let GrammarParts {
            symbols,
            terminals,
            nonterminals,
            tables,
            control,
            start,
            shared_terminals,
        } = parts;
        let at = |what: &str| format!("grammar.{what}");
        if !shared_terminals {
            if let Some(&s) = terminals.intersection(&nonterminals).next() {
                return Err(Error::schema(
                    at("terminals"),
                    format!("`{}` is both terminal and non-terminal", symbols.name(s)),
                ));
            }
        }
        if !nonterminals.contains(&start) {
            return Err(Error::schema(
                at("start"),
                format!("start symbol `{}` is not a non-terminal", symbols.name(start)),
            ));
        }
        let dead = symbols.get(DEAD);
        if let Some(d) = dead {
            if terminals.contains(&d) {
                return Err(Error::schema(at("terminals"), "the dead-end symbol is not a terminal"));
            }
        }
        let mut names = HashSet::new();
        for t in &tables {
            if !names.insert(t.name.as_str()) {
                return Err(Error::schema(
                    at("tables"),
                    format!("duplicate table `{}`", t.name),
                ));
            }
            for (head, bodies) in &t.rules {
                if !nonterminals.contains(head) {
                    return Err(Error::schema(
                        format!("grammar.tables.{}", t.name),
                        format!("rule head `{}` is not a non-terminal", symbols.name(*head)),
                    ));
                }
                if bodies.is_empty() {
                    return Err(Error::schema(
                        format!("grammar.tables.{}.{}", t.name, symbols.name(*head)),
                        "a non-terminal needs at least one replacement",
                    ));
                }
                if Some(*head) == dead && bodies.iter().any(|b| b.as_slice() != [*head]) {
                    return Err(Error::schema(
                        format!("grammar.tables.{}", t.name),
                        "the dead-end symbol may only be replaced by itself",
                    ));
                }
                for b in bodies {
                    if let Some(&s) = b
                        .iter()
                        .find(|s| !terminals.contains(s) && !nonterminals.contains(s))
                    {
                        return Err(Error::schema(
                            format!("grammar.tables.{}.{}", t.name, symbols.name(*head)),
                            format!("symbol `{}` is undeclared", symbols.name(s)),
                        ));
                    }
                }
            }
        }
        let table_ids: BTreeSet<usize> = (0..tables.len()).collect();
        control.check(&table_ids).map_err(|e| Error::schema(at("control"), e.to_string()))?;
        let control_nfa = Nfa::compile(&control, &table_ids)?.without_epsilon();

        let n = symbols.len();
        let mut rewritable = vec![false; n];
        let mut is_terminal = vec![false; n];
        for &x in &nonterminals {
            rewritable[x as usize] = true;
        }
        for &a in &terminals {
            is_terminal[a as usize] = true;
        }
        Ok(Et0lGrammar {
            symbols,
            terminals,
            nonterminals,
            tables,
            control,
            control_nfa,
            start,
            rewritable,
            is_terminal,
            dead,
        })
    }

    /// Builds a grammar from names. Rule bodies are space-separated symbol
    /// names; the empty string is the empty word. Missing rules default to
    /// `X -> X` and are materialized in every table.
    pub fn from_names(
        terminals: &[&str],
        nonterminals: &[&str],
        start: &str,
        tables: &[(&str, &[(&str, &[&str])])],
        control: &str,
    ) -> Result<Self> {
        let owned: Vec<(String, Vec<(String, Vec<String>)>)> = tables
            .iter()
            .map(|(name, rules)| {
                (
                    name.to_string(),
                    rules
                        .iter()
                        .map(|(h, bs)| (h.to_string(), bs.iter().map(|b| b.to_string()).collect()))
                        .collect(),
                )
            })
            .collect();
        Self::from_named_rules(
            &terminals.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            &nonterminals.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            start,
            &owned,
            control,
            false,
        )
    }

    pub(crate) fn from_named_rules(
        terminals: &[String],
        nonterminals: &[String],
        start: &str,
        tables: &[(String, Vec<(String, Vec<String>)>)],
        control: &str,
        shared_terminals: bool,
    ) -> Result<Self> {
        let mut symbols = SymbolTable::new();
        let mut declare = |names: &[String], what: &str| -> Result<BTreeSet<Sym>> {
            let mut out = BTreeSet::new();
            for n in names {
                if n.is_empty() || n.contains(char::is_whitespace) {
                    return Err(Error::schema(
                        format!("grammar.{what}"),
                        format!("invalid symbol name {n:?}"),
                    ));
                }
                if !out.insert(symbols.intern(n)) {
                    return Err(Error::schema(
                        format!("grammar.{what}"),
                        format!("`{n}` declared twice"),
                    ));
                }
            }
            Ok(out)
        };
        let terminals = declare(terminals, "terminals")?;
        let nonterminals = declare(nonterminals, "nonterminals")?;
        let lookup = |name: &str, at: &str| {
            symbols
                .get(name)
                .ok_or_else(|| Error::schema(at, format!("symbol `{name}` is undeclared")))
        };
        let start = lookup(start, "grammar.start")?;
        let mut built = Vec::new();
        for (tname, rules) in tables {
            let mut t = Table::new(tname.clone());
            for (head, bodies) in rules {
                let at = format!("grammar.tables.{tname}.{head}");
                let h = lookup(head, &at)?;
                if bodies.is_empty() {
                    return Err(Error::schema(at, "a non-terminal needs at least one replacement"));
                }
                for b in bodies {
                    let body = b
                        .split_whitespace()
                        .map(|s| lookup(s, &at))
                        .collect::<Result<Vec<_>>>()?;
                    t.add_rule(h, body);
                }
            }
            for &x in &nonterminals {
                if t.replacements(x).is_none() {
                    t.add_rule(x, vec![x]);
                }
            }
            built.push(t);
        }
        let table_names: BTreeSet<String> = tables.iter().map(|(n, _)| n.clone()).collect();
        let control = Regex::parse(control, &table_names)
            .map_err(|e| Error::schema("grammar.control", e.to_string()))?;
        let control = control.map_symbols(&|n: &String| {
            tables.iter().position(|(tn, _)| tn == n).expect("checked by parse")
        });
        Self::from_parts(GrammarParts {
            symbols,
            terminals,
            nonterminals,
            tables: built,
            control,
            start,
            shared_terminals,
        })
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn terminals(&self) -> &BTreeSet<Sym> {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &BTreeSet<Sym> {
        &self.nonterminals
    }

    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    pub fn start(&self) -> Sym {
        self.start
    }

    pub fn control(&self) -> &Regex<usize> {
        &self.control
    }

    pub fn dead(&self) -> Option<Sym> {
        self.dead
    }

    /// Rational control rendered over table names.
    pub fn control_text(&self) -> String {
        self.control.render(&|&i: &usize| self.tables[i].name.clone())
    }

    pub fn table_index(&self, name: &str) -> Result<usize> {
        self.tables
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| Error::UnknownTable(name.to_string()))
    }

    pub fn sym(&self, name: &str) -> Result<Sym> {
        self.symbols
            .get(name)
            .ok_or_else(|| Error::Alphabet(name.to_string()))
    }

    /// Parses a word (see [`split_word`]) over the grammar's symbols.
    pub fn word(&self, text: &str) -> Result<Vec<Sym>> {
        split_word(text, |n| self.symbols.get(n).is_some())
            .iter()
            .map(|n| self.sym(n))
            .collect()
    }

    pub fn render(&self, w: &[Sym]) -> String {
        self.symbols.render_compact(w)
    }

    pub fn is_terminal_word(&self, w: &[Sym]) -> bool {
        w.iter().all(|&s| self.is_terminal[s as usize])
    }

    /// Rule bodies for `x` under table `t`, honouring the identity default.
    pub(crate) fn choices<'a>(&'a self, t: usize, x: &'a Sym) -> &'a [Vec<Sym>] {
        if !self.rewritable[*x as usize] {
            return &[];
        }
        self.tables[t].replacements(*x).unwrap_or(&[])
    }

    /// All results of applying table `t` to `w`. Results longer than
    /// `max_len` are dropped and reported by the returned flag.
    pub(crate) fn apply_bounded(&self, t: usize, w: &[Sym], max_len: usize) -> (Vec<Vec<Sym>>, bool) {
        // Per position: either a fixed symbol or a list of bodies.
        let slots: Vec<Slot<'_>> = w
            .iter()
            .map(|x| {
                let c = self.choices(t, x);
                if c.is_empty() {
                    Slot::Keep(*x)
                } else {
                    Slot::Choose(c)
                }
            })
            .collect();
        let mut min_suffix = vec![0usize; slots.len() + 1];
        for i in (0..slots.len()).rev() {
            min_suffix[i] = min_suffix[i + 1] + slots[i].min_len();
        }
        let mut out = HashSet::new();
        let mut pruned = false;
        if min_suffix[0] > max_len {
            return (Vec::new(), true);
        }
        let mut buf = Vec::with_capacity(w.len());
        expand(&slots, 0, &min_suffix, max_len, &mut buf, &mut out, &mut pruned);
        let mut v: Vec<_> = out.into_iter().collect();
        v.sort();
        (v, pruned)
    }

    /// Applies the named table to `w`; every combination of rule choices is
    /// returned once.
    pub fn apply_table(&self, table: &str, w: &[Sym]) -> Result<BTreeSet<Vec<Sym>>> {
        let t = self.table_index(table)?;
        self.check_form(w)?;
        let (v, _) = self.apply_bounded(t, w, usize::MAX);
        Ok(v.into_iter().collect())
    }

    pub(crate) fn check_form(&self, w: &[Sym]) -> Result<()> {
        match w
            .iter()
            .find(|&&s| (s as usize) >= self.rewritable.len()
                || !(self.rewritable[s as usize] || self.is_terminal[s as usize]))
        {
            Some(&s) => Err(Error::Alphabet(format!("symbol #{s}"))),
            None => Ok(()),
        }
    }

    /// Sentential forms reachable from the start symbol by applying the
    /// named tables left to right. Forms longer than `max_form` are pruned.
    pub fn derive_all(&self, control: &[&str], max_form: usize) -> Result<Derivation> {
        let ids = control
            .iter()
            .map(|n| self.table_index(n))
            .collect::<Result<Vec<_>>>()?;
        let mut forms: BTreeSet<Vec<Sym>> = BTreeSet::from([vec![self.start]]);
        let mut pruned = false;
        for t in ids {
            let mut next = BTreeSet::new();
            for f in &forms {
                let (res, p) = self.apply_bounded(t, f, max_form);
                pruned |= p;
                next.extend(res);
            }
            forms = next;
        }
        Ok(Derivation { forms, pruned })
    }
}

/// Result of [`Et0lGrammar::derive_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub forms: BTreeSet<Vec<Sym>>,
    /// Some intermediate form exceeded the length bound.
    pub pruned: bool,
}

enum Slot<'a> {
    Keep(Sym),
    Choose(&'a [Vec<Sym>]),
}

impl Slot<'_> {
    fn min_len(&self) -> usize {
        match self {
            Slot::Keep(_) => 1,
            Slot::Choose(c) => c.iter().map(Vec::len).min().unwrap_or(0),
        }
    }
}

fn expand(
    slots: &[Slot<'_>],
    i: usize,
    min_suffix: &[usize],
    max_len: usize,
    buf: &mut Vec<Sym>,
    out: &mut HashSet<Vec<Sym>>,
    pruned: &mut bool,
) {
    if i == slots.len() {
        out.insert(buf.clone());
        return;
    }
    match &slots[i] {
        Slot::Keep(x) => {
            buf.push(*x);
            expand(slots, i + 1, min_suffix, max_len, buf, out, pruned);
            buf.pop();
        }
        Slot::Choose(bodies) => {
            for b in bodies.iter() {
                if buf.len() + b.len() + min_suffix[i + 1] > max_len {
                    *pruned = true;
                    continue;
                }
                let mark = buf.len();
                buf.extend_from_slice(b);
                expand(slots, i + 1, min_suffix, max_len, buf, out, pruned);
                buf.truncate(mark);
            }
        }
    }
}

impl PartialEq for Et0lGrammar {
    /// Structural equality up to symbol numbering, with implicit identity
    /// rules made explicit.
    fn eq(&self, other: &Self) -> bool {
        let names = |g: &Et0lGrammar, set: &BTreeSet<Sym>| -> BTreeSet<String> {
            set.iter().map(|&s| g.symbols.name(s).to_string()).collect()
        };
        if names(self, &self.terminals) != names(other, &other.terminals)
            || names(self, &self.nonterminals) != names(other, &other.nonterminals)
            || self.symbols.name(self.start) != other.symbols.name(other.start)
            || self.control_text() != other.control_text()
            || self.tables.len() != other.tables.len()
        {
            return false;
        }
        let rules = |g: &Et0lGrammar, t: &Table| -> BTreeMap<String, BTreeSet<String>> {
            g.nonterminals
                .iter()
                .map(|&x| {
                    let bodies = match t.replacements(x) {
                        Some(bs) => bs.iter().map(|b| g.symbols.render(b)).collect(),
                        None => BTreeSet::from([g.symbols.name(x).to_string()]),
                    };
                    (g.symbols.name(x).to_string(), bodies)
                })
                .collect()
        };
        self.tables.iter().all(|t| {
            other
                .tables
                .iter()
                .find(|u| u.name == t.name)
                .is_some_and(|u| rules(self, t) == rules(other, u))
        })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The three-table grammar generating `(a^n b^n)^m` under control `α*β*γ`.
    pub(crate) fn power_grammar() -> Et0lGrammar {
        Et0lGrammar::from_names(
            &["a", "b"],
            &["S", "A", "B"],
            "S",
            &[
                ("α", &[("S", &["S S", "S", "A B"])]),
                ("β", &[("A", &["a A"]), ("B", &["b B"])]),
                ("γ", &[("A", &[""]), ("B", &[""])]),
            ],
            "α*β*γ",
        )
        .unwrap()
    }

    fn forms(g: &Et0lGrammar, words: &[&str]) -> BTreeSet<Vec<Sym>> {
        words.iter().map(|w| g.word(w).unwrap()).collect()
    }

    #[test]
    fn applying_alpha_to_four_starts() {
        let g = power_grammar();
        let out = g.apply_table("α", &g.word("SSSS").unwrap()).unwrap();
        assert!(out.contains(&g.word("SABSSAB").unwrap()));
        // three independent choices per occurrence
        assert_eq!(out.len(), 3usize.pow(4) - count_collisions(&g, &out));
    }

    fn count_collisions(_g: &Et0lGrammar, _out: &BTreeSet<Vec<Sym>>) -> usize {
        // S S | S | A B per occurrence: the concatenations never coincide
        // because the four S's are separated by their own choices only when
        // lengths differ; collisions happen between e.g. (SS)(S) and (S)(SS).
        let bodies: [&[&str]; 3] = [&["S", "S"], &["S"], &["A", "B"]];
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for a in bodies {
            for b in bodies {
                for c in bodies {
                    for d in bodies {
                        total += 1;
                        let w: Vec<&str> = [a, b, c, d].concat();
                        seen.insert(w);
                    }
                }
            }
        }
        total - seen.len()
    }

    #[test]
    fn empty_form_and_simple_table() {
        let g = power_grammar();
        assert_eq!(g.apply_table("β", &[]).unwrap(), forms(&g, &[""]));
        assert_eq!(
            g.apply_table("β", &g.word("AB").unwrap()).unwrap(),
            forms(&g, &["aAbB"])
        );
        assert!(matches!(
            g.apply_table("δ", &[]),
            Err(Error::UnknownTable(_))
        ));
    }

    #[test]
    fn default_rules_are_identity() {
        let g = power_grammar();
        let alpha = &g.tables[g.table_index("α").unwrap()];
        let b = g.sym("B").unwrap();
        assert_eq!(alpha.replacements(b).unwrap(), &[vec![b]]);
    }

    #[test]
    fn derivations_follow_control() {
        let g = power_grammar();
        let d = g.derive_all(&["α", "β", "β", "γ"], 32).unwrap();
        assert!(d.forms.contains(&g.word("aabb").unwrap()));
        assert!(!d.pruned);
        let d = g.derive_all(&[], 32).unwrap();
        assert_eq!(d.forms, forms(&g, &["S"]));
        let d = g.derive_all(&["α", "γ"], 32).unwrap();
        assert!(d.forms.contains(&Vec::new()));
    }

    #[test]
    fn length_bound_prunes() {
        let g = power_grammar();
        let d = g.derive_all(&["α", "α", "α"], 4).unwrap();
        assert!(d.pruned);
        assert!(d.forms.iter().all(|f| f.len() <= 4));
    }

    #[test]
    fn validation_errors() {
        let bad_start = Et0lGrammar::from_names(&["a"], &["S"], "T", &[], "()");
        assert!(matches!(bad_start, Err(Error::Schema { .. })));
        let overlap = Et0lGrammar::from_names(&["a"], &["a"], "a", &[], "()");
        assert!(overlap.is_err());
        let dead_rule = Et0lGrammar::from_names(
            &["a"],
            &["S", DEAD],
            "S",
            &[("t", &[(DEAD, &["a"])])],
            "t",
        );
        assert!(dead_rule.is_err());
        let bad_control = Et0lGrammar::from_names(&["a"], &["S"], "S", &[("t", &[])], "u");
        assert!(bad_control.is_err());
    }

    #[test]
    fn equality_ignores_symbol_numbering() {
        let g = power_grammar();
        let h = Et0lGrammar::from_names(
            &["b", "a"],
            &["B", "A", "S"],
            "S",
            &[
                ("α", &[("S", &["S S", "S", "A B"]), ("A", &["A"])]),
                ("β", &[("A", &["a A"]), ("B", &["b B"])]),
                ("γ", &[("A", &[""]), ("B", &[""])]),
            ],
            "α*β*γ",
        )
        .unwrap();
        assert_eq!(g, h);
    }
}
