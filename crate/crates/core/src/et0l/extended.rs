use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::grammar::{Et0lGrammar, GrammarParts, Table, DEAD};
use super::search::Bounds;
use crate::error::{Error, Result};
use crate::regular::Regex;
use crate::symbol::{Sym, SymbolTable};

/// One right-hand side of an extended rule.
#[derive(Debug, Clone)]
pub enum Alternative {
    /// A literal replacement word over the host symbols.
    Word(Vec<Sym>),
    /// Every word of the embedded grammar's language. Its terminals are
    /// matched to host symbols by name.
    Embedded(Box<Et0lGrammar>),
}

#[derive(Debug, Clone)]
pub struct ExtendedTable {
    name: String,
    rules: BTreeMap<Sym, Vec<Alternative>>,
}

impl ExtendedTable {
    pub fn new(name: impl Into<String>) -> Self {
        ExtendedTable {
            name: name.into(),
            rules: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_word(&mut self, head: Sym, body: Vec<Sym>) {
        self.rules.entry(head).or_default().push(Alternative::Word(body));
    }

    pub fn add_embedded(&mut self, head: Sym, grammar: Et0lGrammar) {
        self.rules
            .entry(head)
            .or_default()
            .push(Alternative::Embedded(Box::new(grammar)));
    }

    pub fn rules(&self) -> &BTreeMap<Sym, Vec<Alternative>> {
        &self.rules
    }
}

/// An ET0L grammar whose rules may replace a non-terminal by any word of an
/// embedded ET0L language. Non-terminals without a rule in a table are
/// replaced by themselves.
#[derive(Debug, Clone)]
pub struct ExtendedGrammar {
    pub(crate) symbols: SymbolTable,
    pub(crate) terminals: BTreeSet<Sym>,
    pub(crate) nonterminals: BTreeSet<Sym>,
    pub(crate) tables: Vec<ExtendedTable>,
    pub(crate) control: Regex<usize>,
    pub(crate) start: Sym,
}

impl ExtendedGrammar {
    pub fn new(
        symbols: SymbolTable,
        terminals: BTreeSet<Sym>,
        nonterminals: BTreeSet<Sym>,
        tables: Vec<ExtendedTable>,
        control: Regex<usize>,
        start: Sym,
    ) -> Result<Self> {
        let g = ExtendedGrammar {
            symbols,
            terminals,
            nonterminals,
            tables,
            control,
            start,
        };
        g.validate()?;
        Ok(g)
    }

    /// The same grammar with every rule a literal word.
    pub fn from_standard(g: &Et0lGrammar) -> Self {
        let tables = g
            .tables
            .iter()
            .map(|t| {
                let mut e = ExtendedTable::new(t.name());
                for (&h, bodies) in t.explicit_rules() {
                    for b in bodies {
                        e.add_word(h, b.clone());
                    }
                }
                e
            })
            .collect();
        ExtendedGrammar {
            symbols: g.symbols.clone(),
            terminals: g.terminals.clone(),
            nonterminals: g.nonterminals.clone(),
            tables,
            control: g.control.clone(),
            start: g.start,
        }
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

    pub fn tables(&self) -> &[ExtendedTable] {
        &self.tables
    }

    pub fn start(&self) -> Sym {
        self.start
    }

    pub fn control(&self) -> &Regex<usize> {
        &self.control
    }

    fn validate(&self) -> Result<()> {
        if let Some(&s) = self.terminals.intersection(&self.nonterminals).next() {
            return Err(Error::schema(
                "grammar.terminals",
                format!("`{}` is both terminal and non-terminal", self.symbols.name(s)),
            ));
        }
        if !self.nonterminals.contains(&self.start) {
            return Err(Error::schema("grammar.start", "start symbol is not a non-terminal"));
        }
        let ids: BTreeSet<usize> = (0..self.tables.len()).collect();
        self.control.check(&ids)?;
        let known = |s: &Sym| self.terminals.contains(s) || self.nonterminals.contains(s);
        for t in &self.tables {
            for (h, alts) in &t.rules {
                let rule = format!("{}: {}", t.name, self.symbols.name(*h));
                if !self.nonterminals.contains(h) {
                    return Err(Error::Composition {
                        rule,
                        reason: "rule head is not a non-terminal".into(),
                    });
                }
                for alt in alts {
                    match alt {
                        Alternative::Word(w) => {
                            if let Some(s) = w.iter().find(|s| !known(s)) {
                                return Err(Error::Composition {
                                    rule,
                                    reason: format!("symbol #{s} is undeclared"),
                                });
                            }
                        }
                        Alternative::Embedded(e) => {
                            for &a in &e.terminals {
                                let name = e.symbols.name(a);
                                if !self.symbols.get(name).is_some_and(|s| known(&s)) {
                                    return Err(Error::Composition {
                                        rule,
                                        reason: format!(
                                            "embedded terminal `{name}` is not a host symbol"
                                        ),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// A standard grammar that replaces each embedded language by its words
    /// of length at most `max_word` found within `bounds`. This interprets
    /// the extended rules directly and is exact whenever the embedded
    /// languages are fully enumerated at that length.
    pub fn approximate(&self, max_word: usize, bounds: Bounds) -> Result<Et0lGrammar> {
        let mut symbols = self.symbols.clone();
        let mut nonterminals = self.nonterminals.clone();
        let mut tables = Vec::new();
        for t in &self.tables {
            let mut out = Table::new(t.name.clone());
            for (&h, alts) in &t.rules {
                for alt in alts {
                    match alt {
                        Alternative::Word(w) => out.add_rule(h, w.clone()),
                        Alternative::Embedded(e) => {
                            for w in e.enumerate_language(max_word, bounds).words {
                                let host = w
                                    .iter()
                                    .map(|&s| self.symbols.get(e.symbols.name(s)).expect("validated"))
                                    .collect();
                                out.add_rule(h, host);
                            }
                        }
                    }
                }
                if out.replacements(h).is_none() {
                    // No word available: the occurrence can never be rewritten.
                    let d = symbols.intern(DEAD);
                    nonterminals.insert(d);
                    out.add_rule(h, vec![d]);
                }
            }
            tables.push(out);
        }
        Et0lGrammar::from_parts(GrammarParts {
            symbols,
            terminals: self.terminals.clone(),
            nonterminals,
            tables,
            control: self.control.clone(),
            start: self.start,
            shared_terminals: false,
        })
    }
}

/// Table names unique within one reduced grammar.
struct Names(BTreeSet<String>);

impl Names {
    fn fresh(&mut self, base: String) -> String {
        let mut name = base.clone();
        let mut k = 2;
        while !self.0.insert(name.clone()) {
            name = format!("{base}#{k}");
            k += 1;
        }
        name
    }
}

/// Reduces an extended grammar to a standard one generating the same
/// language.
///
/// Every host symbol `X` gets two marked copies `X.1` and `X.2`. Each host
/// table `τ` becomes the control fragment
/// `α lit_τ (β R γ)* ... (β R γ)* κ`:
/// `α` marks every symbol `X -> X.1`; `lit_τ` applies the literal rules of
/// `τ` (`X.1 -> w.2`), or leaves `X.1` for an embedded block; each embedded
/// block starts selected occurrences with `β: X.1 -> X.1 | S'`, runs the
/// embedded control `R` on namespaced symbols, and closes with
/// `γ: Y' -> Y.2` for embedded terminals and `Z' -> #dead` otherwise;
/// `κ` kills unprocessed `X.1` and restores `X.2 -> X`.
///
/// Terminals become rewritable as well, so the result treats its terminals
/// as shared with the non-terminals.
pub fn reduce_extended(e: &ExtendedGrammar) -> Result<Et0lGrammar> {
    e.validate()?;
    let mut symbols = e.symbols.clone();
    let dead = symbols.intern(DEAD);
    let host: Vec<Sym> = e
        .terminals
        .iter()
        .chain(&e.nonterminals)
        .copied()
        .filter(|&s| s != dead)
        .collect();
    let mut first = HashMap::new();
    let mut second = HashMap::new();
    for &x in &host {
        let name = e.symbols.name(x).to_string();
        first.insert(x, symbols.fresh(&format!("{name}.1")));
        second.insert(x, symbols.fresh(&format!("{name}.2")));
    }
    let mark2 = |w: &[Sym]| -> Vec<Sym> {
        w.iter()
            .map(|s| if *s == dead { dead } else { second[s] })
            .collect()
    };

    let mut names = Names(BTreeSet::new());
    let mut tables: Vec<Table> = Vec::new();
    let push = |tables: &mut Vec<Table>, t: Table| -> usize {
        tables.push(t);
        tables.len() - 1
    };

    let mut alpha = Table::new(names.fresh("α".into()));
    let mut kappa = Table::new(names.fresh("κ".into()));
    for &x in &host {
        alpha.add_rule(x, vec![first[&x]]);
        kappa.add_rule(first[&x], vec![dead]);
        kappa.add_rule(second[&x], vec![x]);
    }
    let alpha = push(&mut tables, alpha);
    let kappa = push(&mut tables, kappa);

    let mut images: Vec<Regex<usize>> = Vec::new();
    for t in &e.tables {
        let mut lit = Table::new(names.fresh(format!("lit[{}]", t.name)));
        let mut blocks: Vec<Regex<usize>> = Vec::new();
        for &x in &host {
            let default = [Alternative::Word(vec![x])];
            let alts: &[Alternative] = match t.rules.get(&x) {
                Some(a) => a,
                None => &default,
            };
            let x1 = first[&x];
            let mut embedded = 0;
            for (ai, alt) in alts.iter().enumerate() {
                match alt {
                    Alternative::Word(w) => lit.add_rule(x1, mark2(w)),
                    Alternative::Embedded(g) => {
                        embedded += 1;
                        let tag = format!("{}.{}.{}", t.name, e.symbols.name(x), ai);
                        blocks.push(embed_block(
                            g,
                            &tag,
                            x1,
                            dead,
                            &e.symbols,
                            &second,
                            &mut symbols,
                            &mut names,
                            &mut tables,
                        ));
                    }
                }
            }
            if embedded > 0 {
                lit.add_rule(x1, vec![x1]);
            }
        }
        let lit = push(&mut tables, lit);
        let mut parts = vec![Regex::sym(alpha), Regex::sym(lit)];
        parts.extend(blocks.into_iter().map(Regex::star));
        parts.push(Regex::sym(kappa));
        images.push(Regex::concat(parts));
    }
    let control = e.control.substitute(&|&t: &usize| Some(images[t].clone()))?;

    let nonterminals: BTreeSet<Sym> = (0..symbols.len() as Sym).collect();
    Et0lGrammar::from_parts(GrammarParts {
        symbols,
        terminals: e.terminals.clone(),
        nonterminals,
        tables,
        control,
        start: e.start,
        shared_terminals: true,
    })
}

/// Adds the tables of one embedded block and returns `β R γ`.
#[allow(clippy::too_many_arguments)]
fn embed_block(
    g: &Et0lGrammar,
    tag: &str,
    x1: Sym,
    dead: Sym,
    host_symbols: &SymbolTable,
    second: &HashMap<Sym, Sym>,
    symbols: &mut SymbolTable,
    names: &mut Names,
    tables: &mut Vec<Table>,
) -> Regex<usize> {
    let inner: Vec<Sym> = (0..g.symbols.len() as Sym)
        .map(|s| {
            if Some(s) == g.dead {
                dead
            } else {
                symbols.fresh(&format!("{}@{tag}", g.symbols.name(s)))
            }
        })
        .collect();
    let map = |w: &[Sym]| -> Vec<Sym> { w.iter().map(|&s| inner[s as usize]).collect() };

    let mut beta = Table::new(names.fresh(format!("β[{tag}]")));
    beta.add_rule(x1, vec![x1]);
    beta.add_rule(x1, vec![inner[g.start as usize]]);
    tables.push(beta);
    let beta = tables.len() - 1;

    let mut ids = Vec::new();
    for t in &g.tables {
        let mut copy = Table::new(names.fresh(format!("{}@{tag}", t.name())));
        for (&h, bodies) in t.explicit_rules() {
            if Some(h) == g.dead {
                continue;
            }
            for b in bodies {
                copy.add_rule(inner[h as usize], map(b));
            }
        }
        tables.push(copy);
        ids.push(tables.len() - 1);
    }
    let run = g.control.map_symbols(&|&t: &usize| ids[t]);

    let mut gamma = Table::new(names.fresh(format!("γ[{tag}]")));
    for s in 0..g.symbols.len() as Sym {
        if Some(s) == g.dead {
            continue;
        }
        let target = if g.is_terminal[s as usize] {
            let h = host_symbols.get(g.symbols.name(s)).expect("validated");
            second[&h]
        } else {
            dead
        };
        gamma.add_rule(inner[s as usize], vec![target]);
    }
    tables.push(gamma);
    let gamma = tables.len() - 1;
    Regex::concat(vec![Regex::sym(beta), run, Regex::sym(gamma)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::et0l::grammar::tests::power_grammar;

    fn b(c: usize, f: usize) -> Bounds {
        Bounds {
            max_control: c,
            max_form: f,
        }
    }

    fn names(g: &Et0lGrammar, words: &BTreeSet<Vec<Sym>>) -> BTreeSet<String> {
        words.iter().map(|w| g.render(w)).collect()
    }

    /// Host `S -> L` with `L = {ab}` given by a one-table embedded grammar,
    /// under control `τ`.
    fn finite_embedding() -> ExtendedGrammar {
        let inner =
            Et0lGrammar::from_names(&["a", "b"], &["T"], "T", &[("u", &[("T", &["a b"])])], "u")
                .unwrap();
        let mut symbols = SymbolTable::new();
        let a = symbols.intern("a");
        let bb = symbols.intern("b");
        let s = symbols.intern("S");
        let mut t = ExtendedTable::new("τ");
        t.add_embedded(s, inner);
        ExtendedGrammar::new(
            symbols,
            BTreeSet::from([a, bb]),
            BTreeSet::from([s]),
            vec![t],
            Regex::sym(0),
            s,
        )
        .unwrap()
    }

    #[test]
    fn finite_embedded_language() {
        let e = finite_embedding();
        let direct = e.approximate(6, b(4, 16)).unwrap();
        let reduced = reduce_extended(&e).unwrap();
        let d = direct.enumerate_language(6, b(4, 16));
        let r = reduced.enumerate_language(6, b(12, 16));
        assert_eq!(names(&direct, &d.words), BTreeSet::from(["ab".to_string()]));
        assert_eq!(names(&direct, &d.words), names(&reduced, &r.words));
    }

    #[test]
    fn literal_only_grammar_keeps_its_language() {
        let g = power_grammar();
        let e = ExtendedGrammar::from_standard(&g);
        let reduced = reduce_extended(&e).unwrap();
        let want = g.enumerate_language(4, b(6, 32));
        // Each host step costs three reduced steps.
        let got = reduced.enumerate_language(4, b(18, 32));
        assert_eq!(names(&g, &want.words), names(&reduced, &got.words));
    }

    #[test]
    fn foreign_embedded_terminal_is_rejected() {
        let inner =
            Et0lGrammar::from_names(&["z"], &["T"], "T", &[("u", &[("T", &["z"])])], "u").unwrap();
        let mut symbols = SymbolTable::new();
        let s = symbols.intern("S");
        let mut t = ExtendedTable::new("τ");
        t.add_embedded(s, inner);
        let err = ExtendedGrammar::new(
            symbols,
            BTreeSet::new(),
            BTreeSet::from([s]),
            vec![t],
            Regex::sym(0),
            s,
        );
        assert!(matches!(err, Err(Error::Composition { .. })));
    }
}
