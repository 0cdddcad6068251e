use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::cspd::{CspdMachine, PushSym, Transition, Trigger};
use crate::et0l::Et0lGrammar;
use crate::error::Result;
use crate::regular::Regex;
use crate::symbol::{Sym, SymbolTable};

/// Name of the check-stack top marker added by [`grammar_to_cspd`].
pub const TOP: &str = "𝔱";

/// Builds a machine recognising the grammar's language.
///
/// The check-stack spells a control word followed by the top marker. The
/// pushdown holds bracket symbols `⟦B_k … B_l⟧`, suffixes of rule bodies
/// (plus `⟦S⟧`, `⟦ε⟧` and single-letter brackets for letters copied
/// unchanged). In `q_apply`, a bracket under a table cell has its leftmost
/// letter expanded by that table, pushing the replacement one cell higher
/// and the rest of the bracket back at the same cell; `⟦ε⟧` is popped; at the
/// top marker a bracket of terminals is matched against the input.
pub fn grammar_to_cspd(g: &Et0lGrammar) -> Result<CspdMachine> {
    let mut symbols = SymbolTable::new();
    let input: BTreeSet<Sym> = g
        .terminals()
        .iter()
        .map(|&a| symbols.intern(g.symbols().name(a)))
        .collect();
    let table_syms: Vec<Sym> = g
        .tables()
        .iter()
        .map(|t| symbols.intern(t.name()))
        .collect();
    let top = symbols.fresh(TOP);
    let mut check: BTreeSet<Sym> = table_syms.iter().copied().collect();
    check.insert(top);

    let mut brackets = Brackets {
        g,
        map: HashMap::new(),
        queue: VecDeque::new(),
    };
    let start_bracket = brackets.get(&[g.start()], &mut symbols);
    let empty = brackets.get(&[], &mut symbols);

    let states = vec!["q0".to_string(), "q_apply".to_string(), "q_accept".to_string()];
    let (q0, apply, accept) = (0, 1, 2);
    let mut transitions = vec![
        Transition {
            from: q0,
            reads: vec![],
            trigger: Trigger::Bottom,
            to: apply,
            push: vec![PushSym::Sym(start_bracket), PushSym::Bottom],
        },
        Transition {
            from: apply,
            reads: vec![],
            trigger: Trigger::Bottom,
            to: accept,
            push: vec![PushSym::Bottom],
        },
    ];
    let mut done = BTreeSet::new();
    while let Some(w) = brackets.queue.pop_front() {
        if !done.insert(w.clone()) {
            continue;
        }
        let b = brackets.map[&w];
        if w.iter().all(|&s| g.terminals().contains(&s)) {
            transitions.push(Transition {
                from: apply,
                reads: w.iter().map(|&a| symbols.get(g.symbols().name(a)).expect("terminal")).collect(),
                trigger: Trigger::Pair { check: top, top: b },
                to: apply,
                push: vec![],
            });
        }
        let Some((&first, rest)) = w.split_first() else {
            for &t in &table_syms {
                transitions.push(Transition {
                    from: apply,
                    reads: vec![],
                    trigger: Trigger::Pair { check: t, top: empty },
                    to: apply,
                    push: vec![],
                });
            }
            continue;
        };
        let rest_bracket = brackets.get(rest, &mut symbols);
        for (ti, &t) in table_syms.iter().enumerate() {
            let identity = [vec![first]];
            let bodies = match g.tables()[ti].replacements(first) {
                Some(bs) if g.nonterminals().contains(&first) => bs,
                _ => &identity[..],
            };
            for body in bodies {
                let expanded = brackets.get(body, &mut symbols);
                transitions.push(Transition {
                    from: apply,
                    reads: vec![],
                    trigger: Trigger::Pair { check: t, top: b },
                    to: apply,
                    push: vec![PushSym::Sym(expanded), PushSym::Sym(rest_bracket)],
                });
            }
        }
    }
    let pushdown: BTreeSet<Sym> = brackets.map.values().copied().collect();
    let control = g.control().map_symbols(&|&t: &usize| table_syms[t]);
    transitions.sort();
    transitions.dedup();
    Ok(CspdMachine {
        states,
        symbols,
        input_alphabet: input,
        pushdown_alphabet: pushdown,
        check_alphabet: check,
        check_language: Regex::concat(vec![control, Regex::sym(top)]),
        transitions,
        start: q0,
        accepting: BTreeSet::from([accept]),
    })
}

/// Bracket symbols discovered so far, with a queue of those still to expand.
struct Brackets<'g> {
    g: &'g Et0lGrammar,
    map: HashMap<Vec<Sym>, Sym>,
    queue: VecDeque<Vec<Sym>>,
}

impl Brackets<'_> {
    fn get(&mut self, w: &[Sym], symbols: &mut SymbolTable) -> Sym {
        if let Some(&b) = self.map.get(w) {
            return b;
        }
        let inner = if w.is_empty() {
            "ε".to_string()
        } else {
            self.g.symbols().render(w)
        };
        let b = symbols.fresh(&format!("⟦{inner}⟧"));
        self.map.insert(w.to_vec(), b);
        self.queue.push_back(w.to_vec());
        b
    }
}
