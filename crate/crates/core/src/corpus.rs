//! Example grammars, machines and groups bundled with the library.

use crate::cspd::CspdMachine;
use crate::error::Result;
use crate::et0l::Et0lGrammar;
use crate::io::{parse_grammar, parse_group, parse_machine};
use crate::trees::Group;

/// `{(aⁿbⁿ)ᵐ}` with tables `α`, `β`, `γ` under control `α*β*γ`.
pub const POWER_GRAMMAR: &str = include_str!("../corpus/power_grammar.json");
/// The first Grigorchuk group on generators `a, b, c, d`.
pub const GRIGORCHUK: &str = include_str!("../corpus/grigorchuk.json");
/// The Grigorchuk group read through the map `x ↦ ab`, `y ↦ ba`, `z ↦ ad`.
pub const GRIGORCHUK_PAIRS: &str = include_str!("../corpus/grigorchuk_pairs.json");
/// The Gupta–Sidki 3-group on `a, A = a⁻¹, g, G = g⁻¹`.
pub const GUPTA_SIDKI: &str = include_str!("../corpus/gupta_sidki.json");
/// `{aⁿbⁿ}`, counting on the pushdown.
pub const COUNTER: &str = include_str!("../corpus/counter.json");
/// `a*`, pushing without consulting either stack.
pub const CLIMBER: &str = include_str!("../corpus/climber.json");

pub const GRAMMARS: &[(&str, &str)] = &[("power_grammar", POWER_GRAMMAR)];
pub const MACHINES: &[(&str, &str)] = &[("counter", COUNTER), ("climber", CLIMBER)];
pub const GROUPS: &[(&str, &str)] = &[
    ("grigorchuk", GRIGORCHUK),
    ("grigorchuk_pairs", GRIGORCHUK_PAIRS),
    ("gupta_sidki", GUPTA_SIDKI),
];

pub fn power_grammar() -> Result<Et0lGrammar> {
    parse_grammar(POWER_GRAMMAR)
}

pub fn grigorchuk() -> Result<Group> {
    parse_group(GRIGORCHUK)
}

pub fn gupta_sidki() -> Result<Group> {
    parse_group(GUPTA_SIDKI)
}

pub fn counter() -> Result<CspdMachine> {
    parse_machine(COUNTER)
}

pub fn climber() -> Result<CspdMachine> {
    parse_machine(CLIMBER)
}
