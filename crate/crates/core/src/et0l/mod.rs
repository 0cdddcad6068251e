//! ET0L grammars: parallel table rewriting under a rational control.

mod extended;
mod grammar;
mod search;

pub use extended::{reduce_extended, Alternative, ExtendedGrammar, ExtendedTable};
pub use grammar::{Derivation, Et0lGrammar, GrammarParts, Table, DEAD};
pub use search::{Bounds, LanguageSample, Membership};

#[cfg(test)]
pub(crate) use grammar::tests::power_grammar;
