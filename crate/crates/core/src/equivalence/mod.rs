//! Conversions between ET0L grammars and check-stack pushdown machines,
//! and bounded comparison of their languages.

mod cross_check;
mod to_grammar;
mod to_machine;

#[cfg(test)]
mod tests;

pub use cross_check::{cross_check, CrossCheckOptions, CrossCheckReport, Disagreement};
pub use to_grammar::cspd_to_grammar;
pub use to_machine::{grammar_to_cspd, TOP};
