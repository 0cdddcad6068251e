//! Regular expressions and finite automata over arbitrary symbol types.
//!
//! Used for rational controls, check-stack languages and the regular
//! right-hand sides produced when converting machines back to grammars.

mod nfa;
mod regex;

pub use nfa::{Nfa, StateId};
pub use regex::{quote_symbol, Regex};
