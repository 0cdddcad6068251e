//! Automorphisms of regular rooted trees given by Σ-automata.

mod automaton;
mod classify;
mod group;
mod oracle;


pub use automaton::{Letter, SigmaAutomaton, StateSpec, Vertex, WreathDecomp};
pub use classify::{Classification, SpineDecomp};
pub use group::{GeneratorMap, Group};
pub use oracle::TupleSpace;
