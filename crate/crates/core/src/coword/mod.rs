//! Check-stack pushdown machines for co-word problems of groups generated
//! by finitary and directed automorphisms.

mod crosscheck;
mod machine;
mod precompute;

#[cfg(test)]
mod tests;

pub use crosscheck::{crosscheck_oracle, words_up_to, CowordDisagreement, CowordOptions, CowordReport};
pub use machine::{apply_generator_map, build_coword_machine, CowordMachine, GeneratorData};
pub use precompute::{precompute_directed, precompute_finitary, DirectedData, FinitaryData, OffSpine};
