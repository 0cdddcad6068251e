//! Check-stack pushdown machines.

mod builder;
mod machine;
mod normalize;
#[cfg(test)]
pub(crate) mod tests;

pub use builder::MachineBuilder;
pub use machine::{
    Caps, Configuration, CspdMachine, Order, PushSym, RunResult, State, Transition, Trigger,
    Violation, BOTTOM,
};
pub use normalize::{check_normalized, normalize, ACCEPT, FINISH};
