pub mod error;
pub mod corpus;
pub mod coword;
pub mod cspd;
pub mod equivalence;
pub mod et0l;
pub mod io;
pub mod regular;
pub mod report;
pub mod symbol;
pub mod trees;

pub use error::{Error, Result};
