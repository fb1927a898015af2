//! Beauville structures on finite p-groups.

pub mod constructions;
pub mod criteria;
pub mod engine;
pub mod error;
pub mod family;
pub mod lazard;
pub mod nottingham;
pub mod pc;
pub mod pipeline;

pub use engine::{Code, Config, Group, GroupOracle};
pub use error::{Error, Result};
