//! Explicit families: abelian `C_n × C_n`, cyclotomic semidirect products and
//! their nonsplit extensions, and a potent group that is not semi-p-abelian.

mod abelian;
mod cyclo;
mod pk;
mod potent;

pub use abelian::Abelian;
pub use cyclo::{ideal_subgroup, Cyclotomic, HowellBasis};
pub use pk::{CyclicExtension, ExtensionSpec};
pub use potent::PotentExample;
