//! Phase distributions of the local references, the ideal phase-difference
//! measurement and the entanglement it leaves in the registers.

mod distribution;
mod formation;
mod povm;
mod visibility;

pub use distribution::*;
pub use formation::*;
pub use povm::*;
pub use visibility::*;
