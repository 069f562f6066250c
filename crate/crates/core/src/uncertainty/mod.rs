//! Pegg-Barnett phase operators on truncated spaces and the number-phase
//! uncertainty relations that bound the fringe visibility.

mod pegg_barnett;
mod report;
mod sampling;

pub use crate::phase::optimum_condition;
pub use pegg_barnett::*;
pub use report::*;
pub use sampling::*;
