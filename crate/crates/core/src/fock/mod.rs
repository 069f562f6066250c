//! Finite bosonic mode layouts, sparse pure states and density operators.

mod density;
mod entropy;
mod layout;
mod state;

pub use density::{partial_trace, trace_distance, trace_distance_aligned, DensityOperator};
pub use entropy::{entropy_of_entanglement, matrix_entropy, von_neumann_entropy};
pub use layout::{BasisLabel, ModeDescriptor, ModeKind, ModeLayout, Site};
pub use state::PureState;
