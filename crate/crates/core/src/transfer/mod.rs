//! Moving local-number-resolved entanglement onto register modes.

mod ancilla;
mod gates;
mod grid;
mod protocol;
mod registers;

pub use ancilla::*;
pub use gates::{hiding_operation, occupation_cnot};
pub use grid::{minimum_grid, phase_grid_register_state};
pub use protocol::{
    register_mode_id, run_transfer, total_particles, transfer_full_state, ProtocolConfig,
    DEFAULT_TRUNCATION,
};
pub use registers::*;
