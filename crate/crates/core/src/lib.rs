//! Particle-number-resolved entanglement of bosonic mode states, transfer of
//! that entanglement onto registers, and phase-reference bounds.
//!
//! States live in a finite Fock space described by a [`ModeLayout`]; each
//! mode belongs to site A or B and is either a field mode or a register.
//! [`particle_entanglement`] averages the entanglement of the local-number
//! sectors, [`transfer::run_transfer`] moves it onto registers, and the
//! [`phase`] and [`uncertainty`] modules quantify what survives when the
//! local reference states are measured against each other.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod phase;
pub mod sector;
pub mod tolerances;
pub mod transfer;
pub mod uncertainty;

pub use error::{Error, Result};
pub use fock::{
    entropy_of_entanglement, partial_trace, trace_distance, trace_distance_aligned, von_neumann_entropy,
    BasisLabel, DensityOperator, ModeDescriptor, ModeKind, ModeLayout, PureState, Site,
};
pub use linalg::CMatrix;
pub use sector::{local_particle_number, particle_entanglement, sector_decompose, Sector, SectorDecomposition};
pub use transfer::{AncillaSpec, ProtocolConfig};
pub use uncertainty::{PhaseOperatorSpace, UncertaintyReport};
