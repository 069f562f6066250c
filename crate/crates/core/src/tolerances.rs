//! Numerical thresholds shared by the library.

/// Amplitudes below this magnitude are not stored in a [`PureState`](crate::PureState).
pub const AMPLITUDE_DROP: f64 = 1e-15;

/// Allowed deviation of a pure state's squared norm from 1.
pub const NORM_TOL: f64 = 1e-10;

/// Entrywise Hermiticity tolerance for density operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Most negative eigenvalue accepted for a density operator.
pub const PSD_TOL: f64 = 1e-10;

/// Allowed deviation of a density operator's trace from 1.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues below this are treated as zero inside `λ log₂ λ`.
pub const EIGEN_CLIP: f64 = 1e-12;

/// Number sectors lighter than this are discarded.
pub const SECTOR_DROP: f64 = 1e-14;

/// Tail weight allowed near the truncation edge of a Pegg-Barnett space.
pub const PHYSICAL_TAIL: f64 = 1e-10;

/// Slack below which an uncertainty inequality counts as violated.
pub const INEQUALITY_SLACK: f64 = -1e-9;
