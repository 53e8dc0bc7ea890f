//! Two-qubit X-state dynamics in a noninertial frame with independent
//! amplitude- or phase-damping environments.
//!
//! The pipeline is: build an X state over Alice's mode `A` and Rob's mode `R`,
//! apply the Unruh transformation to `R` (tracing the region-II mode), couple
//! both qubits to vacuum environments `EA`/`ER` through dilation isometries,
//! then quantify entanglement for every two-qubit bipartition.
//!
//! Modules:
//! - [`qmat`]: dense complex matrices, Jacobi eigensolver, labelled density matrices
//! - [`model`]: states, Unruh isometry, channel dilations and Kraus sets
//! - [`entanglement`]: concurrence (spectral and X-state), negativity, PPT test
//! - [`analytic`]: closed-form reduced matrices and the errata audit
//! - [`sweep`]: (r, p) grid sweeps, sudden-death/birth boundaries, CSV output

pub mod analytic;
pub mod entanglement;
mod error;
pub mod model;
pub mod qmat;
pub mod sweep;

pub use error::{Error, Result};
