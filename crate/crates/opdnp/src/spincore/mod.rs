//! Spin-algebra and geometry kernel: spin operators, multi-spin embedding,
//! frame rotations, lab-frame ZFS decomposition, powder grids and thermal
//! polarization. Everything is a pure function of its inputs and all values
//! are immutable after construction, so they can be shared freely across
//! worker threads.

pub mod linalg;
pub mod operators;
pub mod powder;
pub mod rotation;
pub mod thermal;
pub mod zfs;

pub use linalg::{eigh_real, CMatrix};
pub use operators::{embed, spin_operators, SpinOperatorSet};
pub use powder::{powder_grid, Orientation, PowderScheme};
pub use rotation::{dot, norm, unit_vector, EulerAngles, Mat3};
pub use thermal::thermal_polarization;
pub use zfs::{build_zfs_hamiltonian, zfs_lab_coefficients, ZfsLabCoefficients};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("multiplicity must be >= 2 (triplet operators require exactly 3), got {0}")]
    InvalidMultiplicity(usize),

    #[error("slot {slot} out of range for {slots} spins")]
    SlotOutOfRange { slot: usize, slots: usize },

    #[error("operator dimension {found} does not match slot dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),

    #[error("powder grid must contain at least one orientation")]
    EmptyGrid,

    #[error("orientation file error: {0}")]
    GridFile(String),
}
