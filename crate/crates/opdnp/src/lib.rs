//! Simulation toolkit for optically pumped magic-angle-spinning DNP.
//!
//! Three engines sit behind a common CLI:
//!
//! * [`spincore`] — spin operators, frame rotations, lab-frame ZFS
//!   decomposition, powder grids and thermal polarization.
//! * [`rqm`] — excited-state photophysics of a chromophore-radical pair:
//!   quartet/doublet level scheme, ZFS-driven mixing rate constants with
//!   Arrhenius scaling, the selectivity factor and the resulting electron
//!   hyperpolarization, an 8-level kinetic solver, and the reduction of the
//!   optical pumping to an effective relaxation pair for the MAS engine.
//! * [`masdnp`] — box-model MAS-DNP: ensembles of {electron, electron,
//!   proton} units propagated through Landau-Zener rotor events with
//!   relaxation, microwave saturation and optical pumping, producing the
//!   nuclear polarization gain, field profiles, hyperpolarization sweeps and
//!   effective-field fits.
//!
//! The [`harness`] module parses unit-checked configuration files, schedules
//! sweep tasks over a worker pool with a deterministic reduction order, and
//! writes manifest/CSV/JSON artifacts for every run.

pub mod consts;
pub mod harness;
pub mod masdnp;
pub mod rqm;
pub mod spincore;
