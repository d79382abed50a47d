//! Box-model MAS-DNP engine.
//!
//! Ensembles of {electron a, electron b, proton} units with inter-unit
//! dipolar couplings are propagated through Landau-Zener rotor events under
//! sample rotation, with relaxation, microwave saturation and optical
//! pumping of electron a, to predict the nuclear polarization gain. The
//! state is one longitudinal polarization per spin (the box-model reduction
//! of the full Liouville problem); event couplings follow the standard
//! fast-passage conventions and are exposed so alternatives can be tested.

pub mod ensemble;
pub mod events;
pub mod fit;
pub mod geometry;
pub mod propagate;
pub mod sweeps;
pub mod system;

pub use ensemble::{build_box, BoxEnsemble, BoxUnit, InterCoupling};
pub use events::{
    detect_box_events, detect_rotor_events, landau_zener_probability, EventKind, RotorEvent,
};
pub use fit::{fit_effective_field, linear_fit};
pub use geometry::{field_in_body, instantaneous_offsets, UnitFrames};
pub use propagate::{
    apply_event, relax_interval, relax_step, relaxation_targets, simulate_to_steady_state,
    PolarizationState, RelaxationTargets, SimDiagnostics, SimOptions,
};
pub use sweeps::{
    epsilon_b, field_profile, hyperpolarization_sweep, run_point, BoxTemplate, HpSweepRow,
    PointResult, ProfileRow, SweepMode,
};
pub use system::{DriveConfig, RelaxationSet, SpinSystemSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MasdnpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "cannot pack {n_units} units at {concentration_mm} mM with a \
         {min_distance_nm} nm exclusion distance"
    )]
    PackingInfeasible { n_units: usize, concentration_mm: f64, min_distance_nm: f64 },

    #[error("fit is degenerate: responses do not vary across the sweep")]
    FitDegenerate,

    #[error(transparent)]
    Spin(#[from] crate::spincore::SpinError),
}
