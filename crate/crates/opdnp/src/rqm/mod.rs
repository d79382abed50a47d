//! Photophysics engine for the chromophore-radical excited state: the
//! quartet/doublet level scheme, ZFS-driven mixing rates with Arrhenius
//! temperature scaling, the selectivity factor and electron
//! hyperpolarization, selective-ISC populations, the 8-level kinetic solver,
//! and the reduction of optical pumping to an effective relaxation pair.

pub mod elements;
pub mod jscan;
pub mod kinetics;
pub mod levels;
pub mod params;
pub mod pumping;
pub mod rates;

pub use elements::{pair_basis, zfs_matrix_elements, PairLevel, ZfsElements};
pub use jscan::{j_scan, JScanRow};
pub use kinetics::{
    build_kinetic_generator, d0_polarization_trace, evolve_kinetics, KineticGenerator,
    KineticMethod,
};
pub use levels::{level_scheme, DqLevelScheme};
pub use params::{DLevel, KineticState, Level, QLevel, RqmParams, N_LEVELS, RQM_TRANSITIONS};
pub use pumping::{pumping_reduction, PumpingReduction};
pub use rates::{
    arrhenius_factor, dq_rate_constants, rqm_polarization, selectivity_factor, slr_direct_scaling,
    soisc_populations, ElementAveraging, RateOptions, RateTable,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RqmError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("selectivity denominator vanishes; zero feeding rates from {rates}")]
    ZeroDenominator { rates: String },

    #[error("kinetic solver instability (min population {min_population:.3e}); reduce the step")]
    SolverInstability { min_population: f64 },

    #[error(transparent)]
    Spin(#[from] crate::spincore::SpinError),
}
