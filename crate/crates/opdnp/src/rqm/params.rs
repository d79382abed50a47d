//! Input parameters and level bookkeeping for the excited-state engine.

use serde::{Deserialize, Serialize};

use super::RqmError;

/// Quartet sublevels, ordered by decreasing spin projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QLevel {
    P3h,
    P1h,
    M1h,
    M3h,
}

impl QLevel {
    pub const ALL: [QLevel; 4] = [QLevel::P3h, QLevel::P1h, QLevel::M1h, QLevel::M3h];

    /// Twice the spin projection (+3, +1, -1, -3).
    pub fn two_m(self) -> i32 {
        match self {
            QLevel::P3h => 3,
            QLevel::P1h => 1,
            QLevel::M1h => -1,
            QLevel::M3h => -3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            QLevel::P3h => "Q+3/2",
            QLevel::P1h => "Q+1/2",
            QLevel::M1h => "Q-1/2",
            QLevel::M3h => "Q-3/2",
        }
    }
}

/// Excited doublet sublevels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DLevel {
    P1h,
    M1h,
}

impl DLevel {
    pub const ALL: [DLevel; 2] = [DLevel::P1h, DLevel::M1h];

    pub fn two_m(self) -> i32 {
        match self {
            DLevel::P1h => 1,
            DLevel::M1h => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DLevel::P1h => "D1+1/2",
            DLevel::M1h => "D1-1/2",
        }
    }
}

/// The six quartet-doublet transitions carried by the kinetic model. The two
/// same-projection pairs are absent: they do not appear in the rate scheme
/// and carry zero rate.
pub const RQM_TRANSITIONS: [(QLevel, DLevel); 6] = [
    (QLevel::M3h, DLevel::P1h),
    (QLevel::M1h, DLevel::P1h),
    (QLevel::P3h, DLevel::P1h),
    (QLevel::M3h, DLevel::M1h),
    (QLevel::P1h, DLevel::M1h),
    (QLevel::P3h, DLevel::M1h),
];

/// Population indices of the 8-level kinetic vector, ordered
/// (Q+3/2, Q+1/2, Q-1/2, Q-3/2, D1+1/2, D1-1/2, D0+1/2, D0-1/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    QP3h = 0,
    QP1h = 1,
    QM1h = 2,
    QM3h = 3,
    D1P1h = 4,
    D1M1h = 5,
    D0P1h = 6,
    D0M1h = 7,
}

pub const N_LEVELS: usize = 8;

impl QLevel {
    pub fn kinetic_index(self) -> usize {
        match self {
            QLevel::P3h => 0,
            QLevel::P1h => 1,
            QLevel::M1h => 2,
            QLevel::M3h => 3,
        }
    }
}

impl DLevel {
    pub fn kinetic_index(self) -> usize {
        match self {
            DLevel::P1h => 4,
            DLevel::M1h => 5,
        }
    }
}

/// Photophysics inputs for the chromophore-radical excited-state engine.
///
/// Sign convention: `j_cr_cm < 0` for the systems studied here; the
/// quartet-doublet splitting is 3|J|.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqmParams {
    /// Excited-state exchange coupling (cm⁻¹), negative.
    pub j_cr_cm: f64,
    /// Triplet ZFS parameter D (cm⁻¹).
    pub d_zfs_cm: f64,
    /// Triplet ZFS parameter E (cm⁻¹).
    pub e_zfs_cm: f64,
    /// Mixing-rate prefactor (s⁻¹), rate of zero-point motion times the
    /// Franck-Condon factor; about 1e13.
    pub k0_dq: f64,
    /// Arrhenius activation energy (kJ/mol).
    pub e_a_kj_mol: f64,
    /// Sample temperature (K).
    pub temperature: f64,
    /// EPR resonance frequency ν (Hz); sets the electron Zeeman splitting.
    pub field_frequency: f64,
    /// Doublet quenching rate D1 → D0 (s⁻¹).
    pub k_qt: f64,
    /// Intrinsic quartet decay rate Q1 → D0 (s⁻¹).
    pub k_q0: f64,
    /// Quartet spin-lattice relaxation rate (s⁻¹), downhill.
    pub w_q1: f64,
    /// Excited-doublet spin-lattice relaxation rate (s⁻¹), downhill.
    pub w_d1: f64,
    /// Ground-doublet spin-lattice relaxation rate (s⁻¹), downhill.
    pub w_d0: f64,
    /// Initial populations in kinetic order.
    pub initial_populations: [f64; N_LEVELS],
}

impl RqmParams {
    pub fn validate(&self) -> Result<(), RqmError> {
        let rates = [self.k0_dq, self.k_qt, self.k_q0, self.w_q1, self.w_d1, self.w_d0];
        if rates.iter().any(|r| *r < 0.0 || !r.is_finite()) {
            return Err(RqmError::InvalidParams("rates must be finite and >= 0".into()));
        }
        if self.temperature <= 0.0 {
            return Err(RqmError::InvalidParams("temperature must be positive".into()));
        }
        if self.initial_populations.iter().any(|p| *p < 0.0) {
            return Err(RqmError::InvalidParams("initial populations must be >= 0".into()));
        }
        if !self.field_frequency.is_finite() || self.field_frequency <= 0.0 {
            return Err(RqmError::InvalidParams("field frequency must be positive".into()));
        }
        Ok(())
    }

    /// High-field reference parameter set: 527 GHz, 100 K, D = 0.31 cm⁻¹,
    /// E_a = 10.2 kJ/mol, k0 = 1e13 s⁻¹, with the quartet fed first.
    pub fn high_field_reference(j_cr_cm: f64) -> Self {
        Self {
            j_cr_cm,
            d_zfs_cm: 0.31,
            e_zfs_cm: 0.0,
            k0_dq: 1.0e13,
            e_a_kj_mol: 10.2,
            temperature: 100.0,
            field_frequency: 527.0e9,
            k_qt: 20.0e6,
            k_q0: 303.0,
            w_q1: 0.1e6,
            w_d1: 6.2e3,
            w_d0: 6.2e3,
            initial_populations: [1.0, 0.0, 0.0, 0.0, 0.22, 0.0, 0.0, 0.0],
        }
    }

    /// X-band analog of the reference set (9.5 GHz).
    pub fn x_band_reference(j_cr_cm: f64) -> Self {
        Self { field_frequency: 9.5e9, ..Self::high_field_reference(j_cr_cm) }
    }

    /// Fitted time-trace parameter set with the mixing pathway turned off
    /// (D = 0): only the selective initial populations relax through the
    /// quench. Initial doublet weight 0.75.
    pub fn trace_fit_isc_only() -> Self {
        Self {
            j_cr_cm: -3.4,
            d_zfs_cm: 0.0,
            e_zfs_cm: 0.0,
            k0_dq: 1.0e13,
            e_a_kj_mol: 10.4,
            temperature: 100.0,
            field_frequency: 9.5e9,
            k_qt: 20.0e6,
            k_q0: 303.0,
            w_q1: 0.1e6,
            w_d1: 6.2e3,
            w_d0: 6.2e3,
            initial_populations: [1.0, 0.0, 0.0, 0.0, 0.75, 0.0, 0.0, 0.0],
        }
    }

    /// Fitted time-trace parameter set with the mixing pathway active
    /// (D = 0.31 cm⁻¹, E_a = 10.4 kJ/mol, initial doublet weight 0.22).
    pub fn trace_fit_full() -> Self {
        Self {
            d_zfs_cm: 0.31,
            initial_populations: [1.0, 0.0, 0.0, 0.0, 0.22, 0.0, 0.0, 0.0],
            ..Self::trace_fit_isc_only()
        }
    }
}

/// One snapshot of the kinetic populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticState {
    /// Time (s).
    pub t: f64,
    pub populations: [f64; N_LEVELS],
}

impl KineticState {
    pub fn total(&self) -> f64 {
        self.populations.iter().sum()
    }
}
