//! Physical constants (CODATA 2018) and unit conversions.
//!
//! Engine-internal convention: Hamiltonian matrix elements are angular
//! frequencies (rad/s); user-facing spectroscopic quantities are exchanged
//! in Hz, cm⁻¹, T, K, kJ/mol and converted at the boundaries.

/// Planck constant (J s)
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant (J s)
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
/// Boltzmann constant (J/K)
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Molar gas constant (J mol⁻¹ K⁻¹)
pub const GAS_CONSTANT: f64 = 8.314_462_618;
/// Avogadro constant (mol⁻¹)
pub const AVOGADRO: f64 = 6.022_140_76e23;
/// Speed of light (m/s)
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Bohr magneton (J/T)
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Free-electron g factor (absolute value)
pub const G_ELECTRON: f64 = 2.002_319_304_362_56;
/// Proton gyromagnetic ratio over 2π (Hz/T)
pub const GAMMA_PROTON_HZ_PER_T: f64 = 42.577_478_518e6;
/// Bohr magneton over Planck constant (Hz/T); electron frequency is g·BETA_OVER_H·B0
pub const BETA_OVER_H_HZ_PER_T: f64 = BOHR_MAGNETON / PLANCK;
/// Vacuum permeability (T² m³ / J)
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Point-dipole electron-electron coupling constant (Hz nm³):
/// d(r) = DIPOLAR_HZ_NM3 / r³ for two free-electron spins at distance r (nm).
pub const DIPOLAR_HZ_NM3: f64 = {
    // mu0/4pi * (g beta)^2 / h, with lengths in nm
    1.0e-7 * (G_ELECTRON * BOHR_MAGNETON) * (G_ELECTRON * BOHR_MAGNETON) / PLANCK * 1.0e27
};

/// Convert a wavenumber (cm⁻¹) to a linear frequency (Hz).
pub fn cm1_to_hz(wavenumber: f64) -> f64 {
    wavenumber * SPEED_OF_LIGHT * 100.0
}

/// Convert a linear frequency (Hz) to a wavenumber (cm⁻¹).
pub fn hz_to_cm1(frequency: f64) -> f64 {
    frequency / (SPEED_OF_LIGHT * 100.0)
}

/// Convert a linear frequency (Hz) to an angular frequency (rad/s).
pub fn hz_to_rad_s(frequency: f64) -> f64 {
    2.0 * std::f64::consts::PI * frequency
}

/// Convert an angular frequency (rad/s) to a linear frequency (Hz).
pub fn rad_s_to_hz(omega: f64) -> f64 {
    omega / (2.0 * std::f64::consts::PI)
}

/// Convert a wavenumber (cm⁻¹) to an angular frequency (rad/s).
pub fn cm1_to_rad_s(wavenumber: f64) -> f64 {
    hz_to_rad_s(cm1_to_hz(wavenumber))
}

/// Convert an angular frequency (rad/s) to a wavenumber (cm⁻¹).
pub fn rad_s_to_cm1(omega: f64) -> f64 {
    hz_to_cm1(rad_s_to_hz(omega))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_round_trip() {
        let nu = 527.0e9;
        assert!((cm1_to_hz(hz_to_cm1(nu)) - nu).abs() < 1e-3);
        // 527 GHz is 17.58 cm^-1
        assert!((hz_to_cm1(527.0e9) - 17.58).abs() < 0.01);
    }

    #[test]
    fn dipolar_constant_scale() {
        // ~52 MHz nm^3; a 1.2 nm pair couples at ~30 MHz
        assert!((DIPOLAR_HZ_NM3 / 1e6 - 52.04).abs() < 0.2);
        let d = DIPOLAR_HZ_NM3 / 1.2f64.powi(3);
        assert!((d / 1e6 - 30.1).abs() < 0.3);
    }

    #[test]
    fn electron_frequency_at_18_8_t() {
        let nu = G_ELECTRON * BETA_OVER_H_HZ_PER_T * 18.8;
        assert!((nu / 1e9 - 526.9).abs() < 0.2);
    }
}
