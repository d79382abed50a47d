//! Spin-system, relaxation and drive descriptions for the box-model engine,
//! with the two built-in parameter sets used throughout.

use serde::{Deserialize, Serialize};

use crate::consts::{BETA_OVER_H_HZ_PER_T, GAMMA_PROTON_HZ_PER_T};
use crate::spincore::EulerAngles;

use super::MasdnpError;

/// One biradical-plus-proton unit: g-tensors of the two electrons, their
/// dipolar and exchange couplings, and the dipolar hyperfine of the proton
/// attached to electron a. Angles place each interaction axis in the
/// molecular frame (the g_a principal frame).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSystemSpec {
    /// Principal g values of electron a (the optically pumped one).
    pub g_a: [f64; 3],
    /// Principal g values of electron b.
    pub g_b: [f64; 3],
    /// Orientation of the g_b principal frame in the molecular frame.
    pub euler_ab: EulerAngles,
    /// Electron-electron dipolar coupling constant (Hz).
    pub d_ab_hz: f64,
    /// Direction (θ, φ) of the inter-electron vector in the molecular frame.
    pub dipolar_angles: (f64, f64),
    /// Ground-state exchange coupling (Hz).
    pub j_ab_hz: f64,
    /// Dipolar hyperfine constant of the proton on electron a (Hz).
    pub a_hf_hz: f64,
    /// Direction (θ_n, φ_n) of the hyperfine vector in the molecular frame.
    pub hyperfine_angles: (f64, f64),
}

impl SpinSystemSpec {
    pub fn validate(&self) -> Result<(), MasdnpError> {
        for g in self.g_a.iter().chain(self.g_b.iter()) {
            if !(*g > 1.9 && *g < 2.1) {
                return Err(MasdnpError::InvalidArgument(format!(
                    "g principal value {g} outside (1.9, 2.1)"
                )));
            }
        }
        for c in [self.d_ab_hz, self.j_ab_hz, self.a_hf_hz] {
            if !c.is_finite() {
                return Err(MasdnpError::InvalidArgument("couplings must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn g_a_iso(&self) -> f64 {
        self.g_a.iter().sum::<f64>() / 3.0
    }

    pub fn g_b_iso(&self) -> f64 {
        self.g_b.iter().sum::<f64>() / 3.0
    }

    /// Hetero-biradical: nitroxide (a) tethered to a Trityl (b).
    pub fn trityl_tempo() -> Self {
        Self {
            g_a: [2.0095, 2.0061, 2.0021],
            g_b: [2.0032, 2.0030, 2.0027],
            euler_ab: EulerAngles::from_degrees(90.0, 90.0, 90.0),
            d_ab_hz: 30.0e6,
            dipolar_angles: (90f64.to_radians(), 180f64.to_radians()),
            j_ab_hz: 0.0,
            a_hf_hz: 3.0e6,
            hyperfine_angles: (90f64.to_radians(), 0.0),
        }
    }

    /// Bis-nitroxide with AMUPol-like tensors and couplings.
    pub fn amupol() -> Self {
        Self {
            g_a: [2.00923, 2.00619, 2.00212],
            g_b: [2.00923, 2.00619, 2.00212],
            euler_ab: EulerAngles::from_degrees(58.0, 57.0, 126.0),
            d_ab_hz: 35.0e6,
            dipolar_angles: (78f64.to_radians(), 167f64.to_radians()),
            j_ab_hz: -16.0e6,
            a_hf_hz: 3.0e6,
            hyperfine_angles: (0.0, 90f64.to_radians()),
        }
    }
}

/// Longitudinal/transverse relaxation times (s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationSet {
    /// Electron a, effective value under optical pumping.
    pub t1e_a_eff: f64,
    /// Electron b.
    pub t1e_b: f64,
    /// Transverse electron relaxation (bounds the relaxation substep).
    pub t2e: f64,
    /// Proton.
    pub t1n: f64,
}

impl RelaxationSet {
    pub fn validate(&self) -> Result<(), MasdnpError> {
        for t in [self.t1e_a_eff, self.t1e_b, self.t2e, self.t1n] {
            if !(t > 0.0) {
                return Err(MasdnpError::InvalidArgument(
                    "relaxation times must be positive".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn trityl_tempo() -> Self {
        Self { t1e_a_eff: 10.0e-6, t1e_b: 1.0e-3, t2e: 2.5e-6, t1n: 0.1 }
    }

    pub fn amupol() -> Self {
        Self { t1e_a_eff: 10.0e-6, t1e_b: 0.3e-3, t2e: 2.5e-6, t1n: 0.1 }
    }
}

/// External conditions: static field, temperature, spinning rate, microwave
/// drive and the optical pumping target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    /// Microwave frequency (Hz).
    pub uw_frequency: f64,
    /// Microwave nutation frequency (Hz); 0 disables the microwave events.
    pub uw_nutation: f64,
    /// Pumped steady-state polarization of electron a (l·T_z⁰); `None`
    /// disables pumping and electron a relaxes to its thermal value.
    pub optical_target: Option<f64>,
    /// Static field (T).
    pub b0: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Spinning frequency (Hz).
    pub mas_rate: f64,
}

impl DriveConfig {
    pub fn validate(&self) -> Result<(), MasdnpError> {
        if !(self.mas_rate > 0.0) {
            return Err(MasdnpError::InvalidArgument("spinning rate must be positive".into()));
        }
        if !(self.temperature > 0.0) {
            return Err(MasdnpError::InvalidArgument("temperature must be positive".into()));
        }
        if !(self.b0 > 0.0) {
            return Err(MasdnpError::InvalidArgument("field must be positive".into()));
        }
        if let Some(t) = self.optical_target {
            if !(-1.0..=1.0).contains(&t) {
                return Err(MasdnpError::InvalidArgument(
                    "optical target must lie in [-1, 1]".into(),
                ));
            }
        }
        Ok(())
    }

    /// Nuclear Larmor frequency (Hz) of the proton at this field.
    pub fn nuclear_larmor(&self) -> f64 {
        GAMMA_PROTON_HZ_PER_T * self.b0
    }

    /// Electron frequency (Hz) for an isotropic g value at this field.
    pub fn electron_frequency(&self, g_iso: f64) -> f64 {
        g_iso * BETA_OVER_H_HZ_PER_T * self.b0
    }

    /// 18.8 T / 526.9 GHz / 8 kHz / 100 K reference conditions.
    pub fn high_field_reference() -> Self {
        Self {
            uw_frequency: 526.9e9,
            uw_nutation: 0.2e6,
            optical_target: None,
            b0: 18.8,
            temperature: 100.0,
            mas_rate: 8.0e3,
        }
    }
}
