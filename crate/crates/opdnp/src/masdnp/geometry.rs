//! Spinning-frame geometry: where the static field points in each molecular
//! frame as the rotor turns, and the instantaneous secular couplings that
//! follow from it.
//!
//! Frame chain: each interaction axis is fixed in the molecular frame; a
//! crystallite orientation maps molecular to rotor-body coordinates; the
//! body spins about its own z axis, which is tilted at the magic angle from
//! the static field.

use crate::consts::BETA_OVER_H_HZ_PER_T;
use crate::spincore::{dot, unit_vector, EulerAngles, Mat3};

use super::system::{DriveConfig, SpinSystemSpec};

/// cos of the magic angle, 1/sqrt(3).
pub const COS_MAGIC: f64 = 0.577_350_269_189_625_7;
/// sin of the magic angle, sqrt(2/3).
pub const SIN_MAGIC: f64 = 0.816_496_580_927_726;

/// Direction of the static field in the rotor-body frame at the given rotor
/// phase (rad). 2π-periodic by construction.
pub fn field_in_body(rotor_phase: f64) -> [f64; 3] {
    let (s, c) = rotor_phase.sin_cos();
    [SIN_MAGIC * c, -SIN_MAGIC * s, COS_MAGIC]
}

/// Effective g value along a field direction `b` expressed in the g-tensor
/// principal frame.
pub fn effective_g(g_principal: &[f64; 3], b: [f64; 3]) -> f64 {
    ((g_principal[0] * b[0]).powi(2)
        + (g_principal[1] * b[1]).powi(2)
        + (g_principal[2] * b[2]).powi(2))
    .sqrt()
}

/// Precomputed per-unit frame data for fast trajectory evaluation.
#[derive(Debug, Clone)]
pub struct UnitFrames {
    /// molecular → rotor-body rotation.
    pub mol_to_body: Mat3,
    /// body → molecular (transpose of the above).
    body_to_mol: Mat3,
    /// g_b principal frame ← molecular rotation (transpose of euler_ab).
    mol_to_gb: Mat3,
    /// inter-electron axis in the molecular frame.
    pub n_dip_mol: [f64; 3],
    /// hyperfine axis in the molecular frame.
    n_hf_mol: [f64; 3],
}

impl UnitFrames {
    pub fn new(spec: &SpinSystemSpec, crystallite: &EulerAngles) -> Self {
        let mol_to_body = crystallite.rotation_matrix();
        Self {
            mol_to_body,
            body_to_mol: mol_to_body.transpose(),
            mol_to_gb: spec.euler_ab.rotation_matrix().transpose(),
            n_dip_mol: unit_vector(spec.dipolar_angles.0, spec.dipolar_angles.1),
            n_hf_mol: unit_vector(spec.hyperfine_angles.0, spec.hyperfine_angles.1),
        }
    }

    /// Field direction in the molecular frame for a body-frame field `b`.
    pub fn field_in_mol(&self, b_body: [f64; 3]) -> [f64; 3] {
        self.body_to_mol.apply(b_body)
    }

    /// Instantaneous electron frequencies (Hz) at a molecular-frame field
    /// direction.
    pub fn electron_frequencies(
        &self,
        spec: &SpinSystemSpec,
        b_mol: [f64; 3],
        b0: f64,
    ) -> (f64, f64) {
        let g_a = effective_g(&spec.g_a, b_mol);
        let g_b = effective_g(&spec.g_b, self.mol_to_gb.apply(b_mol));
        (g_a * BETA_OVER_H_HZ_PER_T * b0, g_b * BETA_OVER_H_HZ_PER_T * b0)
    }

    /// Secular electron-electron dipolar coupling d·(3cos²Θ - 1)/2 (Hz).
    pub fn dipolar_secular(&self, spec: &SpinSystemSpec, b_mol: [f64; 3]) -> f64 {
        let c = dot(self.n_dip_mol, b_mol);
        spec.d_ab_hz * 0.5 * (3.0 * c * c - 1.0)
    }

    /// Magnitude of the pseudo-secular hyperfine amplitude, (3/2)·A·|cosΘ sinΘ| (Hz).
    pub fn hyperfine_pseudosecular(&self, spec: &SpinSystemSpec, b_mol: [f64; 3]) -> f64 {
        let c = dot(self.n_hf_mol, b_mol);
        let s = (1.0 - c * c).max(0.0).sqrt();
        1.5 * spec.a_hf_hz.abs() * c.abs() * s
    }
}

/// Resonance offsets (Hz) of the two electrons from the microwave frequency
/// and the nuclear Larmor frequency, at one rotor phase.
pub fn instantaneous_offsets(
    spec: &SpinSystemSpec,
    crystallite: &EulerAngles,
    rotor_phase: f64,
    drive: &DriveConfig,
) -> (f64, f64, f64) {
    let frames = UnitFrames::new(spec, crystallite);
    let b_mol = frames.field_in_mol(field_in_body(rotor_phase));
    let (nu_a, nu_b) = frames.electron_frequencies(spec, b_mol, drive.b0);
    (nu_a - drive.uw_frequency, nu_b - drive.uw_frequency, drive.nuclear_larmor())
}
