//! Boltzmann polarization of a two-level spin.

use crate::consts::{BOLTZMANN, PLANCK};

use super::SpinError;

/// Equilibrium polarization tanh(hν / 2kT) of a spin-1/2 with transition
/// frequency `frequency` (Hz) at temperature `temperature` (K). Positive for
/// positive frequency; odd in frequency.
pub fn thermal_polarization(frequency: f64, temperature: f64) -> Result<f64, SpinError> {
    if temperature <= 0.0 || !temperature.is_finite() {
        return Err(SpinError::NonPositiveTemperature(temperature));
    }
    Ok((PLANCK * frequency / (2.0 * BOLTZMANN * temperature)).tanh())
}
