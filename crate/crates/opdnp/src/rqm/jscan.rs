//! Exchange-coupling scans of the selectivity factor and hyperpolarization.

use crate::spincore::Orientation;

use super::params::{DLevel, QLevel, RqmParams};
use super::rates::{dq_rate_constants, rqm_polarization, selectivity_factor, RateOptions};
use super::RqmError;

/// One scan row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JScanRow {
    /// Exchange coupling (cm⁻¹).
    pub j_cm: f64,
    /// Selectivity factor.
    pub r_d1: f64,
    /// Feeding rate of the resonance-tuned transition Q-3/2 → D1+1/2 (s⁻¹).
    pub k_dq: f64,
    /// Electron hyperpolarization (1 - R)/(1 + R).
    pub polarization: f64,
}

/// Scan the selectivity factor over exchange couplings. Only negative
/// couplings describe the systems modeled here; positive or zero values are
/// rejected.
pub fn j_scan(
    params: &RqmParams,
    j_values_cm: &[f64],
    grid: &[Orientation],
    options: &RateOptions,
) -> Result<Vec<JScanRow>, RqmError> {
    if j_values_cm.is_empty() {
        return Err(RqmError::InvalidParams("scan requires at least one J value".into()));
    }
    if let Some(bad) = j_values_cm.iter().find(|j| **j >= 0.0) {
        return Err(RqmError::InvalidParams(format!(
            "exchange coupling must be negative, got {bad} cm^-1"
        )));
    }

    let mut rows = Vec::with_capacity(j_values_cm.len());
    for &j in j_values_cm {
        let p = RqmParams { j_cr_cm: j, ..params.clone() };
        let table = dq_rate_constants(&p, grid, options)?;
        let r_d1 = selectivity_factor(&table)?;
        rows.push(JScanRow {
            j_cm: j,
            r_d1,
            k_dq: table.k_qd(QLevel::M3h, DLevel::P1h),
            polarization: rqm_polarization(r_d1),
        });
    }
    Ok(rows)
}
