//! Reduction of the optical pumping to an effective relaxation pair.
//!
//! The pumped chromophore state and the radical exchange polarization at a
//! rate r while the chromophore is driven toward its hyperpolarized level
//! T_z⁰ with time constant T1_T and the radical relaxes toward its own
//! equilibrium with T1e. At steady state the radical polarization is a
//! convex combination of the two targets; for r·T1e ≫ 1 and fast pumping it
//! approaches T_z⁰ to first order in 1/(r·T1e). The MAS engine only needs
//! the resulting pair (effective target, effective time constant).

use serde::{Deserialize, Serialize};

use super::RqmError;

/// Effective optical-pumping parameters consumed by the MAS engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpingReduction {
    /// Steady-state radical polarization under pumping (the product l·T_z⁰).
    pub l_tz0: f64,
    /// Effective relaxation time toward that target (s).
    pub t1_eff: f64,
}

/// Solve the coupled steady state exactly.
///
/// * `tz0` — hyperpolarized chromophore target (dimensionless, |tz0| ≤ 1)
/// * `t1_t` — chromophore pumping time constant (s)
/// * `r` — chromophore-radical equilibration rate (s⁻¹), 0 decouples
/// * `t1e_no` — radical longitudinal relaxation time (s)
/// * `radical_eq` — radical thermal polarization (set 0 to drop the radical
///   thermal source, the usual pumped-regime reduction)
pub fn pumping_reduction(
    tz0: f64,
    t1_t: f64,
    r: f64,
    t1e_no: f64,
    radical_eq: f64,
) -> Result<PumpingReduction, RqmError> {
    if !(t1_t > 0.0) || !(t1e_no > 0.0) {
        return Err(RqmError::InvalidParams("time constants must be positive".into()));
    }
    if !(r >= 0.0) {
        return Err(RqmError::InvalidParams("equilibration rate must be >= 0".into()));
    }
    if tz0.abs() > 1.0 || radical_eq.abs() > 1.0 {
        return Err(RqmError::InvalidParams("polarizations must lie in [-1, 1]".into()));
    }

    // steady state of
    //   dQ/dt = tz0/t1_t      - (1/t1_t + r) Q + r S
    //   dS/dt = eq/t1e_no + r Q - (1/t1e_no + r) S
    let a11 = 1.0 / t1_t + r;
    let a22 = 1.0 / t1e_no + r;
    let det = a11 * a22 - r * r;
    let s = (a11 * (radical_eq / t1e_no) + r * (tz0 / t1_t)) / det;

    // slow relaxation eigenvalue of the coupled pair
    let tr = -(a11 + a22);
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let lambda_slow = 0.5 * (tr + disc);
    let t1_eff = -1.0 / lambda_slow;

    Ok(PumpingReduction { l_tz0: s, t1_eff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_exchange_reaches_pump_target() {
        // r -> infinity with fast pumping: the radical sits at tz0
        let p = pumping_reduction(-0.75, 1e-7, 1e9, 0.3e-3, 0.0).unwrap();
        assert!((p.l_tz0 - (-0.75)).abs() < 1e-3 * 0.75);
    }

    #[test]
    fn decoupled_radical_keeps_equilibrium() {
        let p = pumping_reduction(0.12, 1e-6, 0.0, 0.3e-3, 0.12).unwrap();
        assert!((p.l_tz0 - 0.12).abs() < 1e-12);
        // and the slow time constant is the radical's own T1
        assert!((p.t1_eff - 0.3e-3).abs() < 1e-9);
    }

    #[test]
    fn steady_state_is_convex_combination() {
        for r in [0.0, 1e2, 1e4, 1e6, 1e9] {
            let p = pumping_reduction(-0.75, 2e-6, r, 0.3e-3, 0.12).unwrap();
            assert!(p.l_tz0 <= 0.12 + 1e-12 && p.l_tz0 >= -0.75 - 1e-12);
            assert!(p.l_tz0.abs() <= 1.0);
            assert!(p.t1_eff > 0.0);
        }
    }

    #[test]
    fn reference_regime_within_five_percent() {
        // r = 1e5 s^-1, T1e = 0.3 ms, pumping fast: |S - tz0| < 0.05 |tz0|
        let tz0 = -0.75;
        let p = pumping_reduction(tz0, 1e-6, 1e5, 0.3e-3, 0.12).unwrap();
        assert!((p.l_tz0 - tz0).abs() < 0.05 * tz0.abs(), "l_tz0 = {}", p.l_tz0);
    }

    #[test]
    fn first_order_deviation_in_inverse_r() {
        // with the radical source dropped, 1 - S/tz0 ≈ T1_T/T1e + 1/(r T1e)
        let (t1_t, t1e) = (1e-7, 0.3e-3);
        for r in [1e5, 1e6, 1e7] {
            let p = pumping_reduction(-0.75, t1_t, r, t1e, 0.0).unwrap();
            let dev = 1.0 - p.l_tz0 / -0.75;
            let expect = t1_t / t1e + 1.0 / (r * t1e);
            assert!((dev - expect).abs() < 0.1 * expect, "r={r}: dev {dev} vs {expect}");
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(pumping_reduction(0.5, 0.0, 1.0, 1.0, 0.0).is_err());
        assert!(pumping_reduction(0.5, 1.0, -1.0, 1.0, 0.0).is_err());
        assert!(pumping_reduction(1.5, 1.0, 1.0, 1.0, 0.0).is_err());
    }
}
