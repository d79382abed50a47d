//! Polarization propagation through rotor events.
//!
//! The state is one longitudinal polarization per spin; coherences are not
//! carried (they decay on the T2e scale, which only enters through the
//! validity of the event probabilities). Between events every polarization
//! relaxes exactly exponentially toward its own target; at an event the
//! populations of the two crossing levels are exchanged with the
//! Landau-Zener weight, which at the polarization level gives the update
//! rules below. In debug builds every polarization is asserted to stay in
//! [-1, 1] after every step.

use serde::Serialize;

use crate::rqm::PumpingReduction;
use crate::spincore::thermal_polarization;

use super::ensemble::BoxEnsemble;
use super::events::{detect_box_events, EventKind, RotorEvent};
use super::system::{DriveConfig, RelaxationSet};
use super::MasdnpError;

/// Longitudinal polarizations of every spin in a box at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationState {
    pub t: f64,
    /// Electron polarizations, global index 2u/2u+1 for unit u.
    pub p_e: Vec<f64>,
    /// Proton polarizations, one per unit.
    pub p_n: Vec<f64>,
}

/// Relaxation targets and time constants, one per spin.
#[derive(Debug, Clone)]
pub struct RelaxationTargets {
    pub target_e: Vec<f64>,
    pub tau_e: Vec<f64>,
    pub target_n: f64,
    pub tau_n: f64,
    /// Substep bound (s); relaxation intervals are chopped to this length.
    pub max_step: f64,
}

/// Build per-spin relaxation targets: electron b relaxes to its thermal
/// polarization with T1e_b; electron a to the pumped target with T1_eff
/// when pumping is active, else to its thermal value with T1e_a_eff; the
/// proton to its thermal polarization with T1n.
pub fn relaxation_targets(
    ensemble: &BoxEnsemble,
    relax: &RelaxationSet,
    drive: &DriveConfig,
    pumping: Option<&PumpingReduction>,
) -> Result<RelaxationTargets, MasdnpError> {
    relax.validate()?;
    drive.validate()?;
    let mut target_e = Vec::with_capacity(ensemble.n_electrons());
    let mut tau_e = Vec::with_capacity(ensemble.n_electrons());
    for unit in &ensemble.units {
        let thermal_a = thermal_polarization(
            drive.electron_frequency(unit.spec.g_a_iso()),
            drive.temperature,
        )?;
        let thermal_b = thermal_polarization(
            drive.electron_frequency(unit.spec.g_b_iso()),
            drive.temperature,
        )?;
        match pumping {
            Some(p) => {
                target_e.push(p.l_tz0);
                tau_e.push(p.t1_eff);
            }
            None => {
                target_e.push(thermal_a);
                tau_e.push(relax.t1e_a_eff);
            }
        }
        target_e.push(thermal_b);
        tau_e.push(relax.t1e_b);
    }
    let target_n = thermal_polarization(drive.nuclear_larmor(), drive.temperature)?;
    Ok(RelaxationTargets {
        target_e,
        tau_e,
        target_n,
        tau_n: relax.t1n,
        max_step: relax.t2e,
    })
}

/// Exponential relaxation of every spin over `dt` (callers keep dt within
/// `targets.max_step`; the steady-state driver chops its intervals).
pub fn relax_step(state: &mut PolarizationState, dt: f64, targets: &RelaxationTargets) {
    debug_assert!(dt > 0.0 && dt <= targets.max_step * (1.0 + 1e-9));
    for (p, (target, tau)) in state
        .p_e
        .iter_mut()
        .zip(targets.target_e.iter().zip(targets.tau_e.iter()))
    {
        *p = target + (*p - target) * (-dt / tau).exp();
        debug_assert!(p.abs() <= 1.0 + 1e-12);
    }
    let decay = (-dt / targets.tau_n).exp();
    for p in state.p_n.iter_mut() {
        *p = targets.target_n + (*p - targets.target_n) * decay;
        debug_assert!(p.abs() <= 1.0 + 1e-12);
    }
}

/// Relax over an arbitrary interval by chopping to the substep bound.
pub fn relax_interval(state: &mut PolarizationState, dt: f64, targets: &RelaxationTargets) {
    let mut remaining = dt;
    while remaining > 0.0 {
        let step = remaining.min(targets.max_step);
        relax_step(state, step, targets);
        remaining -= step;
    }
}

/// Apply one rotor event to the polarization state.
///
/// * microwave: P ← (1-p)·P (saturation exchange toward 0)
/// * electron pair: partial swap, P1 ← (1-p)P1 + p·P2 and symmetrically;
///   conserves P1 + P2 exactly
/// * cross effect: exchange of the two crossing product levels
///   |α_a β_b, n⟩ ↔ |β_a α_b, n'⟩; with the branch sign s this moves
///   δ = (p/4)·[(P_a - P_b) + s·P_n·(1 - P_a P_b)] and conserves both
///   P_a + P_b and P_a - s·P_n
pub fn apply_event(state: &mut PolarizationState, event: &RotorEvent) {
    let p = event.probability;
    match event.kind {
        EventKind::Microwave { electron } => {
            state.p_e[electron] *= 1.0 - p;
        }
        EventKind::DipolarExchange { e1, e2 } => {
            let (a, b) = (state.p_e[e1], state.p_e[e2]);
            state.p_e[e1] = (1.0 - p) * a + p * b;
            state.p_e[e2] = (1.0 - p) * b + p * a;
        }
        EventKind::CrossEffect { e_a, e_b, nucleus, branch } => {
            let s = branch as f64;
            let (pa, pb, pn) = (state.p_e[e_a], state.p_e[e_b], state.p_n[nucleus]);
            let delta = 0.25 * p * ((pa - pb) + s * pn * (1.0 - pa * pb));
            state.p_e[e_a] = pa - 2.0 * delta;
            state.p_e[e_b] = pb + 2.0 * delta;
            state.p_n[nucleus] = pn - s * 2.0 * delta;
        }
    }
    debug_assert!(state.p_e.iter().chain(state.p_n.iter()).all(|x| x.abs() <= 1.0 + 1e-12));
}

/// Knobs of the steady-state driver.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    pub samples_per_period: usize,
    pub max_rotor_periods: usize,
    /// Relative period-to-period change below which a proton counts as
    /// stationary.
    pub convergence_tol: f64,
    /// Consecutive stationary periods required to declare convergence.
    pub convergence_streak: usize,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            samples_per_period: 2048,
            max_rotor_periods: 20_000,
            convergence_tol: 1e-4,
            convergence_streak: 10,
        }
    }
}

/// Outcome bookkeeping of a steady-state run.
#[derive(Debug, Clone, Serialize)]
pub struct SimDiagnostics {
    pub converged: bool,
    pub periods: usize,
    /// Per-unit maximum |P_a - P_b| over the final period.
    pub max_pol_diff: Vec<f64>,
    /// Per-unit count of cross-effect events per period.
    pub ce_events: Vec<usize>,
    /// Max relative proton change per period (one entry per period).
    pub history: Vec<f64>,
    /// Largest violation of the two cross-effect conserved combinations
    /// observed over the final period.
    pub ce_invariant_error: f64,
}

/// Propagate a box to its quasi-periodic steady state: relaxation between
/// the events of each rotor period, event exchanges at the crossings,
/// repeated until every proton polarization is stationary or the period
/// budget runs out. Identical inputs give identical output.
pub fn simulate_to_steady_state(
    ensemble: &BoxEnsemble,
    relax: &RelaxationSet,
    drive: &DriveConfig,
    pumping: Option<&PumpingReduction>,
    options: &SimOptions,
) -> Result<(PolarizationState, SimDiagnostics), MasdnpError> {
    let targets = relaxation_targets(ensemble, relax, drive, pumping)?;
    let events = detect_box_events(ensemble, drive, options.samples_per_period)?;
    let period = 1.0 / drive.mas_rate;

    let mut ce_events = vec![0usize; ensemble.n_nuclei()];
    for e in &events {
        if let EventKind::CrossEffect { nucleus, .. } = e.kind {
            ce_events[nucleus] += 1;
        }
    }

    // thermal start: electrons and proton at their Boltzmann values
    let mut state = PolarizationState {
        t: 0.0,
        p_e: (0..ensemble.n_electrons())
            .map(|e| {
                let unit = &ensemble.units[e / 2];
                let g = if e % 2 == 0 { unit.spec.g_a_iso() } else { unit.spec.g_b_iso() };
                thermal_polarization(drive.electron_frequency(g), drive.temperature)
                    .expect("validated drive")
            })
            .collect(),
        p_n: vec![targets.target_n; ensemble.n_nuclei()],
    };

    let n_units = ensemble.units.len();
    let mut history = Vec::new();
    let mut prev_pn = state.p_n.clone();
    let mut streak = 0usize;
    let mut converged = false;
    let mut periods = 0usize;
    let mut max_pol_diff = vec![0.0f64; n_units];
    let mut ce_invariant_error = 0.0f64;
    let pn_floor = targets.target_n.abs().max(1e-12);

    while periods < options.max_rotor_periods {
        let final_period = streak + 1 >= options.convergence_streak
            || periods + 1 == options.max_rotor_periods;
        if final_period {
            max_pol_diff.iter_mut().for_each(|d| *d = 0.0);
            ce_invariant_error = 0.0;
        }

        let mut t_in_period = 0.0;
        let record_diff = |state: &PolarizationState, diffs: &mut [f64]| {
            for (u, d) in diffs.iter_mut().enumerate() {
                *d = d.max((state.p_e[2 * u] - state.p_e[2 * u + 1]).abs());
            }
        };
        if final_period {
            record_diff(&state, &mut max_pol_diff);
        }
        for event in &events {
            let gap = event.time - t_in_period;
            if gap > 0.0 {
                relax_interval(&mut state, gap, &targets);
                t_in_period = event.time;
            }
            if final_period {
                if let EventKind::CrossEffect { e_a, e_b, nucleus, branch } = event.kind {
                    let s = branch as f64;
                    let before_sum = state.p_e[e_a] + state.p_e[e_b];
                    let before_branch = state.p_e[e_a] - s * state.p_n[nucleus];
                    apply_event(&mut state, event);
                    let after_sum = state.p_e[e_a] + state.p_e[e_b];
                    let after_branch = state.p_e[e_a] - s * state.p_n[nucleus];
                    ce_invariant_error = ce_invariant_error
                        .max((after_sum - before_sum).abs())
                        .max((after_branch - before_branch).abs());
                } else {
                    apply_event(&mut state, event);
                }
                record_diff(&state, &mut max_pol_diff);
            } else {
                apply_event(&mut state, event);
            }
        }
        let tail = period - t_in_period;
        if tail > 0.0 {
            relax_interval(&mut state, tail, &targets);
        }
        if final_period {
            record_diff(&state, &mut max_pol_diff);
        }
        periods += 1;
        state.t = periods as f64 * period;

        let max_rel = state
            .p_n
            .iter()
            .zip(prev_pn.iter())
            .map(|(now, before)| (now - before).abs() / now.abs().max(pn_floor))
            .fold(0.0, f64::max);
        history.push(max_rel);
        prev_pn.copy_from_slice(&state.p_n);

        if max_rel < options.convergence_tol {
            streak += 1;
            if streak >= options.convergence_streak {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
    }

    Ok((
        state,
        SimDiagnostics {
            converged,
            periods,
            max_pol_diff,
            ce_events,
            history,
            ce_invariant_error,
        },
    ))
}
