//! Ensemble-averaged polarization gains: single runs, field profiles and
//! hyperpolarization sweeps over replicated boxes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rqm::PumpingReduction;
use crate::spincore::thermal_polarization;

use super::ensemble::build_box;
use super::propagate::{simulate_to_steady_state, SimDiagnostics, SimOptions};
use super::system::{DriveConfig, RelaxationSet, SpinSystemSpec};
use super::MasdnpError;

/// Nuclear polarization gain: the steady-state proton polarization over its
/// Boltzmann value at the drive's field and temperature. Signed, as defined.
pub fn epsilon_b(p_n: f64, drive: &DriveConfig) -> Result<f64, MasdnpError> {
    drive.validate()?;
    let eq = thermal_polarization(drive.nuclear_larmor(), drive.temperature)?;
    if eq == 0.0 {
        return Err(MasdnpError::InvalidArgument("thermal proton polarization is zero".into()));
    }
    Ok(p_n / eq)
}

/// Recipe for building replicated boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxTemplate {
    pub spec: SpinSystemSpec,
    pub n_units: usize,
    pub concentration_mm: f64,
    pub min_distance_nm: f64,
    /// Independent boxes averaged per point.
    pub replicas: usize,
    pub base_seed: u64,
}

impl BoxTemplate {
    pub fn new(spec: SpinSystemSpec, n_units: usize, replicas: usize, base_seed: u64) -> Self {
        Self {
            spec,
            n_units,
            concentration_mm: 10.0,
            min_distance_nm: 4.2,
            replicas,
            base_seed,
        }
    }

    fn replica_seed(&self, replica: usize) -> u64 {
        self.base_seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(replica as u64 + 1))
    }
}

/// Irradiation mode of a profile point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Microwaves only.
    Conventional,
    /// Optical pumping only (nutation forced to 0).
    Optical,
    /// Both.
    OpticalMicrowave,
}

impl SweepMode {
    pub const ALL: [SweepMode; 3] =
        [SweepMode::Conventional, SweepMode::Optical, SweepMode::OpticalMicrowave];

    pub fn label(&self) -> &'static str {
        match self {
            SweepMode::Conventional => "conventional",
            SweepMode::Optical => "optical",
            SweepMode::OpticalMicrowave => "optical-uw",
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            SweepMode::Conventional => 0,
            SweepMode::Optical => 1,
            SweepMode::OpticalMicrowave => 2,
        }
    }
}

/// Replica-averaged outcome of one simulation point.
#[derive(Debug, Clone)]
pub struct PointResult {
    pub epsilon_b: f64,
    pub p_n_mean: f64,
    pub p_e_a_mean: f64,
    pub p_e_b_mean: f64,
    pub converged: bool,
    pub periods: usize,
    pub replica_diagnostics: Vec<SimDiagnostics>,
}

/// Run all replicas of one (drive, pumping) point and average; replicas run
/// in parallel, the reduction is in replica order.
pub fn run_point(
    template: &BoxTemplate,
    relax: &RelaxationSet,
    drive: &DriveConfig,
    pumping: Option<&PumpingReduction>,
    options: &SimOptions,
) -> Result<PointResult, MasdnpError> {
    if template.replicas == 0 {
        return Err(MasdnpError::InvalidArgument("at least one replica required".into()));
    }
    let runs: Vec<Result<_, MasdnpError>> = (0..template.replicas)
        .into_par_iter()
        .map(|r| {
            let ensemble = build_box(
                &template.spec,
                template.n_units,
                template.concentration_mm,
                template.min_distance_nm,
                template.replica_seed(r),
            )?;
            simulate_to_steady_state(&ensemble, relax, drive, pumping, options)
        })
        .collect();

    let mut p_n_sum = 0.0;
    let mut p_a_sum = 0.0;
    let mut p_b_sum = 0.0;
    let mut n_units_total = 0usize;
    let mut converged = true;
    let mut periods = 0usize;
    let mut diagnostics = Vec::with_capacity(template.replicas);
    for run in runs {
        let (state, diag) = run?;
        let n = state.p_n.len();
        p_n_sum += state.p_n.iter().sum::<f64>();
        p_a_sum += (0..n).map(|u| state.p_e[2 * u]).sum::<f64>();
        p_b_sum += (0..n).map(|u| state.p_e[2 * u + 1]).sum::<f64>();
        n_units_total += n;
        converged &= diag.converged;
        periods = periods.max(diag.periods);
        diagnostics.push(diag);
    }
    let p_n_mean = p_n_sum / n_units_total as f64;
    Ok(PointResult {
        epsilon_b: epsilon_b(p_n_mean, drive)?,
        p_n_mean,
        p_e_a_mean: p_a_sum / n_units_total as f64,
        p_e_b_mean: p_b_sum / n_units_total as f64,
        converged,
        periods,
        replica_diagnostics: diagnostics,
    })
}

fn drive_for_mode(base: &DriveConfig, mode: SweepMode, b0: f64) -> DriveConfig {
    let mut d = base.clone();
    d.b0 = b0;
    match mode {
        SweepMode::Conventional => d.optical_target = None,
        SweepMode::Optical => d.uw_nutation = 0.0,
        SweepMode::OpticalMicrowave => {}
    }
    d
}

fn pumping_of(drive: &DriveConfig, relax: &RelaxationSet) -> Option<PumpingReduction> {
    drive
        .optical_target
        .map(|t| PumpingReduction { l_tz0: t, t1_eff: relax.t1e_a_eff })
}

/// One row of a field profile.
#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub b0: f64,
    pub mode: SweepMode,
    pub epsilon_b: f64,
    pub converged: bool,
    pub point: PointResult,
}

/// Field profile at fixed microwave frequency: one converged point per
/// (field, mode) combination.
pub fn field_profile(
    template: &BoxTemplate,
    relax: &RelaxationSet,
    drive: &DriveConfig,
    b0_values: &[f64],
    modes: &[SweepMode],
    options: &SimOptions,
) -> Result<Vec<ProfileRow>, MasdnpError> {
    if b0_values.is_empty() {
        return Err(MasdnpError::InvalidArgument("field list is empty".into()));
    }
    if drive.optical_target.is_none()
        && modes.iter().any(|m| *m != SweepMode::Conventional)
    {
        return Err(MasdnpError::InvalidArgument(
            "optical modes require an optical target".into(),
        ));
    }
    let tasks: Vec<(f64, SweepMode)> = b0_values
        .iter()
        .flat_map(|b0| modes.iter().map(move |m| (*b0, *m)))
        .collect();
    let rows: Vec<Result<ProfileRow, MasdnpError>> = tasks
        .par_iter()
        .map(|(b0, mode)| {
            let d = drive_for_mode(drive, *mode, *b0);
            let pumping = pumping_of(&d, relax);
            let point = run_point(template, relax, &d, pumping.as_ref(), options)?;
            Ok(ProfileRow {
                b0: *b0,
                mode: *mode,
                epsilon_b: point.epsilon_b,
                converged: point.converged,
                point,
            })
        })
        .collect();
    rows.into_iter().collect()
}

/// One row of a hyperpolarization sweep.
#[derive(Debug, Clone)]
pub struct HpSweepRow {
    pub p_target: f64,
    pub with_uw: bool,
    pub epsilon_b: f64,
    pub converged: bool,
    pub point: PointResult,
}

/// Gain as a function of the pumped electron-a polarization, with or
/// without microwaves.
pub fn hyperpolarization_sweep(
    template: &BoxTemplate,
    relax: &RelaxationSet,
    drive: &DriveConfig,
    p_targets: &[f64],
    with_uw: bool,
    options: &SimOptions,
) -> Result<Vec<HpSweepRow>, MasdnpError> {
    if p_targets.is_empty() {
        return Err(MasdnpError::InvalidArgument("target list is empty".into()));
    }
    if let Some(bad) = p_targets.iter().find(|t| t.abs() > 1.0) {
        return Err(MasdnpError::InvalidArgument(format!(
            "pumped polarization {bad} outside [-1, 1]"
        )));
    }
    let rows: Vec<Result<HpSweepRow, MasdnpError>> = p_targets
        .par_iter()
        .map(|target| {
            let mut d = drive.clone();
            d.optical_target = Some(*target);
            if !with_uw {
                d.uw_nutation = 0.0;
            }
            let pumping = PumpingReduction { l_tz0: *target, t1_eff: relax.t1e_a_eff };
            let point = run_point(template, relax, &d, Some(&pumping), options)?;
            Ok(HpSweepRow {
                p_target: *target,
                with_uw,
                epsilon_b: point.epsilon_b,
                converged: point.converged,
                point,
            })
        })
        .collect();
    rows.into_iter().collect()
}
