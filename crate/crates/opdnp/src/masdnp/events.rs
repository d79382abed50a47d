//! Rotor-event detection and Landau-Zener passage probabilities.
//!
//! Over one rotor period the electron offsets sweep through level
//! anti-crossings of three families: microwave resonances (offset = 0),
//! electron-electron crossings (offset difference = 0, dipolar/exchange
//! coupled), and cross-effect crossings (offset difference = ±nuclear
//! Larmor). Crossing times come from sign changes of the sampled condition
//! with linear interpolation; sweep rates from the bracketing samples. Each
//! crossing is handed to the propagator as a partial population exchange
//! with the Landau-Zener probability of its effective coupling.

use crate::spincore::EulerAngles;

use super::ensemble::BoxEnsemble;
use super::geometry::{field_in_body, UnitFrames};
use super::system::{DriveConfig, SpinSystemSpec};
use super::MasdnpError;

/// Minimum trajectory sampling per rotor period.
pub const MIN_SAMPLES_PER_PERIOD: usize = 512;

/// What crosses at the event. Electron indices are global (2u for electron a
/// of unit u, 2u+1 for electron b); nuclei are indexed by unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Electron crosses the microwave frequency; saturation exchange.
    Microwave { electron: usize },
    /// Two electron offsets cross; flip-flop exchange through the dipolar +
    /// exchange coupling.
    DipolarExchange { e1: usize, e2: usize },
    /// Electron pair crosses the ±nuclear-Larmor matching condition of the
    /// proton on `nucleus`; three-spin exchange. `branch` is the sign s in
    /// offset(e_a) - offset(e_b) = s·ν_n.
    CrossEffect { e_a: usize, e_b: usize, nucleus: usize, branch: i8 },
}

/// One level anti-crossing within a rotor period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorEvent {
    /// Crossing time within the period (s).
    pub time: f64,
    pub kind: EventKind,
    /// Effective coupling at the crossing (Hz).
    pub coupling: f64,
    /// Sweep rate of the crossing condition (Hz/s).
    pub sweep_rate: f64,
    /// Landau-Zener passage probability.
    pub probability: f64,
}

/// p = 1 - exp(-2π c² / |dΔ/dt|), the fast-passage exchange probability for
/// coupling `c` (Hz) and condition sweep rate (Hz/s). A vanishing sweep rate
/// is the adiabatic limit, p = 1.
pub fn landau_zener_probability(coupling: f64, sweep_rate: f64) -> f64 {
    if sweep_rate == 0.0 {
        return 1.0;
    }
    -(-2.0 * std::f64::consts::PI * coupling * coupling / sweep_rate.abs()).exp_m1()
}

/// Sign-change crossings of a sampled periodic condition. Returns
/// (sample index, interpolated fraction within the step).
fn crossings(values: &[f64]) -> Vec<(usize, f64)> {
    let n = values.len();
    let mut out = Vec::new();
    for k in 0..n {
        let a = values[k];
        let b = values[(k + 1) % n];
        if a * b < 0.0 {
            out.push((k, a / (a - b)));
        }
    }
    out
}

struct UnitTrajectory {
    frames: UnitFrames,
    /// per-sample electron offsets (Hz)
    offset_a: Vec<f64>,
    offset_b: Vec<f64>,
}

fn sample_unit(
    spec: &SpinSystemSpec,
    crystallite: &EulerAngles,
    drive: &DriveConfig,
    b_body: &[[f64; 3]],
) -> UnitTrajectory {
    let frames = UnitFrames::new(spec, crystallite);
    let mut offset_a = Vec::with_capacity(b_body.len());
    let mut offset_b = Vec::with_capacity(b_body.len());
    for b in b_body {
        let b_mol = frames.field_in_mol(*b);
        let (nu_a, nu_b) = frames.electron_frequencies(spec, b_mol, drive.b0);
        offset_a.push(nu_a - drive.uw_frequency);
        offset_b.push(nu_b - drive.uw_frequency);
    }
    UnitTrajectory { frames, offset_a, offset_b }
}

fn body_field_samples(samples: usize) -> Vec<[f64; 3]> {
    (0..samples)
        .map(|k| field_in_body(k as f64 / samples as f64 * std::f64::consts::TAU))
        .collect()
}

/// Events of a single isolated unit over one rotor period, sorted by time.
pub fn detect_rotor_events(
    spec: &SpinSystemSpec,
    crystallite: &EulerAngles,
    drive: &DriveConfig,
    samples_per_period: usize,
) -> Result<Vec<RotorEvent>, MasdnpError> {
    if samples_per_period < MIN_SAMPLES_PER_PERIOD {
        return Err(MasdnpError::InvalidArgument(format!(
            "samples_per_period must be >= {MIN_SAMPLES_PER_PERIOD}"
        )));
    }
    spec.validate()?;
    drive.validate()?;

    let b_body = body_field_samples(samples_per_period);
    let traj = sample_unit(spec, crystallite, drive, &b_body);
    let period = 1.0 / drive.mas_rate;
    let dt = period / samples_per_period as f64;

    let mut events = Vec::new();
    collect_unit_events(spec, drive, &traj, 0, 0, dt, period, &mut events);
    sort_events(&mut events);
    Ok(events)
}

/// Events of every unit in a box, including the electron-electron crossings
/// between units, over one rotor period.
pub fn detect_box_events(
    ensemble: &BoxEnsemble,
    drive: &DriveConfig,
    samples_per_period: usize,
) -> Result<Vec<RotorEvent>, MasdnpError> {
    if samples_per_period < MIN_SAMPLES_PER_PERIOD {
        return Err(MasdnpError::InvalidArgument(format!(
            "samples_per_period must be >= {MIN_SAMPLES_PER_PERIOD}"
        )));
    }
    drive.validate()?;

    let b_body = body_field_samples(samples_per_period);
    let period = 1.0 / drive.mas_rate;
    let dt = period / samples_per_period as f64;

    let trajectories: Vec<UnitTrajectory> = ensemble
        .units
        .iter()
        .map(|u| sample_unit(&u.spec, &u.crystallite, drive, &b_body))
        .collect();

    let mut events = Vec::new();
    for (u, unit) in ensemble.units.iter().enumerate() {
        collect_unit_events(&unit.spec, drive, &trajectories[u], 2 * u, u, dt, period, &mut events);
    }

    // inter-unit electron-electron crossings through the point-dipole coupling
    let offset_of = |e: usize, k: usize| -> f64 {
        let t = &trajectories[e / 2];
        if e % 2 == 0 {
            t.offset_a[k]
        } else {
            t.offset_b[k]
        }
    };
    let n = samples_per_period;
    let mut diff = vec![0.0; n];
    for c in &ensemble.inter_couplings {
        for k in 0..n {
            diff[k] = offset_of(c.e1, k) - offset_of(c.e2, k);
        }
        for (k, frac) in crossings(&diff) {
            let time = (k as f64 + frac) * dt;
            let phase = time / period * std::f64::consts::TAU;
            let b = field_in_body(phase);
            let cos = crate::spincore::dot(c.direction, b);
            let coupling = (c.d_hz * 0.5 * (3.0 * cos * cos - 1.0)).abs();
            let sweep_rate = (diff[(k + 1) % n] - diff[k]) / dt;
            events.push(RotorEvent {
                time,
                kind: EventKind::DipolarExchange { e1: c.e1, e2: c.e2 },
                coupling,
                sweep_rate,
                probability: landau_zener_probability(coupling, sweep_rate),
            });
        }
    }

    sort_events(&mut events);
    Ok(events)
}

#[allow(clippy::too_many_arguments)]
fn collect_unit_events(
    spec: &SpinSystemSpec,
    drive: &DriveConfig,
    traj: &UnitTrajectory,
    electron_base: usize,
    nucleus: usize,
    dt: f64,
    period: f64,
    events: &mut Vec<RotorEvent>,
) {
    let n = traj.offset_a.len();
    let nu_n = drive.nuclear_larmor();

    let coupling_at = |time: f64, what: Coupling| -> f64 {
        let phase = time / period * std::f64::consts::TAU;
        let b_mol = traj.frames.field_in_mol(field_in_body(phase));
        match what {
            Coupling::ElectronPair => {
                (traj.frames.dipolar_secular(spec, b_mol) + 2.0 * spec.j_ab_hz).abs()
            }
            Coupling::CrossEffect => {
                let a_pm = traj.frames.hyperfine_pseudosecular(spec, b_mol);
                let d = (traj.frames.dipolar_secular(spec, b_mol) + 2.0 * spec.j_ab_hz).abs();
                a_pm * d / nu_n
            }
        }
    };

    // microwave events, both electrons
    if drive.uw_nutation > 0.0 {
        for (slot, offsets) in [(0usize, &traj.offset_a), (1usize, &traj.offset_b)] {
            for (k, frac) in crossings(offsets) {
                let time = (k as f64 + frac) * dt;
                let sweep_rate = (offsets[(k + 1) % n] - offsets[k]) / dt;
                events.push(RotorEvent {
                    time,
                    kind: EventKind::Microwave { electron: electron_base + slot },
                    coupling: drive.uw_nutation,
                    sweep_rate,
                    probability: landau_zener_probability(drive.uw_nutation, sweep_rate),
                });
            }
        }
    }

    // intra-unit electron-electron and cross-effect events
    let mut diff = vec![0.0; n];
    for k in 0..n {
        diff[k] = traj.offset_a[k] - traj.offset_b[k];
    }
    for (k, frac) in crossings(&diff) {
        let time = (k as f64 + frac) * dt;
        let coupling = coupling_at(time, Coupling::ElectronPair);
        let sweep_rate = (diff[(k + 1) % n] - diff[k]) / dt;
        events.push(RotorEvent {
            time,
            kind: EventKind::DipolarExchange { e1: electron_base, e2: electron_base + 1 },
            coupling,
            sweep_rate,
            probability: landau_zener_probability(coupling, sweep_rate),
        });
    }
    for branch in [1i8, -1i8] {
        let shifted: Vec<f64> =
            diff.iter().map(|d| d - branch as f64 * nu_n).collect();
        for (k, frac) in crossings(&shifted) {
            let time = (k as f64 + frac) * dt;
            let coupling = coupling_at(time, Coupling::CrossEffect);
            let sweep_rate = (shifted[(k + 1) % n] - shifted[k]) / dt;
            events.push(RotorEvent {
                time,
                kind: EventKind::CrossEffect {
                    e_a: electron_base,
                    e_b: electron_base + 1,
                    nucleus,
                    branch,
                },
                coupling,
                sweep_rate,
                probability: landau_zener_probability(coupling, sweep_rate),
            });
        }
    }
}

enum Coupling {
    ElectronPair,
    CrossEffect,
}

fn sort_events(events: &mut [RotorEvent]) {
    events.sort_by(|a, b| {
        a.time
            .partial_cmp(&b.time)
            .unwrap()
            .then_with(|| kind_order(&a.kind).cmp(&kind_order(&b.kind)))
    });
}

fn kind_order(kind: &EventKind) -> (u8, usize, usize) {
    match kind {
        EventKind::Microwave { electron } => (0, *electron, 0),
        EventKind::DipolarExchange { e1, e2 } => (1, *e1, *e2),
        EventKind::CrossEffect { e_a, e_b, branch, .. } => (2, *e_a, (*e_b as i64 + *branch as i64) as usize),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn lz_probability_limits() {
        assert_eq!(landau_zener_probability(0.0, 1e12), 0.0);
        assert_eq!(landau_zener_probability(1e6, 0.0), 1.0);
        // 2π c²/|rate| = ln 2 gives p = 1/2
        let c = 1.0e5;
        let rate = 2.0 * std::f64::consts::PI * c * c / std::f64::consts::LN_2;
        assert!((landau_zener_probability(c, rate) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lz_monotone_in_coupling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let rate = 10f64.powf(rng.gen_range(10.0..15.0));
            let c1 = 10f64.powf(rng.gen_range(3.0..7.0));
            let c2 = c1 * rng.gen_range(1.001..10.0);
            let p1 = landau_zener_probability(c1, rate);
            let p2 = landau_zener_probability(c2, rate);
            assert!((0.0..=1.0).contains(&p1) && (0.0..=1.0).contains(&p2));
            assert!(p2 >= p1);
        }
    }

    #[test]
    fn isotropic_system_has_no_events() {
        let mut spec = SpinSystemSpec::trityl_tempo();
        spec.g_a = [2.0059; 3];
        spec.g_b = [2.0030; 3];
        let mut drive = DriveConfig::high_field_reference();
        drive.uw_frequency = 5.0e11; // far off resonance
        let cr = EulerAngles::from_degrees(30.0, 60.0, 90.0);
        let ev = detect_rotor_events(&spec, &cr, &drive, 512).unwrap();
        assert!(ev.is_empty(), "{ev:?}");
    }

    #[test]
    fn refinement_keeps_event_times() {
        let spec = SpinSystemSpec::trityl_tempo();
        let drive = DriveConfig::high_field_reference();
        let cr = EulerAngles::from_degrees(77.0, 41.0, 13.0);
        let coarse = detect_rotor_events(&spec, &cr, &drive, 1024).unwrap();
        let fine = detect_rotor_events(&spec, &cr, &drive, 2048).unwrap();
        assert_eq!(coarse.len(), fine.len());
        let dt = 1.0 / drive.mas_rate / 1024.0;
        for (a, b) in coarse.iter().zip(fine.iter()) {
            assert!((a.time - b.time).abs() <= dt);
        }
    }

    #[test]
    fn cross_effect_events_exist_on_a_powder() {
        // some crystallites must cross the ±ν_n matching condition
        let spec = SpinSystemSpec::trityl_tempo();
        let drive = DriveConfig::high_field_reference();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut ce_active = 0;
        let total = 48;
        for _ in 0..total {
            let cr = EulerAngles::new(
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen::<f64>().mul_add(-2.0, 1.0).acos(),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let ev = detect_rotor_events(&spec, &cr, &drive, 512).unwrap();
            if ev.iter().any(|e| matches!(e.kind, EventKind::CrossEffect { .. })) {
                ce_active += 1;
            }
        }
        assert!(ce_active > total / 4, "only {ce_active}/{total} crystallites CE-active");
    }

    #[test]
    fn events_sorted_and_positive_probability() {
        let spec = SpinSystemSpec::amupol();
        let mut drive = DriveConfig::high_field_reference();
        drive.b0 = 14.1;
        drive.uw_frequency = 395.0e9;
        let cr = EulerAngles::from_degrees(24.0, 58.0, 101.0);
        let ev = detect_rotor_events(&spec, &cr, &drive, 2048).unwrap();
        assert!(!ev.is_empty());
        for w in ev.windows(2) {
            assert!(w[0].time <= w[1].time);
        }
        for e in &ev {
            assert!((0.0..=1.0).contains(&e.probability));
            assert!(e.time >= 0.0 && e.time < 1.0 / drive.mas_rate);
        }
    }
}
