//! The 8-level kinetic system: quartet and excited-doublet sublevels coupled
//! by the mixing rates, spin-lattice relaxation inside each manifold,
//! spin-conserving quenching into the ground doublet, and unselective
//! quartet decay. Populations evolve as dp/dt = M p with column sums of M
//! identically zero.

use crate::consts::{BOLTZMANN, PLANCK};

use super::params::{KineticState, QLevel, RqmParams, N_LEVELS, RQM_TRANSITIONS};
use super::rates::RateTable;
use super::RqmError;

const Q_IDX: [usize; 4] = [0, 1, 2, 3];
const D1P: usize = 4;
const D1M: usize = 5;
const D0P: usize = 6;
const D0M: usize = 7;

/// Fixed-step factor for the explicit integrator: h = factor / max|M_ii|.
/// 0.02 keeps the trajectory within 1e-6 of the exact propagator over the
/// parameter ranges exercised here.
pub const RK4_STEP_FACTOR: f64 = 0.02;

/// Population-rate generator, dp/dt = M p.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticGenerator(pub [[f64; N_LEVELS]; N_LEVELS]);

impl KineticGenerator {
    pub fn max_abs_diagonal(&self) -> f64 {
        (0..N_LEVELS).map(|i| self.0[i][i].abs()).fold(0.0, f64::max)
    }

    pub fn apply(&self, p: &[f64; N_LEVELS]) -> [f64; N_LEVELS] {
        let mut out = [0.0; N_LEVELS];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(p.iter()).map(|(m, x)| m * x).sum();
        }
        out
    }
}

fn add_rate(m: &mut [[f64; N_LEVELS]; N_LEVELS], from: usize, to: usize, rate: f64) {
    m[to][from] += rate;
    m[from][from] -= rate;
}

/// Assemble the generator for the given parameters and mixing-rate table.
///
/// Connectivity: the six quartet-doublet transitions; quartet spin-lattice
/// relaxation between all sublevel pairs except the outermost (+3/2, -3/2)
/// pair; relaxation inside each doublet; spin-conserving quenching
/// D1^±1/2 → D0^±1/2; and quartet decay feeding both ground sublevels
/// equally. Uphill relaxation rates carry the Boltzmann factor of the level
/// splitting at the sample temperature, so every manifold relaxes to its
/// thermal population ratio.
pub fn build_kinetic_generator(params: &RqmParams, table: &RateTable) -> KineticGenerator {
    let mut m = [[0.0; N_LEVELS]; N_LEVELS];

    // Boltzmann factor for an uphill step of `two_dm`/2 Zeeman quanta
    let boltz = |two_dm: i32| -> f64 {
        (-(two_dm as f64 / 2.0) * PLANCK * params.field_frequency
            / (BOLTZMANN * params.temperature))
            .exp()
    };

    // quartet <-> doublet mixing
    for (q, d) in RQM_TRANSITIONS {
        let qi = q.kinetic_index();
        let di = d.kinetic_index();
        add_rate(&mut m, di, qi, table.k_dq(q, d));
        add_rate(&mut m, qi, di, table.k_qd(q, d));
    }

    // quartet spin-lattice relaxation: adjacent and next-adjacent pairs
    let q_pairs: [(QLevel, QLevel); 5] = [
        (QLevel::P3h, QLevel::P1h),
        (QLevel::P1h, QLevel::M1h),
        (QLevel::M1h, QLevel::M3h),
        (QLevel::P3h, QLevel::M1h),
        (QLevel::P1h, QLevel::M3h),
    ];
    for (hi, lo) in q_pairs {
        let two_dm = hi.two_m() - lo.two_m();
        add_rate(&mut m, hi.kinetic_index(), lo.kinetic_index(), params.w_q1);
        add_rate(&mut m, lo.kinetic_index(), hi.kinetic_index(), params.w_q1 * boltz(two_dm));
    }

    // relaxation inside each doublet (downhill +1/2 -> -1/2)
    add_rate(&mut m, D1P, D1M, params.w_d1);
    add_rate(&mut m, D1M, D1P, params.w_d1 * boltz(2));
    add_rate(&mut m, D0P, D0M, params.w_d0);
    add_rate(&mut m, D0M, D0P, params.w_d0 * boltz(2));

    // spin-conserving quench into the ground doublet
    add_rate(&mut m, D1P, D0P, params.k_qt);
    add_rate(&mut m, D1M, D0M, params.k_qt);

    // unselective quartet decay, split over both ground sublevels
    for qi in Q_IDX {
        add_rate(&mut m, qi, D0P, 0.5 * params.k_q0);
        add_rate(&mut m, qi, D0M, 0.5 * params.k_q0);
    }

    KineticGenerator(m)
}

/// Propagation method for the linear system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticMethod {
    /// Exact propagator by scaling-and-squaring matrix exponentials.
    MatrixExponential,
    /// Classical fourth-order Runge-Kutta with a fixed step tied to the
    /// stiffest diagonal rate.
    Rk4FixedStep,
}

/// Evolve the populations to each requested output time (ascending, starting
/// at or after `initial.t`).
pub fn evolve_kinetics(
    generator: &KineticGenerator,
    initial: &KineticState,
    times: &[f64],
    method: KineticMethod,
) -> Result<Vec<KineticState>, RqmError> {
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(RqmError::InvalidParams("output times must be ascending".into()));
    }
    if times.first().is_some_and(|t| *t < initial.t) {
        return Err(RqmError::InvalidParams("output times precede the initial state".into()));
    }
    let total = initial.total();
    let tol = 1e-9 * total.max(1.0);

    let mut out = Vec::with_capacity(times.len());
    let mut state = *initial;
    match method {
        KineticMethod::MatrixExponential => {
            for &t in times {
                let p = expm_apply(&generator.0, t - state.t, &state.populations);
                state = KineticState { t, populations: p };
                check_physical(&state, total, tol)?;
                out.push(state);
            }
        }
        KineticMethod::Rk4FixedStep => {
            let max_diag = generator.max_abs_diagonal();
            let h_base = if max_diag > 0.0 { RK4_STEP_FACTOR / max_diag } else { f64::INFINITY };
            for &t in times {
                let mut remaining = t - state.t;
                while remaining > 0.0 {
                    let h = remaining.min(h_base);
                    state.populations = rk4_step(generator, &state.populations, h);
                    remaining -= h;
                }
                state.t = t;
                check_physical(&state, total, tol)?;
                out.push(state);
            }
        }
    }
    Ok(out)
}

fn check_physical(state: &KineticState, total: f64, tol: f64) -> Result<(), RqmError> {
    let min = state.populations.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -tol {
        return Err(RqmError::SolverInstability { min_population: min });
    }
    let drift = (state.total() - total).abs();
    if drift > 1e-6 * total.max(1.0) {
        return Err(RqmError::SolverInstability { min_population: -drift });
    }
    Ok(())
}

fn rk4_step(
    generator: &KineticGenerator,
    p: &[f64; N_LEVELS],
    h: f64,
) -> [f64; N_LEVELS] {
    let k1 = generator.apply(p);
    let k2 = generator.apply(&combine(p, &k1, h / 2.0));
    let k3 = generator.apply(&combine(p, &k2, h / 2.0));
    let k4 = generator.apply(&combine(p, &k3, h));
    let mut out = *p;
    for i in 0..N_LEVELS {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn combine(p: &[f64; N_LEVELS], k: &[f64; N_LEVELS], h: f64) -> [f64; N_LEVELS] {
    let mut out = *p;
    for i in 0..N_LEVELS {
        out[i] += h * k[i];
    }
    out
}

type M8 = [[f64; N_LEVELS]; N_LEVELS];

fn mat_mul(a: &M8, b: &M8) -> M8 {
    let mut out = [[0.0; N_LEVELS]; N_LEVELS];
    for i in 0..N_LEVELS {
        for k in 0..N_LEVELS {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..N_LEVELS {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn mat_add(a: &M8, b: &M8) -> M8 {
    let mut out = *a;
    for i in 0..N_LEVELS {
        for j in 0..N_LEVELS {
            out[i][j] += b[i][j];
        }
    }
    out
}

fn mat_scale(a: &M8, c: f64) -> M8 {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= c;
        }
    }
    out
}

fn identity() -> M8 {
    let mut out = [[0.0; N_LEVELS]; N_LEVELS];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    out
}

fn one_norm(a: &M8) -> f64 {
    (0..N_LEVELS)
        .map(|j| (0..N_LEVELS).map(|i| a[i][j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
fn solve(a: &M8, b: &M8) -> M8 {
    let n = N_LEVELS;
    let mut a = *a;
    let mut x = *b;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        x.swap(col, piv);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            x[col][j] /= d;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a[i][col];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a[i][j] -= f * a[col][j];
                x[i][j] -= f * x[col][j];
            }
        }
    }
    x
}

/// exp(M t) p by degree-13 Padé approximation with scaling and squaring.
pub fn expm_apply(m: &M8, t: f64, p: &[f64; N_LEVELS]) -> [f64; N_LEVELS] {
    if t == 0.0 {
        return *p;
    }
    let a = mat_scale(m, t);
    let theta13 = 5.371_920_351_148_152;
    let norm = one_norm(&a);
    let s = if norm > theta13 { (norm / theta13).log2().ceil() as i32 } else { 0 };
    let a = mat_scale(&a, 0.5f64.powi(s));

    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let a2 = mat_mul(&a, &a);
    let a4 = mat_mul(&a2, &a2);
    let a6 = mat_mul(&a2, &a4);
    let id = identity();

    let u_inner = mat_add(
        &mat_add(&mat_scale(&a6, B[13]), &mat_scale(&a4, B[11])),
        &mat_scale(&a2, B[9]),
    );
    let u_poly = mat_add(
        &mat_mul(&a6, &u_inner),
        &mat_add(
            &mat_add(&mat_scale(&a6, B[7]), &mat_scale(&a4, B[5])),
            &mat_add(&mat_scale(&a2, B[3]), &mat_scale(&id, B[1])),
        ),
    );
    let u = mat_mul(&a, &u_poly);

    let v_inner = mat_add(
        &mat_add(&mat_scale(&a6, B[12]), &mat_scale(&a4, B[10])),
        &mat_scale(&a2, B[8]),
    );
    let v = mat_add(
        &mat_mul(&a6, &v_inner),
        &mat_add(
            &mat_add(&mat_scale(&a6, B[6]), &mat_scale(&a4, B[4])),
            &mat_add(&mat_scale(&a2, B[2]), &mat_scale(&id, B[0])),
        ),
    );

    let vmu = mat_add(&v, &mat_scale(&u, -1.0));
    let vpu = mat_add(&v, &u);
    let mut e = solve(&vmu, &vpu);
    for _ in 0..s {
        e = mat_mul(&e, &e);
    }

    let mut out = [0.0; N_LEVELS];
    for i in 0..N_LEVELS {
        out[i] = e[i].iter().zip(p.iter()).map(|(m, x)| m * x).sum();
    }
    out
}

/// Normalized ground-doublet polarization trace.
///
/// The population difference D0^{+1/2} - D0^{-1/2} is referenced to the
/// equilibrium difference the total population would show at polarization
/// `p_eq` (excess in the lower sublevel), passed through a causal
/// single-exponential response of time constant `irf_time`, and offset by -1
/// so a system resting at thermal equilibrium reads zero.
pub fn d0_polarization_trace(
    states: &[KineticState],
    irf_time: f64,
    p_eq: f64,
) -> Result<Vec<(f64, f64)>, RqmError> {
    if p_eq == 0.0 {
        return Err(RqmError::InvalidParams("reference polarization must be nonzero".into()));
    }
    if states.is_empty() {
        return Ok(Vec::new());
    }
    if states.windows(2).any(|w| w[1].t < w[0].t) {
        return Err(RqmError::InvalidParams("states must be time-ordered".into()));
    }
    let total = states[0].total();
    let reference = -p_eq * total;

    let raw: Vec<f64> = states
        .iter()
        .map(|s| (s.populations[D0P] - s.populations[D0M]) / reference)
        .collect();

    // exact first-order lag for piecewise-linear input
    let mut filtered = Vec::with_capacity(raw.len());
    let mut y = raw[0];
    filtered.push(y);
    for k in 1..raw.len() {
        let h = states[k].t - states[k - 1].t;
        if irf_time <= 0.0 || h == 0.0 {
            y = raw[k];
        } else {
            let decay = (-h / irf_time).exp();
            let slope = (raw[k] - raw[k - 1]) / h;
            y = y * decay
                + raw[k - 1] * (1.0 - decay)
                + slope * (h - irf_time * (1.0 - decay));
        }
        filtered.push(y);
    }

    Ok(states
        .iter()
        .zip(filtered.into_iter())
        .map(|(s, v)| (s.t, v - 1.0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rqm::rates::{dq_rate_constants, RateOptions};
    use crate::spincore::{powder_grid, thermal_polarization, PowderScheme};
    use rand::{Rng, SeedableRng};

    fn reference_table(params: &RqmParams) -> RateTable {
        let grid = powder_grid(&PowderScheme::GoldenSpiral, 200, 0).unwrap();
        dq_rate_constants(params, &grid, &RateOptions::default()).unwrap()
    }

    #[test]
    fn column_sums_vanish() {
        let p = RqmParams::high_field_reference(-9.0);
        let g = build_kinetic_generator(&p, &reference_table(&p));
        for j in 0..N_LEVELS {
            let col: f64 = (0..N_LEVELS).map(|i| g.0[i][j]).sum();
            assert!(col.abs() < 1e-9 * g.max_abs_diagonal().max(1.0), "column {j}: {col}");
        }
    }

    #[test]
    fn all_rates_zero_gives_zero_matrix() {
        let mut p = RqmParams::high_field_reference(-9.0);
        p.k0_dq = 0.0;
        p.k_qt = 0.0;
        p.k_q0 = 0.0;
        p.w_q1 = 0.0;
        p.w_d1 = 0.0;
        p.w_d0 = 0.0;
        let g = build_kinetic_generator(&p, &reference_table(&p));
        assert!(g.0.iter().flatten().all(|x| *x == 0.0));
        // and the state stays constant
        let init = KineticState { t: 0.0, populations: p.initial_populations };
        let states =
            evolve_kinetics(&g, &init, &[0.0, 1e-6, 1e-3], KineticMethod::MatrixExponential)
                .unwrap();
        for s in states {
            assert_eq!(s.populations, init.populations);
        }
    }

    #[test]
    fn pure_quench_closed_form() {
        let mut p = RqmParams::high_field_reference(-9.0);
        p.k0_dq = 0.0;
        p.k_q0 = 0.0;
        p.w_q1 = 0.0;
        p.w_d1 = 0.0;
        p.w_d0 = 0.0;
        p.initial_populations = [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let g = build_kinetic_generator(&p, &reference_table(&p));
        let init = KineticState { t: 0.0, populations: p.initial_populations };
        let times: Vec<f64> = (0..60).map(|i| i as f64 * 5e-9).collect();
        let states =
            evolve_kinetics(&g, &init, &times, KineticMethod::MatrixExponential).unwrap();
        for s in &states {
            let expect = 1.0 - (-p.k_qt * s.t).exp();
            assert!((s.populations[D0P] - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn rk4_matches_exact_propagator() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut p = RqmParams::high_field_reference(-rng.gen_range(3.0..14.0));
            p.k_qt = 10f64.powf(rng.gen_range(6.0..8.0));
            p.w_q1 = 10f64.powf(rng.gen_range(4.0..6.5));
            p.w_d1 = 10f64.powf(rng.gen_range(3.0..4.5));
            p.w_d0 = p.w_d1;
            let g = build_kinetic_generator(&p, &reference_table(&p));
            let init = KineticState { t: 0.0, populations: p.initial_populations };
            let t_slow = 3.0 / p.w_d0;
            let times: Vec<f64> = (1..=20).map(|i| i as f64 / 20.0 * t_slow).collect();
            let exact =
                evolve_kinetics(&g, &init, &times, KineticMethod::MatrixExponential).unwrap();
            let rk4 = evolve_kinetics(&g, &init, &times, KineticMethod::Rk4FixedStep).unwrap();
            let total = init.total();
            for (a, b) in exact.iter().zip(rk4.iter()) {
                assert!((a.total() - total).abs() < 1e-9 * total);
                for i in 0..N_LEVELS {
                    let scale = a.populations[i].abs().max(1e-9 * total);
                    assert!(
                        (a.populations[i] - b.populations[i]).abs() / scale < 1e-6,
                        "population {i} diverged"
                    );
                }
            }
        }
    }

    #[test]
    fn equilibrium_start_traces_zero() {
        let p = RqmParams::high_field_reference(-9.0);
        let p_eq = thermal_polarization(p.field_frequency, p.temperature).unwrap();
        // populate only D0 at its thermal ratio: p = (n+ - n-)/(n+ + n-) = -p_eq
        let np = 0.5 * (1.0 - p_eq);
        let nm = 0.5 * (1.0 + p_eq);
        let mut params = p.clone();
        params.initial_populations = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, np, nm];
        params.k0_dq = 0.0;
        let g = build_kinetic_generator(&params, &reference_table(&params));
        let init = KineticState { t: 0.0, populations: params.initial_populations };
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 1e-5).collect();
        let states =
            evolve_kinetics(&g, &init, &times, KineticMethod::MatrixExponential).unwrap();
        let trace = d0_polarization_trace(&states, 100e-9, p_eq).unwrap();
        for (_, v) in trace {
            assert!(v.abs() < 1e-6, "baseline deviates: {v}");
        }
    }

    #[test]
    fn zero_irf_is_identity() {
        let states = vec![
            KineticState { t: 0.0, populations: [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.6, 0.4] },
            KineticState { t: 1e-6, populations: [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.3, 0.7] },
        ];
        let p_eq = 0.01;
        let trace = d0_polarization_trace(&states, 0.0, p_eq).unwrap();
        let expect0 = (0.6 - 0.4) / (-p_eq) - 1.0;
        let expect1 = (0.3 - 0.7) / (-p_eq) - 1.0;
        assert!((trace[0].1 - expect0).abs() < 1e-12);
        assert!((trace[1].1 - expect1).abs() < 1e-12);
    }

    #[test]
    fn zero_reference_rejected() {
        let states = vec![KineticState { t: 0.0, populations: [0.0; 8] }];
        assert!(d0_polarization_trace(&states, 0.0, 0.0).is_err());
    }

    #[test]
    fn isc_only_trace_shape() {
        // with mixing off, the trace rises on the quench timescale and then
        // decays at the ground-doublet relaxation rate
        let params = RqmParams::trace_fit_isc_only();
        let table = reference_table(&params);
        let g = build_kinetic_generator(&params, &table);
        let init = KineticState { t: 0.0, populations: params.initial_populations };
        let times: Vec<f64> = (0..4000).map(|i| i as f64 * 2.5e-7).collect();
        let states =
            evolve_kinetics(&g, &init, &times, KineticMethod::MatrixExponential).unwrap();
        let p_eq = thermal_polarization(params.field_frequency, params.temperature).unwrap();
        let trace = d0_polarization_trace(&states, 100e-9, p_eq).unwrap();

        // emissive peak (negative) within a few quench times
        let (peak_idx, peak) = trace
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .map(|(i, v)| (i, v.1))
            .unwrap();
        assert!(peak < -10.0, "expected a strong emissive peak, got {peak}");
        assert!(trace[peak_idx].0 < 20.0 / params.k_qt * 10.0);

        // decay rate close to the D0 relaxation eigenvalue W(1 + boltz),
        // fitted where the polarized component still dominates the slow
        // quartet-drain background
        let (t0, v0) = trace[400]; // 0.1 ms
        let (t1, v1) = trace[1000]; // 0.25 ms
        let rate = ((v0 / v1).abs()).ln() / (t1 - t0);
        let w_pair = params.w_d0 * 2.0; // up + down at negligible Zeeman/kT
        assert!(
            rate > 0.5 * w_pair && rate < 1.6 * w_pair + params.k_q0,
            "decay rate {rate} vs relaxation {w_pair}"
        );
    }
}
