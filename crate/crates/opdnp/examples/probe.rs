//! Scratch probe of the box-model engine at desk scale.

use opdnp::masdnp::{
    field_profile, hyperpolarization_sweep, run_point, BoxTemplate, DriveConfig, RelaxationSet,
    SimOptions, SpinSystemSpec, SweepMode,
};
use opdnp::rqm::PumpingReduction;

fn main() {
    let spec = SpinSystemSpec::trityl_tempo();
    let relax = RelaxationSet::trityl_tempo();
    let drive = DriveConfig::high_field_reference();
    let template = BoxTemplate::new(spec.clone(), 8, 4, 1234);
    let options = SimOptions::default();

    let t0 = std::time::Instant::now();
    // 1. thermal, no uw, no pumping
    let mut d = drive.clone();
    d.uw_nutation = 0.0;
    let point = run_point(&template, &relax, &d, None, &options).unwrap();
    println!(
        "thermal trityl-tempo: eps_B = {:.4}, conv={}, periods={} ({:?})",
        point.epsilon_b,
        point.converged,
        point.periods,
        t0.elapsed()
    );

    // 2. optical only, P -> -0.75
    let t0 = std::time::Instant::now();
    let pump = PumpingReduction { l_tz0: -0.75, t1_eff: relax.t1e_a_eff };
    let point = run_point(&template, &relax, &d, Some(&pump), &options).unwrap();
    println!(
        "optical-only -0.75:  eps_B = {:.1}, P_n = {:.4}, P_a = {:.3}, P_b = {:.3}, conv={}, periods={} ({:?})",
        point.epsilon_b,
        point.p_n_mean,
        point.p_e_a_mean,
        point.p_e_b_mean,
        point.converged,
        point.periods,
        t0.elapsed()
    );

    // 3. AMUPol at 14.1 T: thermal depolarization, then pumped
    let t0 = std::time::Instant::now();
    let spec_amu = SpinSystemSpec::amupol();
    let relax_amu = RelaxationSet::amupol();
    let mut d_amu = DriveConfig::high_field_reference();
    d_amu.b0 = 14.1;
    d_amu.uw_frequency = 395.2e9;
    d_amu.uw_nutation = 0.0;
    let template_amu = BoxTemplate::new(spec_amu, 8, 4, 77);
    let point = run_point(&template_amu, &relax_amu, &d_amu, None, &options).unwrap();
    println!(
        "amupol thermal:      eps_B = {:.4}, conv={}, periods={} ({:?})",
        point.epsilon_b,
        point.converged,
        point.periods,
        t0.elapsed()
    );
    let pump_amu = PumpingReduction { l_tz0: -0.75, t1_eff: relax_amu.t1e_a_eff };
    let point = run_point(&template_amu, &relax_amu, &d_amu, Some(&pump_amu), &options).unwrap();
    println!("amupol pumped -0.75: eps_B = {:.1}, conv={}", point.epsilon_b, point.converged);

    // 4. small field profile around the resonances
    let t0 = std::time::Instant::now();
    let mut d = drive.clone();
    d.optical_target = Some(-0.75);
    let fields: Vec<f64> = (0..=16).map(|i| 18.58 + i as f64 * 0.02).collect();
    let rows =
        field_profile(&template, &relax, &d, &fields, &SweepMode::ALL.as_slice(), &options)
            .unwrap();
    println!("field profile ({:?}):", t0.elapsed());
    for mode in SweepMode::ALL {
        let series: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.mode == mode)
            .map(|r| (r.b0, r.epsilon_b))
            .collect();
        let max = series.iter().map(|(_, e)| e.abs()).fold(0.0, f64::max);
        print!("  {:12} max|eps|={max:8.1}  ", mode.label());
        for (b, e) in &series {
            print!("{b:.2}:{e:.0} ");
        }
        println!();
    }

    // 5. hyperpolarization sweep at the trityl-resonant field
    let t0 = std::time::Instant::now();
    let mut d_hp = drive.clone();
    d_hp.b0 = 18.795;
    let targets = [-0.75, -0.6, -0.45, -0.3, -0.15, 0.0, 0.12, 0.2, 0.3, 0.45];
    for with_uw in [false, true] {
        let rows =
            hyperpolarization_sweep(&template, &relax, &d_hp, &targets, with_uw, &options)
                .unwrap();
        print!("hp sweep uw={with_uw}: ");
        for r in &rows {
            print!("{:.2}:{:.0} ", r.p_target, r.epsilon_b);
        }
        println!();
    }
    println!("hp sweeps took {:?}", t0.elapsed());
}
