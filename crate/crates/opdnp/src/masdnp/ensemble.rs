//! Finite-concentration boxes of three-spin units.
//!
//! A box packs `n_units` copies of a unit into the cube matching the target
//! concentration, each with its own random crystallite orientation, and
//! wires up the point-dipole couplings between electrons of different
//! units. Everything is drawn from one seeded generator, so a box is a pure
//! function of (spec, counts, seed).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::consts::{AVOGADRO, DIPOLAR_HZ_NM3};
use crate::spincore::EulerAngles;

use super::geometry::UnitFrames;
use super::system::SpinSystemSpec;
use super::MasdnpError;

/// Couplings below this are dropped from the event list (Hz).
pub const INTER_COUPLING_FLOOR_HZ: f64 = 1.0e3;

const PLACEMENT_ATTEMPTS: usize = 20_000;

/// One unit instance inside a box.
#[derive(Debug, Clone)]
pub struct BoxUnit {
    pub spec: SpinSystemSpec,
    pub crystallite: EulerAngles,
    /// Unit center in the box (nm), box-body coordinates.
    pub position_nm: [f64; 3],
    /// Positions of electrons a and b (nm).
    pub electron_positions_nm: [[f64; 3]; 2],
}

/// Point-dipole coupling between electrons of different units.
#[derive(Debug, Clone, Copy)]
pub struct InterCoupling {
    /// Global electron indices (2u for a, 2u+1 for b).
    pub e1: usize,
    pub e2: usize,
    /// Dipolar constant d = C/r³ (Hz); the secular part is d·(3cos²Θ-1)/2.
    pub d_hz: f64,
    /// Inter-electron unit vector in box-body coordinates.
    pub direction: [f64; 3],
}

#[derive(Debug, Clone)]
pub struct BoxEnsemble {
    pub units: Vec<BoxUnit>,
    pub inter_couplings: Vec<InterCoupling>,
    pub side_nm: f64,
    pub seed: u64,
}

impl BoxEnsemble {
    pub fn n_electrons(&self) -> usize {
        2 * self.units.len()
    }

    pub fn n_nuclei(&self) -> usize {
        self.units.len()
    }
}

fn distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Pack a box at the given concentration (mM) with a minimum distance
/// between radicals of different units (nm). Deterministic per seed.
pub fn build_box(
    spec: &SpinSystemSpec,
    n_units: usize,
    concentration_mm: f64,
    min_distance_nm: f64,
    seed: u64,
) -> Result<BoxEnsemble, MasdnpError> {
    spec.validate()?;
    if n_units == 0 {
        return Err(MasdnpError::InvalidArgument("a box needs at least one unit".into()));
    }
    if !(concentration_mm > 0.0) {
        return Err(MasdnpError::InvalidArgument("concentration must be positive".into()));
    }

    // units per nm³ at c mM: c·1e-3 mol/L · N_A / 1e24 nm³/L
    let density = concentration_mm * 1.0e-3 * AVOGADRO / 1.0e24;
    let side = (n_units as f64 / density).cbrt();

    // electrons sit at ±r/2 along the rotated dipolar axis
    let r_intra = if spec.d_ab_hz.abs() > 0.0 {
        (DIPOLAR_HZ_NM3 / spec.d_ab_hz.abs()).cbrt()
    } else {
        0.0
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut units: Vec<BoxUnit> = Vec::with_capacity(n_units);
    for _ in 0..n_units {
        let mut placed = false;
        for _attempt in 0..PLACEMENT_ATTEMPTS {
            let crystallite = EulerAngles::new(
                rng.gen_range(0.0..std::f64::consts::TAU),
                (1.0 - 2.0 * rng.gen::<f64>()).acos(),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let position = [
                rng.gen_range(0.0..side),
                rng.gen_range(0.0..side),
                rng.gen_range(0.0..side),
            ];
            let frames = UnitFrames::new(spec, &crystallite);
            let axis = frames.mol_to_body.apply(frames.n_dip_mol);
            let half = r_intra / 2.0;
            let electrons = [
                [
                    position[0] + half * axis[0],
                    position[1] + half * axis[1],
                    position[2] + half * axis[2],
                ],
                [
                    position[0] - half * axis[0],
                    position[1] - half * axis[1],
                    position[2] - half * axis[2],
                ],
            ];
            let clash = units.iter().any(|u| {
                u.electron_positions_nm.iter().any(|p| {
                    electrons.iter().any(|q| distance(*p, *q) < min_distance_nm)
                })
            });
            if !clash {
                units.push(BoxUnit {
                    spec: spec.clone(),
                    crystallite,
                    position_nm: position,
                    electron_positions_nm: electrons,
                });
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(MasdnpError::PackingInfeasible {
                n_units,
                concentration_mm,
                min_distance_nm,
            });
        }
    }

    let mut inter = Vec::new();
    for u in 0..n_units {
        for v in (u + 1)..n_units {
            for (su, pu) in units[u].electron_positions_nm.iter().enumerate() {
                for (sv, pv) in units[v].electron_positions_nm.iter().enumerate() {
                    let r = distance(*pu, *pv);
                    let d_hz = DIPOLAR_HZ_NM3 / r.powi(3);
                    if d_hz < INTER_COUPLING_FLOOR_HZ {
                        continue;
                    }
                    let direction = [
                        (pv[0] - pu[0]) / r,
                        (pv[1] - pu[1]) / r,
                        (pv[2] - pu[2]) / r,
                    ];
                    inter.push(InterCoupling {
                        e1: 2 * u + su,
                        e2: 2 * v + sv,
                        d_hz,
                        direction,
                    });
                }
            }
        }
    }

    Ok(BoxEnsemble { units, inter_couplings: inter, side_nm: side, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_unit_has_no_inter_couplings() {
        let b = build_box(&SpinSystemSpec::trityl_tempo(), 1, 10.0, 4.2, 7).unwrap();
        assert!(b.inter_couplings.is_empty());
        assert_eq!(b.n_electrons(), 2);
    }

    #[test]
    fn box_side_matches_number_density() {
        // 10 mM, 40 units: side ≈ 18.8 nm
        let b = build_box(&SpinSystemSpec::trityl_tempo(), 40, 10.0, 4.2, 7).unwrap();
        assert!((b.side_nm - 18.8).abs() < 0.1, "side {}", b.side_nm);
    }

    #[test]
    fn min_distance_respected() {
        let b = build_box(&SpinSystemSpec::trityl_tempo(), 12, 10.0, 4.2, 3).unwrap();
        for u in 0..b.units.len() {
            for v in (u + 1)..b.units.len() {
                for p in &b.units[u].electron_positions_nm {
                    for q in &b.units[v].electron_positions_nm {
                        assert!(distance(*p, *q) >= 4.2 - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn intra_unit_electron_spacing_matches_coupling() {
        let spec = SpinSystemSpec::trityl_tempo();
        let b = build_box(&spec, 4, 10.0, 4.2, 11).unwrap();
        let want = (DIPOLAR_HZ_NM3 / spec.d_ab_hz).cbrt();
        for u in &b.units {
            let d = distance(u.electron_positions_nm[0], u.electron_positions_nm[1]);
            assert!((d - want).abs() < 1e-9, "spacing {d} vs {want}");
        }
        // 30 MHz puts the electrons about 1.2 nm apart
        assert!((want - 1.2).abs() < 0.01);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = build_box(&SpinSystemSpec::amupol(), 8, 10.0, 4.2, 99).unwrap();
        let b = build_box(&SpinSystemSpec::amupol(), 8, 10.0, 4.2, 99).unwrap();
        for (x, y) in a.units.iter().zip(b.units.iter()) {
            assert_eq!(x.position_nm, y.position_nm);
            assert_eq!(x.crystallite, y.crystallite);
        }
        assert_eq!(a.inter_couplings.len(), b.inter_couplings.len());
    }

    #[test]
    fn doubling_concentration_strengthens_couplings() {
        let spec = SpinSystemSpec::trityl_tempo();
        let median = |conc: f64| -> f64 {
            let mut all: Vec<f64> = Vec::new();
            for seed in 0..40 {
                let b = build_box(&spec, 8, conc, 4.2, seed).unwrap();
                let mut nearest = vec![0.0f64; b.n_electrons()];
                for c in &b.inter_couplings {
                    nearest[c.e1] = nearest[c.e1].max(c.d_hz);
                    nearest[c.e2] = nearest[c.e2].max(c.d_hz);
                }
                all.extend(nearest);
            }
            all.sort_by(|a, b| a.partial_cmp(b).unwrap());
            all[all.len() / 2]
        };
        let m10 = median(10.0);
        let m20 = median(20.0);
        assert!(m20 > m10, "median coupling {m20} at 20 mM vs {m10} at 10 mM");
    }

    #[test]
    fn infeasible_packing_reports() {
        // 4.2 nm exclusion at a density that cannot host it
        let err = build_box(&SpinSystemSpec::trityl_tempo(), 64, 4000.0, 4.2, 1).unwrap_err();
        assert!(matches!(err, MasdnpError::PackingInfeasible { .. }));
    }
}
