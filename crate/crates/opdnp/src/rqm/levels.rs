//! Quartet-doublet level scheme of the exchange-coupled excited pair.
//!
//! With the exchange Hamiltonian -2J(S_C·S_R) on a triplet-doublet pair and
//! a common Zeeman term, the eigenlevels are
//!
//!   E(Q, m) = -J + m·E_B,     E(D1, n) = 2J + n·E_B,
//!
//! so the quartet sits 3|J| above the doublet for J < 0 and the transition
//! gaps are ΔE(Q^m → D1^n) = -3J + (m - n)·E_B. The gap of the
//! (Q-3/2, D1+1/2) pair closes at |J| = 2·E_B/3.

use crate::consts::hz_to_cm1;

use super::params::{DLevel, QLevel, RQM_TRANSITIONS};

/// Level energies and transition gaps, all in cm⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct DqLevelScheme {
    /// Electron Zeeman term E_B (cm⁻¹).
    pub e_b_cm: f64,
    /// Exchange coupling used to build the scheme (cm⁻¹).
    pub j_cr_cm: f64,
    /// Quartet sublevel energies, indexed like [`QLevel::ALL`].
    pub q_energies_cm: [f64; 4],
    /// Doublet sublevel energies, indexed like [`DLevel::ALL`].
    pub d1_energies_cm: [f64; 2],
}

impl DqLevelScheme {
    pub fn q_energy(&self, q: QLevel) -> f64 {
        self.q_energies_cm[QLevel::ALL.iter().position(|x| *x == q).unwrap()]
    }

    pub fn d1_energy(&self, d: DLevel) -> f64 {
        self.d1_energies_cm[DLevel::ALL.iter().position(|x| *x == d).unwrap()]
    }

    /// Gap E(Q^m) - E(D1^n) for any sublevel pair (cm⁻¹).
    pub fn delta_e(&self, q: QLevel, d: DLevel) -> f64 {
        self.q_energy(q) - self.d1_energy(d)
    }

    /// Gaps of the six transitions in the kinetic scheme.
    pub fn rqm_gaps(&self) -> [((QLevel, DLevel), f64); 6] {
        RQM_TRANSITIONS.map(|(q, d)| ((q, d), self.delta_e(q, d)))
    }
}

/// Build the level scheme for exchange coupling `j_cr_cm` (cm⁻¹) at EPR
/// frequency `field_frequency` (Hz).
pub fn level_scheme(j_cr_cm: f64, field_frequency: f64) -> DqLevelScheme {
    let e_b_cm = hz_to_cm1(field_frequency);
    let q_energies_cm =
        QLevel::ALL.map(|q| -j_cr_cm + 0.5 * q.two_m() as f64 * e_b_cm);
    let d1_energies_cm =
        DLevel::ALL.map(|d| 2.0 * j_cr_cm + 0.5 * d.two_m() as f64 * e_b_cm);
    DqLevelScheme { e_b_cm, j_cr_cm, q_energies_cm, d1_energies_cm }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_closes_at_two_thirds_zeeman() {
        // at 527 GHz, E_B = 17.58 cm^-1 and the (Q-3/2, D1+1/2) gap closes
        // at J = -11.72 cm^-1
        let s = level_scheme(-11.72, 527.0e9);
        assert!((s.e_b_cm - 17.58).abs() < 0.01);
        assert!(s.delta_e(QLevel::M3h, DLevel::P1h).abs() < 0.02);

        let j_res = -2.0 / 3.0 * s.e_b_cm;
        assert!((j_res - (-11.72)).abs() < 0.02);
    }

    #[test]
    fn zero_exchange_leaves_pure_zeeman_gaps() {
        let s = level_scheme(0.0, 100.0e9);
        let eb = s.e_b_cm;
        for ((q, d), gap) in s.rqm_gaps() {
            let expect = 0.5 * (q.two_m() - d.two_m()) as f64 * eb;
            assert!((gap - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_gap_pair() {
        // (Q-1/2 -> D1+1/2) and (Q-3/2 -> D1-1/2) share the same gap for
        // any J and field
        for j in [-0.3, -5.0, -11.0, -20.0] {
            for nu in [9.5e9, 140.0e9, 527.0e9] {
                let s = level_scheme(j, nu);
                let a = s.delta_e(QLevel::M1h, DLevel::P1h);
                let b = s.delta_e(QLevel::M3h, DLevel::M1h);
                assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
                // equals splitting - E_B with splitting = -3J
                assert!((a - (-3.0 * j - s.e_b_cm)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn six_gaps_follow_closed_forms() {
        let s = level_scheme(-5.0, 527.0e9);
        let split = -3.0 * s.j_cr_cm;
        let expect = [
            split - 2.0 * s.e_b_cm, // Q-3/2 -> D1+1/2
            split - s.e_b_cm,       // Q-1/2 -> D1+1/2
            split + s.e_b_cm,       // Q+3/2 -> D1+1/2
            split - s.e_b_cm,       // Q-3/2 -> D1-1/2
            split + s.e_b_cm,       // Q+1/2 -> D1-1/2
            split + 2.0 * s.e_b_cm, // Q+3/2 -> D1-1/2
        ];
        for (((_, _), gap), want) in s.rqm_gaps().iter().zip(expect.iter()) {
            assert!((gap - want).abs() < 1e-9 * want.abs().max(1.0));
        }
    }
}
