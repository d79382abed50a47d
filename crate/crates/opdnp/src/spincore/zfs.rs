//! Zero-field splitting of a triplet, expressed in the lab frame.
//!
//! For ZFS parameters D, E and a tensor frame tilted by (θ, φ) against the
//! field, the interaction decomposes into five lab-frame components that
//! multiply 3Sz²-S(S+1), the rank-1 anticommutators {S±, Sz} and S∓²:
//!
//!   D0  = D/6 (3cos²θ - 1) + E/2 sin²θ cos2φ
//!   D±1 = 1/4 sin2θ (-D + E cos2φ) ± i E/2 sinθ sin2φ
//!   D±2 = 1/4 [D sin²θ + E cos2φ (1 + cos²θ)] ± i E/2 cosθ sin2φ
//!
//! All coefficients carry the unit of D and E (rad/s inside the engines).

use num_complex::Complex64;

use super::linalg::CMatrix;
use super::operators::SpinOperatorSet;
use super::SpinError;

/// Lab-frame ZFS coefficients (same unit as the D, E inputs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZfsLabCoefficients {
    pub d0: f64,
    pub dp1: Complex64,
    pub dm1: Complex64,
    pub dp2: Complex64,
    pub dm2: Complex64,
}

/// Lab-frame decomposition of the D/E tensor at orientation (θ, φ).
pub fn zfs_lab_coefficients(d: f64, e: f64, theta: f64, phi: f64) -> ZfsLabCoefficients {
    let (st, ct) = theta.sin_cos();
    let s2t = (2.0 * theta).sin();
    let c2p = (2.0 * phi).cos();
    let s2p = (2.0 * phi).sin();

    let d0 = d / 6.0 * (3.0 * ct * ct - 1.0) + e / 2.0 * st * st * c2p;
    let re1 = 0.25 * s2t * (-d + e * c2p);
    let im1 = e / 2.0 * st * s2p;
    let re2 = 0.25 * (d * st * st + e * c2p * (1.0 + ct * ct));
    let im2 = e / 2.0 * ct * s2p;

    ZfsLabCoefficients {
        d0,
        dp1: Complex64::new(re1, im1),
        dm1: Complex64::new(re1, -im1),
        dp2: Complex64::new(re2, im2),
        dm2: Complex64::new(re2, -im2),
    }
}

/// Assemble the triplet ZFS Hamiltonian
/// D0 [3Sz² - S(S+1)] + D+1 {S+,Sz} + D-1 {S-,Sz} + D+2 S-² + D-2 S+².
pub fn build_zfs_hamiltonian(
    coeffs: &ZfsLabCoefficients,
    ops: &SpinOperatorSet,
) -> Result<CMatrix, SpinError> {
    if ops.multiplicity != 3 {
        return Err(SpinError::InvalidMultiplicity(ops.multiplicity));
    }
    let s = 1.0;
    let ssp1 = s * (s + 1.0);

    let sz2 = ops.sz.mul(&ops.sz);
    let rank0 = sz2
        .scale(Complex64::new(3.0, 0.0))
        .sub(&CMatrix::identity(3).scale(Complex64::new(ssp1, 0.0)));

    let anti_p = ops.splus.mul(&ops.sz).add(&ops.sz.mul(&ops.splus));
    let anti_m = ops.sminus.mul(&ops.sz).add(&ops.sz.mul(&ops.sminus));
    let sm2 = ops.sminus.mul(&ops.sminus);
    let sp2 = ops.splus.mul(&ops.splus);

    let h = rank0
        .scale(Complex64::new(coeffs.d0, 0.0))
        .add(&anti_p.scale(coeffs.dp1))
        .add(&anti_m.scale(coeffs.dm1))
        .add(&sm2.scale(coeffs.dp2))
        .add(&sp2.scale(coeffs.dm2));
    Ok(h)
}
