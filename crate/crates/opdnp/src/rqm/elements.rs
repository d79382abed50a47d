//! ZFS matrix elements between the quartet and doublet eigenstates of the
//! coupled chromophore-radical pair.
//!
//! The static part (common Zeeman term plus isotropic exchange) is
//! diagonalized in the 6-dimensional triplet ⊗ doublet product space; the
//! eigenstates are labeled quartet/doublet through ⟨S²⟩ and by projection
//! through ⟨Sz⟩. The triplet ZFS at a given orientation then connects those
//! eigenstates, and its squared matrix elements feed the mixing rates.
//! The ¹⁴N hyperfine term is far below every other energy and is omitted.

use num_complex::Complex64;

use crate::consts::{cm1_to_rad_s, hz_to_rad_s, rad_s_to_cm1};
use crate::spincore::{
    build_zfs_hamiltonian, eigh_real, embed, spin_operators, zfs_lab_coefficients,
    Orientation,
};

use super::params::{DLevel, QLevel};
use super::RqmError;

/// Eigenstate label in the coupled basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairLevel {
    Quartet(QLevel),
    Doublet(DLevel),
}

/// Squared ZFS matrix elements at one orientation.
#[derive(Debug, Clone)]
pub struct ZfsElements {
    /// |⟨Q^m|H_zfs|D1^n⟩|² in cm⁻², indexed [quartet][doublet] in the order
    /// of [`QLevel::ALL`] and [`DLevel::ALL`]. All 8 pairs are reported,
    /// including the two same-projection pairs outside the kinetic scheme.
    pub q_d_sq_cm2: [[f64; 2]; 4],
    /// Complex elements ⟨Q^m|H_zfs|D1^n⟩ in cm⁻¹ (eigenvector gauge fixed by
    /// the largest real component), for averaging-convention comparisons.
    pub q_d_cm: [[Complex64; 2]; 4],
    /// Squared elements over all 36 eigenstate pairs (cm⁻²).
    pub all_sq_cm2: [[f64; 6]; 6],
    /// Eigenstate labels for the rows/columns of `all_sq_cm2`.
    pub labels: [PairLevel; 6],
    /// Set when the static Hamiltonian had degenerate eigenvalues and the
    /// quartet/doublet labels had to be resolved through ⟨S²⟩ inside the
    /// degenerate blocks.
    pub degenerate: bool,
}

/// Static-Hamiltonian eigenbasis, reusable across orientations.
pub struct PairBasis {
    /// Eigenvectors (real), one per row.
    vecs: [[f64; 6]; 6],
    labels: [PairLevel; 6],
    degenerate: bool,
}

/// Diagonalize the Zeeman + exchange Hamiltonian of the pair and label its
/// eigenstates. `j_cr_cm` in cm⁻¹, `field_frequency` in Hz.
pub fn pair_basis(j_cr_cm: f64, field_frequency: f64) -> Result<PairBasis, RqmError> {
    let triplet = spin_operators(3)?;
    let doublet = spin_operators(2)?;
    let dims = [3usize, 2usize];

    let sz_c = embed(&triplet.sz, 0, &dims)?;
    let sp_c = embed(&triplet.splus, 0, &dims)?;
    let sm_c = embed(&triplet.sminus, 0, &dims)?;
    let sx_c = embed(&triplet.sx, 0, &dims)?;
    let sy_c = embed(&triplet.sy, 0, &dims)?;
    let sz_r = embed(&doublet.sz, 1, &dims)?;
    let sp_r = embed(&doublet.splus, 1, &dims)?;
    let sm_r = embed(&doublet.sminus, 1, &dims)?;
    let sx_r = embed(&doublet.sx, 1, &dims)?;
    let sy_r = embed(&doublet.sy, 1, &dims)?;

    let nu = hz_to_rad_s(field_frequency);
    let j = cm1_to_rad_s(j_cr_cm);

    // H = ν (Sz_C + Sz_R) - 2J [Sz_C Sz_R + (S+_C S-_R + S-_C S+_R)/2]
    let zeeman = sz_c.add(&sz_r).scale(Complex64::new(nu, 0.0));
    let flip_flop = sp_c.mul(&sm_r).add(&sm_c.mul(&sp_r)).scale(Complex64::new(0.5, 0.0));
    let exchange = sz_c.mul(&sz_r).add(&flip_flop).scale(Complex64::new(-2.0 * j, 0.0));
    let h0 = zeeman.add(&exchange);

    let scale = nu.abs().max(j.abs()).max(1.0);
    if h0.max_abs_imag() > 1e-9 * scale {
        return Err(RqmError::InvalidParams("static pair Hamiltonian is not real".into()));
    }
    let h0_re = h0.real_part();

    // total S² for quartet/doublet identification
    let sx = sx_c.add(&sx_r);
    let sy = sy_c.add(&sy_r);
    let sz = sz_c.add(&sz_r);
    let s2 = sx.mul(&sx).add(&sy.mul(&sy)).add(&sz.mul(&sz));
    let s2_re = s2.real_part();
    let sz_re = sz.real_part();

    let (vals, mut vecs) = eigh_real(&h0_re);

    // rotate degenerate blocks so that S² is diagonal inside them
    let mut degenerate = false;
    let tol = 1e-9 * scale;
    let mut i = 0;
    while i < 6 {
        let mut j_end = i + 1;
        while j_end < 6 && (vals[j_end] - vals[i]).abs() <= tol {
            j_end += 1;
        }
        if j_end - i > 1 {
            degenerate = true;
            let block: Vec<Vec<f64>> = (i..j_end)
                .map(|a| {
                    (i..j_end)
                        .map(|b| quadratic_form(&s2_re, &vecs[a], &vecs[b]))
                        .collect()
                })
                .collect();
            let (_, rot) = eigh_real(&block);
            let old: Vec<Vec<f64>> = vecs[i..j_end].to_vec();
            for (a, r) in rot.iter().enumerate() {
                let mut new_vec = vec![0.0; 6];
                for (b, w) in r.iter().enumerate() {
                    for (nv, ov) in new_vec.iter_mut().zip(old[b].iter()) {
                        *nv += w * ov;
                    }
                }
                vecs[i + a] = new_vec;
            }
        }
        i = j_end;
    }

    // fix gauge: largest-magnitude component positive
    for v in vecs.iter_mut() {
        let k = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(k, _)| k)
            .unwrap();
        if v[k] < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }

    let mut out_vecs = [[0.0; 6]; 6];
    let mut labels = [PairLevel::Doublet(DLevel::P1h); 6];
    let mut seen = [false; 6];
    for (k, v) in vecs.iter().enumerate() {
        out_vecs[k].copy_from_slice(v);
        let s2_exp = quadratic_form(&s2_re, v, v);
        let sz_exp = quadratic_form(&sz_re, v, v);
        let two_m = (2.0 * sz_exp).round() as i32;
        let label = if (s2_exp - 3.75).abs() < (s2_exp - 0.75).abs() {
            let q = QLevel::ALL
                .into_iter()
                .find(|q| q.two_m() == two_m)
                .ok_or_else(|| RqmError::InvalidParams("quartet projection label failed".into()))?;
            PairLevel::Quartet(q)
        } else {
            let d = DLevel::ALL
                .into_iter()
                .find(|d| d.two_m() == two_m)
                .ok_or_else(|| RqmError::InvalidParams("doublet projection label failed".into()))?;
            PairLevel::Doublet(d)
        };
        let slot = match label {
            PairLevel::Quartet(q) => QLevel::ALL.iter().position(|x| *x == q).unwrap(),
            PairLevel::Doublet(d) => 4 + DLevel::ALL.iter().position(|x| *x == d).unwrap(),
        };
        if seen[slot] {
            return Err(RqmError::InvalidParams("duplicate eigenstate label".into()));
        }
        seen[slot] = true;
        labels[k] = label;
    }

    Ok(PairBasis { vecs: out_vecs, labels, degenerate })
}

fn quadratic_form(m: &[Vec<f64>], bra: &[f64], ket: &[f64]) -> f64 {
    let n = bra.len();
    let mut acc = 0.0;
    for i in 0..n {
        if bra[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            acc += bra[i] * m[i][j] * ket[j];
        }
    }
    acc
}

/// ZFS matrix elements between all pair eigenstates at one orientation.
/// `d_zfs_cm`/`e_zfs_cm` in cm⁻¹; the orientation gives the field direction
/// in the ZFS frame.
pub fn zfs_matrix_elements(
    d_zfs_cm: f64,
    e_zfs_cm: f64,
    j_cr_cm: f64,
    field_frequency: f64,
    orientation: &Orientation,
) -> Result<ZfsElements, RqmError> {
    let basis = pair_basis(j_cr_cm, field_frequency)?;
    zfs_matrix_elements_in_basis(d_zfs_cm, e_zfs_cm, orientation, &basis)
}

/// Same as [`zfs_matrix_elements`] with a precomputed eigenbasis, for powder
/// loops where the static Hamiltonian does not change.
pub fn zfs_matrix_elements_in_basis(
    d_zfs_cm: f64,
    e_zfs_cm: f64,
    orientation: &Orientation,
    basis: &PairBasis,
) -> Result<ZfsElements, RqmError> {
    let triplet = spin_operators(3)?;
    let coeffs = zfs_lab_coefficients(
        cm1_to_rad_s(d_zfs_cm),
        cm1_to_rad_s(e_zfs_cm),
        orientation.theta,
        orientation.phi,
    );
    let h_trip = build_zfs_hamiltonian(&coeffs, &triplet)?;
    let h6 = embed(&h_trip, 0, &[3, 2])?;

    let to_cm = rad_s_to_cm1(1.0);
    let mut all_sq = [[0.0; 6]; 6];
    let mut q_d_sq = [[0.0; 2]; 4];
    let mut q_d = [[Complex64::new(0.0, 0.0); 2]; 4];
    let mut elem6 = [[Complex64::new(0.0, 0.0); 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            let e = h6.sandwich_real(&basis.vecs[a], &basis.vecs[b]) * to_cm;
            elem6[a][b] = e;
            all_sq[a][b] = e.norm_sqr();
        }
    }
    for (a, la) in basis.labels.iter().enumerate() {
        if let PairLevel::Quartet(q) = la {
            for (b, lb) in basis.labels.iter().enumerate() {
                if let PairLevel::Doublet(d) = lb {
                    let qi = QLevel::ALL.iter().position(|x| x == q).unwrap();
                    let di = DLevel::ALL.iter().position(|x| x == d).unwrap();
                    q_d_sq[qi][di] = all_sq[a][b];
                    q_d[qi][di] = elem6[a][b];
                }
            }
        }
    }

    Ok(ZfsElements {
        q_d_sq_cm2: q_d_sq,
        q_d_cm: q_d,
        all_sq_cm2: all_sq,
        labels: basis.labels,
        degenerate: basis.degenerate,
    })
}
