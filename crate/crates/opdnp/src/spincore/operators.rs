//! Angular-momentum operator construction and multi-spin embedding.

use num_complex::Complex64;

use super::linalg::CMatrix;
use super::SpinError;

/// The standard operator set for one spin of given multiplicity 2S+1.
#[derive(Debug, Clone)]
pub struct SpinOperatorSet {
    pub multiplicity: usize,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
    pub splus: CMatrix,
    pub sminus: CMatrix,
}

/// Build Sx, Sy, Sz, S± for a spin with 2S+1 = `multiplicity` levels,
/// in the |S, m⟩ basis ordered m = S, S-1, …, -S.
pub fn spin_operators(multiplicity: usize) -> Result<SpinOperatorSet, SpinError> {
    if multiplicity < 2 {
        return Err(SpinError::InvalidMultiplicity(multiplicity));
    }
    let n = multiplicity;
    let s = (n as f64 - 1.0) / 2.0;

    let mut sz = CMatrix::zeros(n);
    let mut splus = CMatrix::zeros(n);
    for i in 0..n {
        let m = s - i as f64;
        sz[(i, i)] = Complex64::new(m, 0.0);
        if i > 0 {
            // S+ |S, m⟩ = sqrt(S(S+1) - m(m+1)) |S, m+1⟩
            let amp = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
            splus[(i - 1, i)] = Complex64::new(amp, 0.0);
        }
    }
    let sminus = splus.adjoint();
    // Sx = (S+ + S-)/2, Sy = (S+ - S-)/2i
    let sx = splus.add(&sminus).scale(Complex64::new(0.5, 0.0));
    let sy = splus.sub(&sminus).scale(Complex64::new(0.0, -0.5));

    Ok(SpinOperatorSet { multiplicity, sx, sy, sz, splus, sminus })
}

/// Embed a single-spin operator into slot `slot` of a product space with
/// per-spin dimensions `dims`: identity ⊗ … ⊗ op ⊗ … ⊗ identity.
pub fn embed(op: &CMatrix, slot: usize, dims: &[usize]) -> Result<CMatrix, SpinError> {
    if slot >= dims.len() {
        return Err(SpinError::SlotOutOfRange { slot, slots: dims.len() });
    }
    if op.dim != dims[slot] {
        return Err(SpinError::DimensionMismatch { expected: dims[slot], found: op.dim });
    }
    let mut out = CMatrix::identity(1);
    for (k, &d) in dims.iter().enumerate() {
        if k == slot {
            out = out.kron(op);
        } else {
            out = out.kron(&CMatrix::identity(d));
        }
    }
    Ok(out)
}
