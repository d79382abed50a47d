//! Frame rotations. All Euler angles follow the active ZYZ convention
//! R(α,β,γ) = Rz(α)·Ry(β)·Rz(γ), the usual magnetic-resonance choice.

use serde::{Deserialize, Serialize};

/// ZYZ Euler angles (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn from_degrees(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self {
            alpha: alpha.to_radians(),
            beta: beta.to_radians(),
            gamma: gamma.to_radians(),
        }
    }

    /// Rotation matrix for the active ZYZ convention.
    pub fn rotation_matrix(&self) -> Mat3 {
        let rz1 = Mat3::rot_z(self.alpha);
        let ry = Mat3::rot_y(self.beta);
        let rz2 = Mat3::rot_z(self.gamma);
        rz1.mul(&ry).mul(&rz2)
    }
}

/// Plain 3×3 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Self {
        Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn rot_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn rot_y(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Mat3([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| self.0[i][k] * other.0[k][j]).sum();
            }
        }
        Mat3(out)
    }

    pub fn transpose(&self) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.0[j][i];
            }
        }
        Mat3(out)
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }
}

/// Unit vector with polar angle `theta` from z and azimuth `phi`.
pub fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zyz_identity() {
        let r = EulerAngles::new(0.0, 0.0, 0.0).rotation_matrix();
        assert_eq!(r, Mat3::identity());
    }

    #[test]
    fn zyz_beta_rotates_z_to_x() {
        let r = EulerAngles::new(0.0, std::f64::consts::FRAC_PI_2, 0.0).rotation_matrix();
        let v = r.apply([0.0, 0.0, 1.0]);
        assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12 && v[2].abs() < 1e-12);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = EulerAngles::from_degrees(58.0, 57.0, 126.0).rotation_matrix();
        let rt = r.transpose();
        let prod = r.mul(&rt);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod.0[i][j] - expect).abs() < 1e-12);
            }
        }
    }
}
