//! Powder orientation grids for spherical averaging.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SpinError;

/// One powder orientation: field direction (θ, φ) in the tensor frame
/// with its quadrature weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orientation {
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

/// Grid generation scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowderScheme {
    /// Deterministic low-discrepancy spiral (golden-angle azimuths).
    GoldenSpiral,
    /// Orientations read from a text file with `theta phi [weight]` rows
    /// (radians); weights are renormalized to sum to 1.
    RepulsionFile(std::path::PathBuf),
    /// Uniform random directions from a seeded generator.
    UniformRandom,
}

/// Build a normalized powder grid. Deterministic for fixed (scheme, n, seed);
/// `n` is ignored by the file-based scheme.
pub fn powder_grid(scheme: &PowderScheme, n: usize, seed: u64) -> Result<Vec<Orientation>, SpinError> {
    match scheme {
        PowderScheme::GoldenSpiral => {
            if n == 0 {
                return Err(SpinError::EmptyGrid);
            }
            let golden_angle = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            let grid = (0..n)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                    Orientation {
                        theta: z.clamp(-1.0, 1.0).acos(),
                        phi: (i as f64 * golden_angle).rem_euclid(2.0 * std::f64::consts::PI),
                        weight: 1.0 / n as f64,
                    }
                })
                .collect();
            Ok(grid)
        }
        PowderScheme::UniformRandom => {
            if n == 0 {
                return Err(SpinError::EmptyGrid);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let grid = (0..n)
                .map(|_| {
                    let z: f64 = rng.gen_range(-1.0..1.0);
                    let phi: f64 = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                    Orientation { theta: z.acos(), phi, weight: 1.0 / n as f64 }
                })
                .collect();
            Ok(grid)
        }
        PowderScheme::RepulsionFile(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| SpinError::GridFile(format!("{}: {e}", path.display())))?;
            let mut grid = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let cols: Vec<f64> = line
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| {
                        SpinError::GridFile(format!("{} line {}: {e}", path.display(), lineno + 1))
                    })?;
                match cols.len() {
                    2 => grid.push(Orientation { theta: cols[0], phi: cols[1], weight: 1.0 }),
                    3 => grid.push(Orientation { theta: cols[0], phi: cols[1], weight: cols[2] }),
                    _ => {
                        return Err(SpinError::GridFile(format!(
                            "{} line {}: expected 2 or 3 columns",
                            path.display(),
                            lineno + 1
                        )))
                    }
                }
            }
            if grid.is_empty() {
                return Err(SpinError::EmptyGrid);
            }
            let total: f64 = grid.iter().map(|o| o.weight).sum();
            if total <= 0.0 {
                return Err(SpinError::GridFile(format!("{}: weights sum to 0", path.display())));
            }
            for o in grid.iter_mut() {
                o.weight /= total;
            }
            Ok(grid)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_grid() {
        let g = powder_grid(&PowderScheme::GoldenSpiral, 1, 0).unwrap();
        assert_eq!(g.len(), 1);
        assert!((g[0].weight - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weights_normalized() {
        for scheme in [PowderScheme::GoldenSpiral, PowderScheme::UniformRandom] {
            let g = powder_grid(&scheme, 777, 3).unwrap();
            let total: f64 = g.iter().map(|o| o.weight).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn second_legendre_averages_out() {
        let g = powder_grid(&PowderScheme::GoldenSpiral, 1000, 0).unwrap();
        let mean: f64 = g
            .iter()
            .map(|o| o.weight * (3.0 * o.theta.cos().powi(2) - 1.0) / 2.0)
            .sum();
        assert!(mean.abs() < 1e-2);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = powder_grid(&PowderScheme::UniformRandom, 64, 9).unwrap();
        let b = powder_grid(&PowderScheme::UniformRandom, 64, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_points_rejected() {
        assert!(powder_grid(&PowderScheme::GoldenSpiral, 0, 0).is_err());
    }
}
