//! Least-squares fits of sweep outputs.

use super::MasdnpError;

/// Fit the single-parameter effective-field law |ε_B| = |B_eff - B0| / B0
/// to (B0, ε_B) points. Returns (B_eff in T, RMS relative residual).
///
/// The sum of squares is piecewise quadratic in B_eff with breakpoints at
/// the sample fields, so each segment has a closed-form minimizer; the
/// global optimum is the best of the clamped segment minimizers.
pub fn fit_effective_field(points: &[(f64, f64)]) -> Result<(f64, f64), MasdnpError> {
    if points.len() < 3 {
        return Err(MasdnpError::InvalidArgument(
            "effective-field fit needs at least 3 points".into(),
        ));
    }
    if points.iter().any(|(b, _)| *b <= 0.0) {
        return Err(MasdnpError::InvalidArgument("fields must be positive".into()));
    }
    let ys: Vec<f64> = points.iter().map(|(_, e)| e.abs()).collect();
    let spread = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(1e-300);
    if spread <= 1e-12 * scale {
        return Err(MasdnpError::FitDegenerate);
    }

    let mut breakpoints: Vec<f64> = points.iter().map(|(b, _)| *b).collect();
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();

    let sse = |b_eff: f64| -> f64 {
        points
            .iter()
            .zip(ys.iter())
            .map(|((b0, _), y)| {
                let m = (b_eff - b0).abs() / b0;
                (m - y) * (m - y)
            })
            .sum()
    };

    // segment [lo, hi] has fixed signs s_i = sign(B_eff - B_i); the model is
    // linear there and the minimizer closed-form
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |candidate: f64| {
        if !candidate.is_finite() || candidate < 0.0 {
            return;
        }
        let value = sse(candidate);
        if best.map_or(true, |(_, v)| value < v) {
            best = Some((candidate, value));
        }
    };
    let mut edges = vec![0.0];
    edges.extend(breakpoints.iter().cloned());
    edges.push(f64::INFINITY);
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let mut num = 0.0;
        let mut den = 0.0;
        for ((b0, _), y) in points.iter().zip(ys.iter()) {
            let s = if mid >= *b0 { 1.0 } else { -1.0 };
            num += (s * y + 1.0) / b0;
            den += 1.0 / (b0 * b0);
        }
        consider((num / den).clamp(lo, hi));
        consider(lo);
        consider(hi);
    }

    let (b_eff, _) = best.expect("candidate set is nonempty");
    let rms = (points
        .iter()
        .zip(ys.iter())
        .map(|((b0, _), y)| {
            let m = (b_eff - b0).abs() / b0;
            let r = (m - y) / y.abs().max(1e-12);
            r * r
        })
        .sum::<f64>()
        / points.len() as f64)
        .sqrt();
    Ok((b_eff, rms))
}

/// Ordinary least squares line fit; returns (slope, intercept, R²).
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64), MasdnpError> {
    if points.len() < 2 {
        return Err(MasdnpError::InvalidArgument("line fit needs at least 2 points".into()));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|(x, _)| x).sum();
    let sy: f64 = points.iter().map(|(_, y)| y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return Err(MasdnpError::FitDegenerate);
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = points.iter().map(|(_, y)| (y - mean_y) * (y - mean_y)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok((slope, intercept, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_effective_field() {
        let b_eff = 100.0f64;
        let points: Vec<(f64, f64)> = [5.0, 7.5, 10.0, 14.1, 18.8, 23.5]
            .iter()
            .map(|b| (*b, (b_eff - b).abs() / b))
            .collect();
        let (fit, rms) = fit_effective_field(&points).unwrap();
        assert!((fit - b_eff).abs() < 1e-6, "fit {fit}");
        assert!(rms < 1e-12);
    }

    #[test]
    fn recovers_field_below_data() {
        let b_eff = 2.0f64;
        let points: Vec<(f64, f64)> =
            [5.0, 10.0, 15.0, 20.0].iter().map(|b| (*b, (b_eff - b).abs() / b)).collect();
        let (fit, rms) = fit_effective_field(&points).unwrap();
        assert!((fit - b_eff).abs() < 1e-9, "fit {fit}");
        assert!(rms < 1e-12);
    }

    #[test]
    fn signed_inputs_use_magnitude() {
        let b_eff = 300.0f64;
        let points: Vec<(f64, f64)> =
            [5.0, 10.0, 20.0].iter().map(|b| (*b, -((b_eff - b).abs() / b))).collect();
        let (fit, _) = fit_effective_field(&points).unwrap();
        assert!((fit - b_eff).abs() < 1e-6);
    }

    #[test]
    fn degenerate_data_rejected() {
        let points = [(5.0, 3.0), (10.0, 3.0), (20.0, 3.0)];
        assert!(matches!(fit_effective_field(&points), Err(MasdnpError::FitDegenerate)));
        assert!(fit_effective_field(&points[..2]).is_err());
    }

    #[test]
    fn line_fit_exact() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 3.0 * i as f64 - 2.0)).collect();
        let (m, b, r2) = linear_fit(&pts).unwrap();
        assert!((m - 3.0).abs() < 1e-12 && (b + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }
}
