use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Vec3;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxCountFit {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    /// Least-squares slope of `ln N(ε)` against `ln(1/ε)`.
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// `2^-lo, ..., 2^-hi`.
pub fn dyadic_scales(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

/// Counts occupied cubes `floor(x / ε)` at each scale and fits the slope.
pub fn box_dimension(points: &[Vec3], scales: &[f64]) -> Result<BoxCountFit> {
    if scales.len() < 3 {
        return invalid("box counting needs at least 3 scales");
    }
    if scales.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return invalid("box sizes must be positive and finite");
    }
    if points.is_empty() {
        return invalid("box counting needs at least one point");
    }
    let counts: Vec<usize> = scales
        .par_iter()
        .map(|&eps| {
            let inv = 1.0 / eps;
            points
                .iter()
                .map(|x| {
                    (
                        (x[0] * inv).floor() as i64,
                        (x[1] * inv).floor() as i64,
                        (x[2] * inv).floor() as i64,
                    )
                })
                .collect::<HashSet<_>>()
                .len()
        })
        .collect();
    let xs: Vec<f64> = scales.iter().map(|s| (1.0 / s).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let (slope, intercept, r2) = least_squares(&xs, &ys);
    Ok(BoxCountFit {
        scales: scales.to_vec(),
        counts,
        slope,
        intercept,
        r2,
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    (slope, intercept, r2)
}

/// Near-uniform deterministic sphere lattice of `n` points.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_fit() {
        let (s, b, r2) = least_squares(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((s - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn great_circle_is_one_dimensional() {
        let pts: Vec<Vec3> = (0..200_000)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 200_000.0;
                [t.cos(), t.sin(), 0.0]
            })
            .collect();
        let fit = box_dimension(&pts, &dyadic_scales(3, 9)).unwrap();
        assert!((fit.slope - 1.0).abs() < 0.05, "{fit:?}");
        assert!(fit.counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sphere_is_two_dimensional() {
        let pts = fibonacci_sphere(4_000_000);
        let fit = box_dimension(&pts, &dyadic_scales(2, 7)).unwrap();
        assert!((fit.slope - 2.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn needs_three_scales() {
        assert!(box_dimension(&[[0.0; 3]], &[0.5, 0.25]).is_err());
    }
}
