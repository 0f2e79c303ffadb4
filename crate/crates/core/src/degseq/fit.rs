//! Fitting the decay exponent of a degree sequence by RANSAC in log-log space.

use rand::Rng;
use serde::Serialize;

use super::DegreeSequence;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Ranks sampled at geometric spacing between 1 and n.
    pub sample_count: usize,
    pub ransac_iters: usize,
    /// Largest residual in natural-log degree units still counted as an inlier.
    pub inlier_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            sample_count: 500,
            ransac_iters: 1000,
            inlier_tol: 0.1,
        }
    }
}

/// `ln d(k) ≈ log_d - p ln k` on the inliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub p: f64,
    pub log_d: f64,
    pub inlier_fraction: f64,
    pub samples_used: usize,
}

/// Fits a degree sequence; see [`fit_power_law`].
pub fn fit_rank_skew<R: Rng + ?Sized>(
    s: &DegreeSequence,
    config: &FitConfig,
    rng: &mut R,
) -> Result<FitResult> {
    let values: Vec<f64> = s.degrees().iter().map(|&d| d as f64).collect();
    fit_power_law(&values, config, rng)
}

/// Fits `values[k-1] ≈ D k^-p` for a nonincreasing positive sequence.
///
/// Ranks are sampled geometrically (collisions dropped), mapped to
/// `(ln k, ln value)`, and a line is chosen by RANSAC over two-point
/// hypotheses. The winning inlier set is refit by least squares.
pub fn fit_power_law<R: Rng + ?Sized>(
    values: &[f64],
    config: &FitConfig,
    rng: &mut R,
) -> Result<FitResult> {
    let n = values.len();
    if n < 2 {
        return Err(invalid("need at least two values to fit"));
    }
    if config.sample_count < 2 || config.ransac_iters == 0 || !(config.inlier_tol > 0.0) {
        return Err(invalid("fit needs sample_count >= 2, ransac_iters >= 1, inlier_tol > 0"));
    }
    if values.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(invalid("values must be positive and finite"));
    }
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return Err(Error::DegenerateFit);
    }

    let points: Vec<(f64, f64)> = geometric_ranks(n, config.sample_count)
        .into_iter()
        .map(|k| ((k as f64).ln(), values[k - 1].ln()))
        .collect();
    let m = points.len();
    if points.iter().all(|p| p.1 == points[0].1) {
        return Err(Error::DegenerateFit);
    }

    let mut best: Option<(usize, f64, f64, f64)> = None; // (inliers, residual sum, slope, intercept)
    for _ in 0..config.ransac_iters {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let ((x1, y1), (x2, y2)) = (points[i], points[j]);
        let slope = (y2 - y1) / (x2 - x1);
        let intercept = y1 - slope * x1;
        let (count, resid) = points.iter().fold((0usize, 0.0f64), |(c, r), &(x, y)| {
            let e = (y - (intercept + slope * x)).abs();
            if e < config.inlier_tol {
                (c + 1, r + e)
            } else {
                (c, r)
            }
        });
        let better = match best {
            None => true,
            Some((bc, br, _, _)) => count > bc || (count == bc && resid < br),
        };
        if better {
            best = Some((count, resid, slope, intercept));
        }
    }
    let (_, _, slope, intercept) = best.expect("at least one iteration");

    let inliers: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| (y - (intercept + slope * x)).abs() < config.inlier_tol)
        .collect();
    let (slope, intercept) = least_squares(&inliers).unwrap_or((slope, intercept));
    if !(slope < 0.0) {
        return Err(Error::InvalidSequence(format!(
            "fitted slope {slope} is not negative"
        )));
    }
    Ok(FitResult {
        p: -slope,
        log_d: intercept,
        inlier_fraction: inliers.len() as f64 / m as f64,
        samples_used: m,
    })
}

/// Ranks `round(n^(i/(count-1)))` for `i = 0..count`, deduplicated.
fn geometric_ranks(n: usize, count: usize) -> Vec<usize> {
    let ln_n = (n as f64).ln();
    let mut ranks: Vec<usize> = (0..count)
        .map(|i| {
            let k = (ln_n * i as f64 / (count - 1) as f64).exp().round() as usize;
            k.clamp(1, n)
        })
        .collect();
    ranks.dedup();
    ranks
}

fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let m = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}
