//! Empirical tail statistics of replicated regrets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One point of an exceedance curve x ↦ P̂(R > x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExceedancePoint {
    pub x: f64,
    pub count: u64,
    pub probability: f64,
    /// Wilson 95% interval.
    pub lower: f64,
    pub upper: f64,
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    let lower = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let upper = if successes >= n { 1.0 } else { (centre + half).min(1.0) };
    (lower.min(p), upper.max(p))
}

/// P̂(R > x) for each x in `x_grid`, with Wilson 95% intervals.
pub fn tail_exceedance(regrets: &[f64], x_grid: &[f64]) -> Result<Vec<ExceedancePoint>> {
    if regrets.is_empty() {
        return Err(Error::Config("tail exceedance needs a non-empty sample".into()));
    }
    let mut sorted = regrets.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as u64;
    Ok(x_grid
        .iter()
        .map(|&x| {
            let at_most = sorted.partition_point(|&r| r <= x) as u64;
            let count = n - at_most;
            let (lower, upper) = wilson_interval(count, n, 1.959_963_984_540_054);
            ExceedancePoint {
                x,
                count,
                probability: count as f64 / n as f64,
                lower,
                upper,
            }
        })
        .collect())
}

/// Equally spaced grid 0, step, 2·step, … up to and including `max`.
pub fn x_grid(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step).ceil().max(0.0) as usize;
    (0..=n).map(|j| j as f64 * step).collect()
}

/// Fixed-width histogram starting at `start = width·⌊min/width⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub start: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Left edge of bin `j`.
    pub fn edge(&self, j: usize) -> f64 {
        self.start + j as f64 * self.bin_width
    }
}

pub fn histogram(sample: &[f64], bin_width: f64) -> Result<Histogram> {
    if bin_width.is_nan() || bin_width <= 0.0 {
        return Err(Error::Config(format!("bin width must be positive, got {bin_width}")));
    }
    if sample.is_empty() {
        return Ok(Histogram {
            start: 0.0,
            bin_width,
            counts: Vec::new(),
        });
    }
    let min = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let start = (min / bin_width).floor() * bin_width;
    let mut counts: Vec<u64> = Vec::new();
    for &x in sample {
        let j = ((x - start) / bin_width).floor() as usize;
        if j >= counts.len() {
            counts.resize(j + 1, 0);
        }
        counts[j] += 1;
    }
    Ok(Histogram {
        start,
        bin_width,
        counts,
    })
}

/// Empirical q-quantile, the smallest x with F̂(x) ≥ q.
pub fn quantile(sample: &[f64], q: f64) -> Result<f64> {
    if sample.is_empty() || !(0.0..=1.0).contains(&q) {
        return Err(Error::Config(format!(
            "quantile needs a non-empty sample and q in [0, 1], got q = {q}"
        )));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q * sorted.len() as f64).ceil() as usize).max(1);
    Ok(sorted[rank - 1])
}

/// Fraction of the sample at or above `threshold`.
pub fn frequency_at_least(sample: &[f64], threshold: f64) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    sample.iter().filter(|&&x| x >= threshold).count() as f64 / sample.len() as f64
}

/// Least-squares fit of ln(−ln P̂(R > x)) = ζ ln x − ln Λ₂ over the grid
/// points with 0 < P̂ < 1 and x > 0. Descriptive only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub zeta: f64,
    pub lambda2: f64,
    pub points: usize,
}

pub fn fit_tail_exponent(curve: &[ExceedancePoint]) -> Option<TailFit> {
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|p| p.x > 0.0 && p.probability > 0.0 && p.probability < 1.0)
        .map(|p| (p.x.ln(), (-p.probability.ln()).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    Some(TailFit {
        zeta: slope,
        lambda2: (-intercept).exp(),
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceedance_examples() {
        let c = tail_exceedance(&[1.0, 2.0, 3.0], &[2.0]).unwrap();
        assert_eq!(c[0].count, 1);
        assert!((c[0].probability - 1.0 / 3.0).abs() < 1e-15);
        let c = tail_exceedance(&[5.0; 4], &[4.9, 5.0]).unwrap();
        assert_eq!(c[0].probability, 1.0);
        assert_eq!(c[1].probability, 0.0);
        assert!(tail_exceedance(&[], &[1.0]).is_err());
    }

    #[test]
    fn wilson_reference_values() {
        let (lo, hi) = wilson_interval(5, 10, 1.96);
        assert!((lo - 0.236_589_593_615_487).abs() < 1e-9);
        assert!((hi - 0.763_410_406_384_513).abs() < 1e-9);
        let (lo, hi) = wilson_interval(0, 20, 1.96);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.161_130_125_494_933).abs() < 1e-9);
    }

    #[test]
    fn histogram_mass_and_edges() {
        let h = histogram(&[0.0, 9.99, 10.0, 35.0], 10.0).unwrap();
        assert_eq!(h.counts, vec![2, 1, 0, 1]);
        assert_eq!(h.total(), 4);
        assert_eq!(h.edge(3), 30.0);
    }

    #[test]
    fn quantile_is_inverse_ecdf() {
        let s: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile(&s, 0.95).unwrap(), 95.0);
        assert_eq!(quantile(&s, 0.0).unwrap(), 1.0);
        assert_eq!(quantile(&s, 1.0).unwrap(), 100.0);
    }

    #[test]
    fn tail_fit_recovers_weibull_exponent() {
        // exact survival exp(−x^0.5 / 2)
        let curve: Vec<ExceedancePoint> = (1..50)
            .map(|j| {
                let x = j as f64;
                let p = (-(x.sqrt()) / 2.0).exp();
                ExceedancePoint {
                    x,
                    count: 0,
                    probability: p,
                    lower: p,
                    upper: p,
                }
            })
            .collect();
        let fit = fit_tail_exponent(&curve).unwrap();
        assert!((fit.zeta - 0.5).abs() < 1e-9);
        assert!((fit.lambda2 - 2.0).abs() < 1e-9);
    }
}
